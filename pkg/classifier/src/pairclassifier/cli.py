"""CLI: train a pair classifier, then emit predictions for the ordering pipeline."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import make_training_pairs, read_corpus
from .predict import predict_corpus
from .train import TrainConfig, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairorder-classifier")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a classifier on a gold-ordered corpus")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="checkpoint path")
    defaults = TrainConfig()
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--lr", type=float, default=defaults.lr)
    p.add_argument("--batch-size", type=int, default=defaults.batch_size)
    p.add_argument("--max-epochs", type=int, default=defaults.max_epochs)
    p.add_argument("--patience", type=int, default=defaults.patience)
    p.add_argument("--max-seq-len", type=int, default=defaults.max_seq_len)
    p.add_argument("--val-fraction", type=float, default=defaults.val_fraction)
    p.add_argument("--d-model", type=int, default=defaults.d_model)
    p.add_argument("--n-heads", type=int, default=defaults.n_heads)
    p.add_argument("--n-layers", type=int, default=defaults.n_layers)
    p.add_argument("--ffn-dim", type=int, default=defaults.ffn_dim)
    p.add_argument("--dropout", type=float, default=defaults.dropout)
    p.set_defaults(func=_run_train)

    p = sub.add_parser("predict", help="write the prediction TSV for a shuffled corpus")
    p.add_argument("--checkpoint", required=True, type=Path)
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--batch-size", type=int, default=256)
    p.set_defaults(func=_run_predict)
    return parser


def _run_train(args) -> None:
    config = TrainConfig(
        lr=args.lr, batch_size=args.batch_size, max_epochs=args.max_epochs,
        patience=args.patience, max_seq_len=args.max_seq_len,
        val_fraction=args.val_fraction, seed=args.seed, d_model=args.d_model,
        n_heads=args.n_heads, n_layers=args.n_layers, ffn_dim=args.ffn_dim,
        dropout=args.dropout)
    pairs = make_training_pairs(read_corpus(args.corpus), seed=config.seed)
    result = train(pairs, config, args.out)
    print(f"saved {result.checkpoint} (val accuracy {result.val_accuracy:.4f} "
          f"after {result.epochs_run} epochs)")


def _run_predict(args) -> None:
    rows = predict_corpus(args.checkpoint, args.corpus, args.manifest, args.out,
                          batch_size=args.batch_size)
    print(f"wrote {rows} prediction rows to {args.out}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

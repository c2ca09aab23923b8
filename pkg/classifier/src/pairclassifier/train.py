"""Training loop: AdamW fine-tuning recipe with early stopping on validation accuracy."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch import nn

from .data import TrainPair, Vocab, encode_pair, pad_batch
from .model import EncoderConfig, PairClassifier


@dataclass
class TrainConfig:
    # optimizer defaults follow the reference fine-tuning recipe; from-scratch
    # desk runs usually raise lr (see classifier README)
    lr: float = 5e-5
    adam_epsilon: float = 1e-8
    max_seq_len: int = 105
    batch_size: int = 64
    max_epochs: int = 10
    patience: int = 2
    val_fraction: float = 0.1
    seed: int = 0
    d_model: int = 64
    n_heads: int = 4
    n_layers: int = 2
    ffn_dim: int = 128
    dropout: float = 0.1


@dataclass
class TrainResult:
    checkpoint: Path
    val_accuracy: float
    epochs_run: int
    history: list[float]  # validation accuracy per epoch


def _tensors(batch_pairs: list[TrainPair], vocab: Vocab, max_seq_len: int):
    encoded = [encode_pair(vocab, p.sentence_a, p.sentence_b, max_seq_len)
               for p in batch_pairs]
    ids, segments, mask = pad_batch(encoded)
    labels = [p.label for p in batch_pairs]
    return (torch.tensor(ids), torch.tensor(segments), torch.tensor(mask),
            torch.tensor(labels))


def _evaluate(model: PairClassifier, pairs: list[TrainPair], vocab: Vocab,
              config: TrainConfig) -> float:
    model.eval()
    correct = 0
    with torch.no_grad():
        for start in range(0, len(pairs), config.batch_size):
            ids, segments, mask, labels = _tensors(
                pairs[start:start + config.batch_size], vocab, config.max_seq_len)
            predictions = model(ids, segments, mask).argmax(dim=-1)
            correct += int((predictions == labels).sum())
    return correct / len(pairs)


def train(pairs: list[TrainPair], config: TrainConfig, out_path: str | Path,
          log=print) -> TrainResult:
    """Fit the classifier and save the best-validation checkpoint to ``out_path``."""
    if not pairs:
        raise ValueError("empty training set")
    torch.manual_seed(config.seed)

    vocab = Vocab.from_texts(
        text for p in pairs for text in (p.sentence_a, p.sentence_b))
    split_rng = random.Random(config.seed)
    shuffled = list(pairs)
    split_rng.shuffle(shuffled)
    n_val = max(1, int(len(shuffled) * config.val_fraction))
    val_pairs, train_pairs = shuffled[:n_val], shuffled[n_val:]
    if not train_pairs:
        raise ValueError(f"{len(pairs)} pairs leave no training data after the validation split")

    encoder_config = EncoderConfig(
        vocab_size=len(vocab), max_seq_len=config.max_seq_len, d_model=config.d_model,
        n_heads=config.n_heads, n_layers=config.n_layers, ffn_dim=config.ffn_dim,
        dropout=config.dropout)
    model = PairClassifier(encoder_config)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.lr,
                                  eps=config.adam_epsilon)
    loss_fn = nn.CrossEntropyLoss()

    best_accuracy = -1.0
    best_state = None
    epochs_since_best = 0
    history: list[float] = []
    epoch_rng = random.Random(config.seed + 1)
    try:
        for epoch in range(1, config.max_epochs + 1):
            model.train()
            epoch_rng.shuffle(train_pairs)
            total_loss = 0.0
            for start in range(0, len(train_pairs), config.batch_size):
                ids, segments, mask, labels = _tensors(
                    train_pairs[start:start + config.batch_size], vocab,
                    config.max_seq_len)
                optimizer.zero_grad()
                loss = loss_fn(model(ids, segments, mask), labels)
                loss.backward()
                optimizer.step()
                total_loss += loss.detach().item() * len(labels)
            accuracy = _evaluate(model, val_pairs, vocab, config)
            history.append(accuracy)
            log(f"epoch {epoch}: train loss {total_loss / len(train_pairs):.4f}, "
                f"val accuracy {accuracy:.4f}")
            if accuracy > best_accuracy:
                best_accuracy = accuracy
                best_state = {k: v.detach().clone() for k, v in model.state_dict().items()}
                epochs_since_best = 0
            else:
                epochs_since_best += 1
                if epochs_since_best >= config.patience:
                    log(f"early stop: no validation gain for {config.patience} epochs")
                    break
    except RuntimeError as exc:
        if "out of memory" in str(exc).lower():
            raise RuntimeError(
                "out of memory during training: reduce batch_size, d_model or "
                "n_layers") from exc
        raise

    out_path = Path(out_path)
    torch.save({
        "train_config": asdict(config),
        "encoder_config": asdict(encoder_config),
        "vocab": vocab.token_to_id,
        "state_dict": best_state,
        "val_accuracy": best_accuracy,
    }, out_path)
    return TrainResult(checkpoint=out_path, val_accuracy=best_accuracy,
                       epochs_run=len(history), history=history)

#!/usr/bin/env python3
"""Generate a synthetic JSONL corpus for pipeline experiments."""

import argparse
from pathlib import Path

from pairorder.core import save_corpus
from pairorder.synth import STYLES, generate_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--docs", type=int, default=200)
    ap.add_argument("--v-min", type=int, default=1)
    ap.add_argument("--v-max", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--style", choices=STYLES, default="plain",
                    help="'positional' sentences state their own position")
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args()
    docs = generate_corpus(args.docs, args.v_min, args.v_max, args.seed, args.style)
    save_corpus(docs, args.out)
    print(f"wrote {len(docs)} documents to {args.out}")


if __name__ == "__main__":
    main()

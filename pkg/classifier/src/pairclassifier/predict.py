"""Inference: emit the prediction TSV consumed by the ordering pipeline.

One row per unordered pair (i < j, shuffled index space), per document, in
corpus order: ``doc_id  i  j  p_precedes``. Pairs are always presented to the
model as (sentence at i, sentence at j), so the probability has a fixed
orientation.
"""

from __future__ import annotations

from pathlib import Path

import torch

from .data import Vocab, encode_pair, pad_batch, read_corpus, read_manifest
from .model import EncoderConfig, PairClassifier


def load_checkpoint(path: str | Path) -> tuple[PairClassifier, Vocab, dict]:
    payload = torch.load(path, map_location="cpu", weights_only=True)
    encoder_config = EncoderConfig(**payload["encoder_config"])
    model = PairClassifier(encoder_config)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, Vocab(payload["vocab"]), payload["train_config"]


def predict_corpus(checkpoint_path: str | Path, corpus_path: str | Path,
                   manifest_path: str | Path, out_path: str | Path,
                   batch_size: int = 256) -> int:
    """Write predictions for every document pair; returns the row count."""
    model, vocab, train_config = load_checkpoint(checkpoint_path)
    max_seq_len = train_config["max_seq_len"]
    docs = read_corpus(corpus_path)
    shuffles = read_manifest(manifest_path)

    keys: list[tuple[str, int, int]] = []
    encoded: list[tuple[list[int], list[int]]] = []
    for doc in docs:
        doc_id, sentences = doc["id"], doc["sentences"]
        shuffle = shuffles.get(doc_id)
        if shuffle is None:
            raise ValueError(f"document {doc_id!r} missing from manifest")
        if len(shuffle) != len(sentences):
            raise ValueError(f"manifest shuffle for {doc_id!r} has wrong length")
        shown = [sentences[g] for g in shuffle]  # shuffled presentation order
        v = len(shown)
        for i in range(v):
            for j in range(i + 1, v):
                keys.append((doc_id, i, j))
                encoded.append(encode_pair(vocab, shown[i], shown[j], max_seq_len))

    probabilities: list[float] = []
    with torch.no_grad():
        for start in range(0, len(encoded), batch_size):
            ids, segments, mask = pad_batch(encoded[start:start + batch_size])
            p = model.precedence_probability(
                torch.tensor(ids), torch.tensor(segments), torch.tensor(mask))
            probabilities.extend(float(x) for x in p)

    with open(out_path, "w", encoding="utf-8") as fh:
        for (doc_id, i, j), p in zip(keys, probabilities):
            fh.write(f"{doc_id}\t{i}\t{j}\t{min(1.0, max(0.0, p)):.6f}\n")
    return len(keys)

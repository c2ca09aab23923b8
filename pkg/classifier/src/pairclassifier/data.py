"""Training data construction and text encoding.

The classifier consumes the pipeline's file contracts directly (corpus JSONL
and shuffle-manifest JSONL); it deliberately shares no code with the ordering
engine. A training pair is two sentences from one document plus a binary
label: 1 when the first shown sentence precedes the second in gold order.
Presentation order is randomized per pair so the label prior stays balanced;
an unbalanced prior would bias the downstream 0.5 decision threshold.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from pathlib import Path

PAD_ID, UNK_ID, CLS_ID, SEP_ID = 0, 1, 2, 3
SPECIALS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]")

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


@dataclass(frozen=True)
class TrainPair:
    sentence_a: str
    sentence_b: str
    label: int  # 1 = sentence_a precedes sentence_b in gold order

    def __post_init__(self):
        if not self.sentence_a or not self.sentence_b:
            raise ValueError("training pair sentences must be non-empty")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")


def read_corpus(path: str | Path) -> list[dict]:
    """Corpus JSONL contract: one {"id", "sentences"} object per line."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            if "id" not in obj or "sentences" not in obj:
                raise ValueError(f"{path}:{lineno}: expected 'id' and 'sentences'")
            docs.append(obj)
    return docs


def read_manifest(path: str | Path) -> dict[str, list[int]]:
    """Shuffle-manifest contract: {"id", "seed", "shuffle"} per line."""
    shuffles = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            if "id" not in obj or "shuffle" not in obj:
                raise ValueError(f"{path}:{lineno}: expected 'id' and 'shuffle'")
            shuffles[obj["id"]] = list(obj["shuffle"])
    return shuffles


def make_training_pairs(docs: list[dict], seed: int) -> list[TrainPair]:
    """Every (v choose 2) sentence pair per document, presentation coin-flipped."""
    rng = random.Random(seed)
    pairs = []
    for doc in docs:
        sentences = doc["sentences"]
        v = len(sentences)
        for g1 in range(v):
            for g2 in range(g1 + 1, v):
                if rng.random() < 0.5:
                    pairs.append(TrainPair(sentences[g1], sentences[g2], 1))
                else:
                    pairs.append(TrainPair(sentences[g2], sentences[g1], 0))
    return pairs


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class Vocab:
    """Word-level vocabulary with BERT-style special tokens."""

    def __init__(self, token_to_id: dict[str, int]):
        self.token_to_id = token_to_id

    @classmethod
    def from_texts(cls, texts) -> "Vocab":
        token_to_id = {tok: idx for idx, tok in enumerate(SPECIALS)}
        for text in texts:
            for tok in tokenize(text):
                if tok not in token_to_id:
                    token_to_id[tok] = len(token_to_id)
        return cls(token_to_id)

    def __len__(self) -> int:
        return len(self.token_to_id)

    def encode_tokens(self, tokens: list[str]) -> list[int]:
        return [self.token_to_id.get(tok, UNK_ID) for tok in tokens]


def encode_pair(vocab: Vocab, sentence_a: str, sentence_b: str,
                max_seq_len: int) -> tuple[list[int], list[int]]:
    """[CLS] a [SEP] b [SEP] with segment ids 0/1, truncated longest-first."""
    tokens_a = tokenize(sentence_a)
    tokens_b = tokenize(sentence_b)
    budget = max_seq_len - 3  # specials
    while len(tokens_a) + len(tokens_b) > budget:
        longer = tokens_a if len(tokens_a) >= len(tokens_b) else tokens_b
        longer.pop()
    ids = ([CLS_ID] + vocab.encode_tokens(tokens_a) + [SEP_ID]
           + vocab.encode_tokens(tokens_b) + [SEP_ID])
    segments = [0] * (len(tokens_a) + 2) + [1] * (len(tokens_b) + 1)
    return ids, segments


def pad_batch(encoded: list[tuple[list[int], list[int]]]):
    """Pad a batch of (ids, segments) to a common length; returns id/segment/mask lists."""
    width = max(len(ids) for ids, _ in encoded)
    batch_ids, batch_segments, batch_mask = [], [], []
    for ids, segments in encoded:
        pad = width - len(ids)
        batch_ids.append(ids + [PAD_ID] * pad)
        batch_segments.append(segments + [0] * pad)
        batch_mask.append([1] * len(ids) + [0] * pad)
    return batch_ids, batch_segments, batch_mask

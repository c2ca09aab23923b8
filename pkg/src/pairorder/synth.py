"""Synthetic corpora for experiments and tests.

Two styles:

* ``plain``       random filler sentences; order information exists only in
                  the gold arrangement, so only the gold oracle can solve it.
* ``positional``  every sentence states its own position ("step k of v ..."),
                  so a text-only pair classifier can recover the order.
"""

from __future__ import annotations

import random

from .core import Document, ValidationError, derive_seed

_WORDS = (
    "valley", "harbor", "lantern", "meadow", "quarry", "drift", "ember", "tide",
    "granite", "willow", "comet", "sparrow", "mill", "archive", "garden", "signal",
    "copper", "orchard", "ridge", "cellar", "anchor", "compass", "thicket", "plume",
)

STYLES = ("plain", "positional")


def _filler(rng: random.Random, n_words: int) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(n_words))


def make_document(doc_id: str, v: int, seed: int, style: str = "plain") -> Document:
    if style not in STYLES:
        raise ValidationError(f"unknown corpus style {style!r}")
    rng = random.Random(derive_seed("synth", seed, doc_id))
    sentences = []
    for k in range(v):
        filler = _filler(rng, rng.randint(3, 7))
        if style == "positional":
            sentences.append(f"step {k + 1} of {v}: {filler}.")
        else:
            sentences.append(f"{filler}.")
    return Document(id=doc_id, sentences=tuple(sentences))


def generate_corpus(n_docs: int, v_min: int, v_max: int, seed: int,
                    style: str = "plain", id_prefix: str = "doc") -> list[Document]:
    """Deterministic corpus with document lengths uniform in [v_min, v_max]."""
    if n_docs < 1:
        raise ValidationError(f"corpus size must be >= 1, got {n_docs}")
    if not 1 <= v_min <= v_max:
        raise ValidationError(f"need 1 <= v_min <= v_max, got [{v_min}, {v_max}]")
    rng = random.Random(derive_seed("synth-corpus", seed))
    docs = []
    for n in range(n_docs):
        v = rng.randint(v_min, v_max)
        docs.append(make_document(f"{id_prefix}{n:05d}", v, seed, style))
    return docs

"""Core data model: documents, permutations, deterministic shuffles, pair enumeration.

Conventions used throughout the package:

* A permutation is a tuple of ints that is a bijection on ``{0, ..., v-1}``.
* ``ShuffledDocument.shuffle`` maps shuffled position -> gold position, i.e.
  the sentence shown at shuffled slot ``k`` is ``doc.sentences[shuffle[k]]``.
* Every downstream artifact (prediction files, predicted orders) speaks in
  shuffled index space; gold positions appear only in the shuffle manifest.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Input data violates a documented invariant (exit code 1 in the CLI)."""


# ---------------------------------------------------------------------------
# permutations

def is_permutation(values: Sequence[int]) -> bool:
    """True iff ``values`` is a bijection on {0..len(values)-1}."""
    v = len(values)
    seen = [False] * v
    for x in values:
        if not isinstance(x, int) or isinstance(x, bool):
            return False
        if not 0 <= x < v or seen[x]:
            return False
        seen[x] = True
    return True


def validate_permutation(values: Sequence[int]) -> tuple[int, ...]:
    if not is_permutation(values):
        raise ValidationError(f"not a permutation of 0..{len(values) - 1}: {list(values)!r}")
    return tuple(values)


def invert_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    """Inverse bijection: result[perm[k]] == k."""
    inv = [0] * len(perm)
    for pos, val in enumerate(perm):
        inv[val] = pos
    return tuple(inv)


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class Document:
    """One document: unique id plus its sentences in gold order (v >= 1)."""

    id: str
    sentences: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if not self.id or not isinstance(self.id, str):
            raise ValidationError("document id must be a non-empty string")
        if len(self.sentences) < 1:
            raise ValidationError(f"document {self.id!r} has an empty sentence list")
        for s in self.sentences:
            if not isinstance(s, str) or not s:
                raise ValidationError(f"document {self.id!r} contains an empty sentence")

    @property
    def v(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class ShuffledDocument:
    """A document's shuffled presentation, regenerable from (seed, doc_id)."""

    doc_id: str
    shuffle: tuple[int, ...]  # shuffled position -> gold position
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "shuffle", validate_permutation(self.shuffle))

    @property
    def v(self) -> int:
        return len(self.shuffle)

    def gold_order(self) -> tuple[int, ...]:
        """Gold reading order expressed in shuffled index space (the inverse shuffle)."""
        return invert_permutation(self.shuffle)

    def sentences_in_shuffled_order(self, doc: Document) -> tuple[str, ...]:
        if doc.id != self.doc_id or doc.v != self.v:
            raise ValidationError(f"shuffle for {self.doc_id!r} does not match document {doc.id!r}")
        return tuple(doc.sentences[g] for g in self.shuffle)


@dataclass(frozen=True)
class PairPrediction:
    """Probability that the sentence at shuffled index i precedes that at j (i < j)."""

    doc_id: str
    i: int
    j: int
    p_precedes: float

    def __post_init__(self):
        if not 0 <= self.i < self.j:
            raise ValidationError(f"pair indices must satisfy 0 <= i < j, got ({self.i}, {self.j})")
        if not 0.0 <= self.p_precedes <= 1.0:
            raise ValidationError(f"p_precedes outside [0, 1]: {self.p_precedes}")


# ---------------------------------------------------------------------------
# deterministic seeding

def derive_seed(*parts: object) -> int:
    """Stable 64-bit seed from a tuple of key parts (length-prefixed, so keys never collide)."""
    h = hashlib.sha256()
    for part in parts:
        raw = str(part).encode("utf-8")
        h.update(len(raw).to_bytes(4, "little"))
        h.update(raw)
    return int.from_bytes(h.digest()[:8], "little")


def derive_unit(*parts: object) -> float:
    """Deterministic uniform in [0, 1) keyed by ``parts``."""
    return derive_seed(*parts) / 2.0**64


# ---------------------------------------------------------------------------
# operations

def enumerate_pairs(v: int) -> list[tuple[int, int]]:
    """All v*(v-1)/2 unordered index pairs (i, j), i < j, in lexicographic order."""
    if v < 1:
        raise ValidationError(f"sentence count must be >= 1, got {v}")
    return [(i, j) for i in range(v) for j in range(i + 1, v)]


def shuffle_document(doc: Document, seed: int) -> ShuffledDocument:
    """Uniform shuffle drawn from a stream keyed by (seed, doc.id).

    Keying per document makes the shuffle independent of corpus order and of
    any parallel processing schedule.
    """
    rng = random.Random(derive_seed("shuffle", seed, doc.id))
    perm = list(range(doc.v))
    rng.shuffle(perm)
    return ShuffledDocument(doc_id=doc.id, shuffle=tuple(perm), seed=seed)


# ---------------------------------------------------------------------------
# corpus and manifest files (JSONL, UTF-8)

def load_corpus(path: str | Path) -> list[Document]:
    """Read a JSONL corpus: one ``{"id": ..., "sentences": [...]}`` object per line."""
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{lineno}: malformed JSON: {exc}") from exc
            if not isinstance(obj, dict) or "id" not in obj or "sentences" not in obj:
                raise ValidationError(f"{path}:{lineno}: expected an object with 'id' and 'sentences'")
            doc_id, sentences = obj["id"], obj["sentences"]
            if not isinstance(doc_id, str):
                raise ValidationError(f"{path}:{lineno}: 'id' must be a string")
            if not isinstance(sentences, list) or not all(isinstance(s, str) for s in sentences):
                raise ValidationError(f"{path}:{lineno}: 'sentences' must be an array of strings")
            if doc_id in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
            try:
                doc = Document(id=doc_id, sentences=tuple(sentences))
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
            seen.add(doc_id)
            docs.append(doc)
    return docs


def save_corpus(docs: Iterable[Document], path: str | Path) -> None:
    """Write the canonical JSONL form (stable key order, no extra whitespace)."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"id": doc.id, "sentences": list(doc.sentences)},
                                ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")


def save_manifest(shdocs: Iterable[ShuffledDocument], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sh in shdocs:
            fh.write(json.dumps({"id": sh.doc_id, "seed": sh.seed, "shuffle": list(sh.shuffle)},
                                ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")


def load_manifest(path: str | Path) -> dict[str, ShuffledDocument]:
    """Read a shuffle manifest; returns {doc_id: ShuffledDocument} in file order."""
    out: dict[str, ShuffledDocument] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{lineno}: malformed JSON: {exc}") from exc
            try:
                sh = ShuffledDocument(doc_id=obj["id"], shuffle=tuple(obj["shuffle"]), seed=obj["seed"])
            except (KeyError, TypeError, ValidationError) as exc:
                raise ValidationError(f"{path}:{lineno}: bad manifest entry: {exc}") from exc
            if sh.doc_id in out:
                raise ValidationError(f"{path}:{lineno}: duplicate document id {sh.doc_id!r}")
            out[sh.doc_id] = sh
    return out

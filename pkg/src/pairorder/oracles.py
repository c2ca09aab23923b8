"""Pairwise precedence oracles: gold truth, seeded noise, external prediction files.

An oracle answers "does the sentence at shuffled index i precede the one at
shuffled index j?" with a probability. Only pairs with i < j are ever stored
or queried; the reverse direction is the complement, so antisymmetry holds by
construction. Probability >= 0.5 means "i before j" (exactly 0.5 keeps the
shuffled input order).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

from .core import PairPrediction, ShuffledDocument, ValidationError, derive_unit


class MissingPolicy(enum.Enum):
    """What file_query does when a pair is absent from the prediction table."""

    STRICT = "strict"            # raise: silent fallback would corrupt evaluation
    INPUT_ORDER = "input-order"  # assume 1.0, i.e. keep the shuffled input order


def _check_pair(i: int, j: int, v: int) -> None:
    if not 0 <= i < j < v:
        raise ValidationError(f"pair ({i}, {j}) out of range for v={v}")


def gold_query(shdoc: ShuffledDocument, i: int, j: int) -> float:
    """1.0 if i's sentence precedes j's in the gold order, else 0.0."""
    _check_pair(i, j, shdoc.v)
    return 1.0 if shdoc.shuffle[i] < shdoc.shuffle[j] else 0.0


def noisy_query(shdoc: ShuffledDocument, i: int, j: int,
                flip_probability: float, seed: int) -> float:
    """Gold answer, flipped with probability ``flip_probability``.

    The flip decision is keyed by (seed, doc_id, i, j), so repeated queries
    for the same pair always agree and results do not depend on query order.
    """
    if not 0.0 <= flip_probability <= 1.0:
        raise ValidationError(f"flip probability outside [0, 1]: {flip_probability}")
    g = gold_query(shdoc, i, j)
    u = derive_unit("noise", seed, shdoc.doc_id, i, j)
    return 1.0 - g if u < flip_probability else g


@dataclass(frozen=True)
class PredictionTable:
    """Map (doc_id, i, j) with i < j -> probability that i precedes j."""

    entries: dict[tuple[str, int, int], float]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: tuple[str, int, int]) -> bool:
        return key in self.entries

    def doc_slice(self, doc_id: str) -> dict[tuple[str, int, int], float]:
        return {k: p for k, p in self.entries.items() if k[0] == doc_id}


def load_predictions(path: str | Path) -> PredictionTable:
    """Read a prediction TSV: doc_id, i, j, p_precedes with i < j, no header."""
    entries: dict[tuple[str, int, int], float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 4:
                raise ValidationError(f"{path}:{lineno}: expected 4 tab-separated columns, got {len(cols)}")
            doc_id, i_s, j_s, p_s = cols
            try:
                i, j = int(i_s), int(j_s)
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: non-integer index") from exc
            try:
                p = float(p_s)
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: bad probability {p_s!r}") from exc
            try:
                pred = PairPrediction(doc_id=doc_id, i=i, j=j, p_precedes=p)
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
            key = (pred.doc_id, pred.i, pred.j)
            if key in entries:
                raise ValidationError(f"{path}:{lineno}: duplicate pair {key}")
            entries[key] = pred.p_precedes
    return PredictionTable(entries=entries)


def file_query(table: PredictionTable, doc_id: str, i: int, j: int,
               missing: MissingPolicy = MissingPolicy.STRICT) -> float:
    if not 0 <= i < j:
        raise ValidationError(f"pair indices must satisfy 0 <= i < j, got ({i}, {j})")
    key = (doc_id, i, j)
    p = table.entries.get(key)
    if p is not None:
        return p
    if missing is MissingPolicy.STRICT:
        raise ValidationError(f"missing prediction for pair ({doc_id!r}, {i}, {j})")
    return 1.0

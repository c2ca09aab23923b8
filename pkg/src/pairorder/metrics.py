"""Evaluation metrics and corpus-level analyses.

All per-document operations take the predicted order and the gold order as
permutations over the same index domain (shuffled index space in the
pipeline). A document of length 1 has exactly one possible order, so its
degenerate scores are defined as perfect: acc = tau = rouge_s = lcs = 1.

Aggregation is macro: every corpus figure is an unweighted mean of
per-document values, and percentages are reported on a 0..100 scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import fmean
from typing import Iterable, Mapping, Sequence

from .core import ValidationError, is_permutation

DISPLACEMENT_WINDOWS = (1, 2, 3)
LONG_DOC_THRESHOLD = 10


def _check_orders(pred: Sequence[int], gold: Sequence[int]) -> int:
    if len(pred) != len(gold):
        raise ValidationError(f"length mismatch: predicted {len(pred)} vs gold {len(gold)}")
    if not is_permutation(pred) or not is_permutation(gold):
        raise ValidationError("orders must be permutations of 0..v-1")
    return len(pred)


# ---------------------------------------------------------------------------
# per-document metrics

def sentence_accuracy(pred: Sequence[int], gold: Sequence[int]) -> float:
    """Fraction of positions holding exactly the gold sentence."""
    v = _check_orders(pred, gold)
    return sum(1 for p, g in zip(pred, gold) if p == g) / v


def count_inversions_quadratic(seq: Sequence[int]) -> int:
    """Inversions by exhaustive pair counting, O(v^2)."""
    n = len(seq)
    return sum(1 for a in range(n) for b in range(a + 1, n) if seq[a] > seq[b])


def count_inversions_mergesort(seq: Sequence[int]) -> int:
    """Inversions via merge-sort counting, O(v log v)."""

    def count(items: list[int]) -> tuple[list[int], int]:
        if len(items) <= 1:
            return items, 0
        mid = len(items) // 2
        left, inv_l = count(items[:mid])
        right, inv_r = count(items[mid:])
        merged: list[int] = []
        inversions = inv_l + inv_r
        i = j = 0
        while i < len(left) and j < len(right):
            if right[j] < left[i]:
                merged.append(right[j])
                j += 1
                inversions += len(left) - i  # right[j] jumps over every remaining left item
            else:
                merged.append(left[i])
                i += 1
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged, inversions

    return count(list(seq))[1]


_EXHAUSTIVE_INVERSIONS_MAX_V = 32


def kendall_tau(pred: Sequence[int], gold: Sequence[int]) -> float:
    """tau = 1 - 2*I / (v choose 2), I = pairs in the wrong relative order.

    Exhaustive pair counting up to v=32, merge-sort counting beyond; both
    counters are exposed and agree (property-tested). v=1 is defined as 1.0.
    """
    v = _check_orders(pred, gold)
    if v == 1:
        return 1.0
    rank_gold = {s: idx for idx, s in enumerate(gold)}
    relabeled = [rank_gold[s] for s in pred]
    if v <= _EXHAUSTIVE_INVERSIONS_MAX_V:
        inversions = count_inversions_quadratic(relabeled)
    else:
        inversions = count_inversions_mergesort(relabeled)
    return 1.0 - 2.0 * inversions / (v * (v - 1) // 2)


def skip_bigrams(order: Sequence[int]) -> set[tuple[int, int]]:
    """All ordered sentence pairs (a, b) with a appearing before b."""
    v = len(order)
    return {(order[a], order[b]) for a in range(v) for b in range(a + 1, v)}


def rouge_s(pred: Sequence[int], gold: Sequence[int]) -> float:
    """Fraction of skip-bigrams whose relative order is predicted correctly.

    Gap-insensitive by construction; computed from the literal skip-bigram
    set intersection, not via the tau identity, so the two stay independent
    cross-checks of each other.
    """
    v = _check_orders(pred, gold)
    if v == 1:
        return 1.0
    common = skip_bigrams(pred) & skip_bigrams(gold)
    return len(common) / (v * (v - 1) // 2)


def lcs_ratio(pred: Sequence[int], gold: Sequence[int]) -> float:
    """Longest common subsequence length (standard DP) divided by v."""
    v = _check_orders(pred, gold)
    prev = [0] * (v + 1)
    for a in range(1, v + 1):
        cur = [0] * (v + 1)
        for b in range(1, v + 1):
            if pred[a - 1] == gold[b - 1]:
                cur[b] = prev[b - 1] + 1
            else:
                cur[b] = max(prev[b], cur[b - 1])
        prev = cur
    return prev[v] / v


def displacement_within(pred: Sequence[int], gold: Sequence[int], window: int) -> float:
    """Fraction of sentences placed within ``window`` positions of gold, either direction."""
    v = _check_orders(pred, gold)
    if window < 1:
        raise ValidationError(f"window must be >= 1, got {window}")
    pos_pred = {s: idx for idx, s in enumerate(pred)}
    pos_gold = {s: idx for idx, s in enumerate(gold)}
    near = sum(1 for s in pos_gold if abs(pos_pred[s] - pos_gold[s]) <= window)
    return near / v


@dataclass(frozen=True)
class DocumentScore:
    doc_id: str
    v: int
    exact_match: bool
    acc: float
    tau: float
    rouge_s: float
    lcs_ratio: float
    within_window: dict[int, float] = field(default_factory=dict)
    length_mismatch: bool = False


def score_document(doc_id: str, pred: Sequence[int], gold: Sequence[int],
                   windows: Sequence[int] = DISPLACEMENT_WINDOWS) -> DocumentScore:
    v = _check_orders(pred, gold)
    return DocumentScore(
        doc_id=doc_id,
        v=v,
        exact_match=tuple(pred) == tuple(gold),
        acc=sentence_accuracy(pred, gold),
        tau=kendall_tau(pred, gold),
        rouge_s=rouge_s(pred, gold),
        lcs_ratio=lcs_ratio(pred, gold),
        within_window={w: displacement_within(pred, gold, w) for w in windows},
    )


# ---------------------------------------------------------------------------
# corpus aggregation

def pmr(scores: Sequence[DocumentScore]) -> float:
    """Percentage of documents whose entire order was predicted exactly."""
    if not scores:
        raise ValidationError("cannot compute PMR of an empty corpus")
    return 100.0 * sum(1 for s in scores if s.exact_match) / len(scores)


def mismatch_rate(orders: Sequence[Sequence[int]], lengths: Sequence[int]) -> float:
    """Percentage of documents whose predicted order has the wrong length or is
    not a valid permutation. Always 0.0 for constraint-solver output; nonzero
    only for external generative baselines."""
    if len(orders) != len(lengths):
        raise ValidationError("orders and lengths differ in count")
    if not orders:
        return 0.0
    bad = sum(1 for order, v in zip(orders, lengths)
              if len(order) != v or not is_permutation(order))
    return 100.0 * bad / len(orders)


@dataclass(frozen=True)
class CorpusReport:
    n_docs: int          # scored + mismatched
    n_scored: int
    n_mismatched: int
    pmr: float
    acc: float           # percentage
    tau: float           # mean, in [-1, 1]
    rouge_s: float       # percentage
    lcs: float           # percentage
    mismatch_pct: float
    displacement: dict[int, float]          # window -> percentage
    long_threshold: int | None = None
    long_report: "CorpusReport | None" = None


def aggregate(scores: Sequence[DocumentScore], mismatched_lengths: Sequence[int] = (),
              long_threshold: int | None = LONG_DOC_THRESHOLD) -> CorpusReport:
    """Macro-average per-document scores into a corpus report.

    Mismatched documents contribute only to the mismatch percentage; the
    v > threshold sub-report is recomputed over the long subset and reported
    as absent (None) when that subset has no scored documents.
    """
    if not scores:
        raise ValidationError("cannot aggregate an empty corpus")
    windows = tuple(scores[0].within_window)
    for s in scores:
        if tuple(s.within_window) != windows:
            raise ValidationError("inconsistent displacement windows across documents")
    n_scored = len(scores)
    n_mismatched = len(mismatched_lengths)
    n_docs = n_scored + n_mismatched
    long_report = None
    if long_threshold is not None:
        long_report = filter_long(scores, long_threshold, mismatched_lengths)
    return CorpusReport(
        n_docs=n_docs,
        n_scored=n_scored,
        n_mismatched=n_mismatched,
        pmr=pmr(scores),
        acc=100.0 * fmean(s.acc for s in scores),
        tau=fmean(s.tau for s in scores),
        rouge_s=100.0 * fmean(s.rouge_s for s in scores),
        lcs=100.0 * fmean(s.lcs_ratio for s in scores),
        mismatch_pct=100.0 * n_mismatched / n_docs,
        displacement={w: 100.0 * fmean(s.within_window[w] for s in scores) for w in windows},
        long_threshold=long_threshold,
        long_report=long_report,
    )


def filter_long(scores: Sequence[DocumentScore], threshold: int = LONG_DOC_THRESHOLD,
                mismatched_lengths: Sequence[int] = ()) -> CorpusReport | None:
    """Report restricted to documents with v > threshold; None when none qualify."""
    if threshold < 1:
        raise ValidationError(f"long-document threshold must be >= 1, got {threshold}")
    subset = [s for s in scores if s.v > threshold]
    if not subset:
        return None
    long_mismatched = [v for v in mismatched_lengths if v > threshold]
    return aggregate(subset, long_mismatched, long_threshold=None)


# ---------------------------------------------------------------------------
# report emission

def report_to_dict(report: CorpusReport) -> dict:
    out = {
        "n_docs": report.n_docs,
        "n_scored": report.n_scored,
        "n_mismatched": report.n_mismatched,
        "pmr": report.pmr,
        "acc": report.acc,
        "tau": report.tau,
        "rouge_s": report.rouge_s,
        "lcs": report.lcs,
        "mismatch_pct": report.mismatch_pct,
        "displacement": {str(w): p for w, p in report.displacement.items()},
    }
    if report.long_threshold is not None:
        out["long_threshold"] = report.long_threshold
        out["long"] = report_to_dict(report.long_report) if report.long_report else None
    return out


def _metric_row(label: str, report: CorpusReport) -> list[str]:
    return [label, f"{report.pmr:.2f}", f"{report.acc:.2f}", f"{report.tau:.2f}",
            f"{report.rouge_s:.2f}", f"{report.lcs:.2f}"]


def format_report(report: CorpusReport) -> str:
    """Aligned-column text report: headline metrics plus analysis sections."""
    rows = [["", "PMR", "Acc", "Tau", "Rouge-S", "LCS"], _metric_row("overall", report)]
    if report.long_report is not None:
        rows.append(_metric_row(f"v>{report.long_threshold}", report.long_report))
    widths = [max(len(r[c]) for r in rows) for c in range(6)]
    lines = [
        f"documents: {report.n_docs}  scored: {report.n_scored}  "
        f"mismatched: {report.n_mismatched} ({report.mismatch_pct:.2f}%)",
        "",
    ]
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip())
    lines.append("")
    lines.append("displacement (% of sentences within w of gold position)")
    lines.append("  overall  " + "  ".join(
        f"w={w} {p:6.2f}" for w, p in sorted(report.displacement.items())))
    if report.long_threshold is not None:
        if report.long_report is not None:
            lines.append(f"  v>{report.long_threshold}     " + "  ".join(
                f"w={w} {p:6.2f}" for w, p in sorted(report.long_report.displacement.items())))
            lines.append("")
            lines.append(
                f"documents with v > {report.long_threshold}: "
                f"{report.long_report.n_scored} scored, "
                f"{report.long_report.n_mismatched} mismatched "
                f"({report.long_report.mismatch_pct:.2f}%)")
        else:
            lines.append("")
            lines.append(f"documents with v > {report.long_threshold}: none")
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# human preference aggregation

CHOICES = ("A", "B", "NoPreference")


@dataclass(frozen=True)
class HumanEvalReport:
    system_one: str
    system_two: str
    n_votes: int
    pct_one: float
    pct_none: float
    pct_two: float
    # mean story length (tokens) per vote category; None without token data
    avg_tokens: dict[str, float | None] | None = None


def human_eval_aggregate(annotations: Sequence[tuple[str, str, str]],
                         labels: Mapping[str, tuple[str, str]],
                         story_tokens: Mapping[str, int] | None = None) -> HumanEvalReport:
    """Three-way vote percentages from pairwise preference annotations.

    ``annotations`` holds (story_id, judge_id, choice) with choice one of
    A / B / NoPreference; ``labels`` maps story_id -> (system shown as A,
    system shown as B). Exactly two distinct systems must appear. Display
    order follows their first appearance in ``labels``. When ``story_tokens``
    is given, the report also carries the mean story length behind each vote
    category, which is what separates long-story from short-story preferences.
    """
    if not annotations:
        raise ValidationError("no annotations to aggregate")
    systems: list[str] = []
    for a, b in labels.values():
        for name in (a, b):
            if name not in systems:
                systems.append(name)
    if len(systems) != 2:
        raise ValidationError(f"expected exactly 2 systems in labels, got {systems}")
    counts = {systems[0]: 0, systems[1]: 0, "NoPreference": 0}
    token_sums = {systems[0]: 0, systems[1]: 0, "NoPreference": 0}
    seen: set[tuple[str, str]] = set()
    for story_id, judge_id, choice in annotations:
        if story_id not in labels:
            raise ValidationError(f"annotation references unknown story {story_id!r}")
        if (story_id, judge_id) in seen:
            raise ValidationError(f"duplicate annotation for story {story_id!r} by judge {judge_id!r}")
        seen.add((story_id, judge_id))
        if choice not in CHOICES:
            raise ValidationError(f"bad choice {choice!r} (expected one of {CHOICES})")
        if choice == "NoPreference":
            category = "NoPreference"
        else:
            sys_a, sys_b = labels[story_id]
            category = sys_a if choice == "A" else sys_b
        counts[category] += 1
        if story_tokens is not None:
            if story_id not in story_tokens:
                raise ValidationError(f"no token count for story {story_id!r}")
            token_sums[category] += story_tokens[story_id]
    n = len(annotations)
    avg_tokens = None
    if story_tokens is not None:
        avg_tokens = {cat: (token_sums[cat] / counts[cat] if counts[cat] else None)
                      for cat in counts}
    return HumanEvalReport(
        system_one=systems[0],
        system_two=systems[1],
        n_votes=n,
        pct_one=100.0 * counts[systems[0]] / n,
        pct_none=100.0 * counts["NoPreference"] / n,
        pct_two=100.0 * counts[systems[1]] / n,
        avg_tokens=avg_tokens,
    )


def format_human_eval(report: HumanEvalReport) -> str:
    head = [report.system_one, "No Preference", report.system_two]
    vals = [f"{report.pct_one:.2f}%", f"{report.pct_none:.2f}%", f"{report.pct_two:.2f}%"]
    widths = [max(len(h), len(v)) for h, v in zip(head, vals)]
    lines = [
        "  ".join(h.rjust(w) for h, w in zip(head, widths)),
        "  ".join(v.rjust(w) for v, w in zip(vals, widths)),
        f"votes: {report.n_votes}",
    ]
    if report.avg_tokens is not None:
        cats = [report.system_one, "NoPreference", report.system_two]
        rendered = ["n/a" if report.avg_tokens[c] is None else f"{report.avg_tokens[c]:.0f}"
                    for c in cats]
        lines.append("avg story tokens: " + "  ".join(
            f"{c} {r}" for c, r in zip(cats, rendered)))
    return "\n".join(lines) + "\n"

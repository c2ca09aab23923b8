"""CLI orchestration: shuffle corpora, run oracles through sorters, score, report.

Subcommands are pure file-in/file-out so external classifiers interoperate
through files alone:

    pairorder shuffle    corpus.jsonl -> shuffle manifest (JSONL)
    pairorder order      corpus + manifest + oracle -> predicted orders (TSV)
    pairorder eval       corpus + manifest + orders -> report (JSON + text)
    pairorder human-eval annotations CSV + labels CSV -> report (JSON + text)

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .core import (Document, ShuffledDocument, ValidationError, is_permutation,
                   load_corpus, load_manifest, save_manifest, shuffle_document)
from .metrics import (DocumentScore, aggregate, format_human_eval, format_report,
                      human_eval_aggregate, report_to_dict, score_document)
from .oracles import (MissingPolicy, PredictionTable, file_query, gold_query,
                      load_predictions, noisy_query)
from .ordering import build_constraint_graph, merge_sort_order, topological_sort

ORACLES = ("gold", "noisy", "file")
SORTERS = ("topo", "merge")


@dataclass
class RunConfig:
    corpus: Path
    out: Path
    manifest: Path | None = None
    seed: int = 0
    oracle: str = "gold"
    flip_prob: float = 0.0
    predictions: Path | None = None
    sorter: str = "topo"
    missing: MissingPolicy = MissingPolicy.STRICT
    orders: Path | None = None
    long_threshold: int = 10
    jobs: int = 1

    def __post_init__(self):
        if self.long_threshold < 1:
            raise ValidationError(f"long-doc threshold must be >= 1, got {self.long_threshold}")
        if self.jobs < 1:
            raise ValidationError(f"parallelism degree must be >= 1, got {self.jobs}")
        if self.oracle not in ORACLES:
            raise ValidationError(f"unknown oracle {self.oracle!r}")
        if self.sorter not in SORTERS:
            raise ValidationError(f"unknown sorter {self.sorter!r}")
        if not 0.0 <= self.flip_prob <= 1.0:
            raise ValidationError(f"flip probability outside [0, 1]: {self.flip_prob}")
        if self.oracle == "file" and self.predictions is None:
            raise ValidationError("oracle 'file' requires --predictions")


def _parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Order-preserving map; results are identical for every jobs value."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# ---------------------------------------------------------------------------
# shuffle

def cmd_shuffle(config: RunConfig) -> None:
    docs = load_corpus(config.corpus)
    manifest = [shuffle_document(doc, config.seed) for doc in docs]
    save_manifest(manifest, config.out)


# ---------------------------------------------------------------------------
# order

def _make_query(shdoc: ShuffledDocument, config: RunConfig,
                table: PredictionTable | None) -> Callable[[int, int], float]:
    if config.oracle == "gold":
        return lambda i, j: gold_query(shdoc, i, j)
    if config.oracle == "noisy":
        return lambda i, j: noisy_query(shdoc, i, j, config.flip_prob, config.seed)
    return lambda i, j: file_query(table, shdoc.doc_id, i, j, config.missing)


def _order_one(item) -> tuple[str, tuple[int, ...], int, int]:
    shdoc, config, table = item
    queries = 0
    base = _make_query(shdoc, config, table)

    def counted(i: int, j: int) -> float:
        nonlocal queries
        queries += 1
        return base(i, j)

    if config.sorter == "topo":
        graph = build_constraint_graph(shdoc.v, counted)
        result = topological_sort(graph)
    else:
        result = merge_sort_order(shdoc.v, counted)
    return shdoc.doc_id, result.order, queries, result.dropped_edges


def _manifest_for(docs: Sequence[Document], manifest_path) -> list[ShuffledDocument]:
    manifest = load_manifest(manifest_path)
    shdocs = []
    for doc in docs:
        sh = manifest.get(doc.id)
        if sh is None:
            raise ValidationError(f"document {doc.id!r} missing from manifest")
        if sh.v != doc.v:
            raise ValidationError(
                f"manifest shuffle for {doc.id!r} has length {sh.v}, document has {doc.v}")
        shdocs.append(sh)
    return shdocs


def cmd_order(config: RunConfig) -> None:
    if config.manifest is None:
        raise ValidationError("order requires --manifest")
    docs = load_corpus(config.corpus)
    shdocs = _manifest_for(docs, config.manifest)
    full_table = load_predictions(config.predictions) if config.oracle == "file" else None
    items = []
    for sh in shdocs:
        # ship only the per-document slice of the table to workers
        table = PredictionTable(full_table.doc_slice(sh.doc_id)) if full_table else None
        items.append((sh, config, table))
    rows = _parallel_map(_order_one, items, config.jobs)
    with open(config.out, "w", encoding="utf-8") as fh:
        for doc_id, order, queries, dropped in rows:
            fh.write(f"{doc_id}\t{' '.join(map(str, order))}\t{queries}\t{dropped}\n")


# ---------------------------------------------------------------------------
# eval

def load_orders(path) -> dict[str, list[int]]:
    """Read a predicted-orders TSV; returns {doc_id: raw order} in file order."""
    out: dict[str, list[int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 4:
                raise ValidationError(f"{path}:{lineno}: expected 4 tab-separated columns, got {len(cols)}")
            doc_id, order_s, queries_s, dropped_s = cols
            if doc_id in out:
                raise ValidationError(f"{path}:{lineno}: duplicate row for document {doc_id!r}")
            try:
                order = [int(tok) for tok in order_s.split()]
                int(queries_s), int(dropped_s)
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: non-integer field") from exc
            out[doc_id] = order
    return out


def _score_one(item) -> DocumentScore:
    doc_id, pred, gold = item
    return score_document(doc_id, pred, gold)


def cmd_eval(config: RunConfig) -> None:
    if config.manifest is None or config.orders is None:
        raise ValidationError("eval requires --manifest and --orders")
    docs = load_corpus(config.corpus)
    shdocs = _manifest_for(docs, config.manifest)
    orders = load_orders(config.orders)
    known = {doc.id for doc in docs}
    for doc_id in orders:
        if doc_id not in known:
            raise ValidationError(f"predicted order for unknown document {doc_id!r}")
    to_score, mismatched_lengths = [], []
    for doc, sh in zip(docs, shdocs):
        if doc.id not in orders:
            raise ValidationError(f"no predicted order for document {doc.id!r}")
        pred = orders[doc.id]
        if len(pred) != doc.v or not is_permutation(pred):
            mismatched_lengths.append(doc.v)
        else:
            to_score.append((doc.id, tuple(pred), sh.gold_order()))
    if not to_score:
        raise ValidationError("no scorable documents (every predicted order mismatched)")
    scores = _parallel_map(_score_one, to_score, config.jobs)
    report = aggregate(scores, mismatched_lengths, config.long_threshold)
    _write_reports(config.out, report_to_dict(report), format_report(report))


def _write_reports(out_prefix, as_dict: dict, as_text: str) -> None:
    prefix = Path(out_prefix)
    prefix.with_suffix(prefix.suffix + ".json").write_text(
        json.dumps(as_dict, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    prefix.with_suffix(prefix.suffix + ".txt").write_text(as_text, encoding="utf-8")


# ---------------------------------------------------------------------------
# human-eval

def read_annotations(path) -> list[tuple[str, str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"story_id", "judge_id", "choice"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(f"{path}: expected CSV header story_id,judge_id,choice")
        return [(row["story_id"], row["judge_id"], row["choice"]) for row in reader]


def read_labels(path) -> dict[str, tuple[str, str]]:
    labels: dict[str, tuple[str, str]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"story_id", "system_a", "system_b"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(f"{path}: expected CSV header story_id,system_a,system_b")
        for row in reader:
            story = row["story_id"]
            if story in labels:
                raise ValidationError(f"{path}: duplicate label row for story {story!r}")
            labels[story] = (row["system_a"], row["system_b"])
    return labels


def cmd_human_eval(annotations_path, labels_path, out_prefix, corpus_path=None) -> None:
    annotations = read_annotations(annotations_path)
    labels = read_labels(labels_path)
    story_tokens = None
    if corpus_path is not None:
        story_tokens = {doc.id: sum(len(s.split()) for s in doc.sentences)
                        for doc in load_corpus(corpus_path)}
    report = human_eval_aggregate(annotations, labels, story_tokens)
    as_dict = {
        "systems": [report.system_one, report.system_two],
        "n_votes": report.n_votes,
        "pct": {report.system_one: report.pct_one,
                report.system_two: report.pct_two,
                "NoPreference": report.pct_none},
    }
    if story_tokens is not None:
        as_dict["story_tokens"] = story_tokens
        as_dict["avg_tokens"] = report.avg_tokens
    _write_reports(out_prefix, as_dict, format_human_eval(report))


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairorder",
                                     description="Sentence ordering from pairwise constraints")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shuffle", help="write a deterministic shuffle manifest")
    _add_common(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_run_shuffle)

    p = sub.add_parser("order", help="recover orders from an oracle")
    _add_common(p)
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", choices=ORACLES, default="gold")
    p.add_argument("--flip-prob", type=float, default=0.0)
    p.add_argument("--predictions", type=Path)
    p.add_argument("--sorter", choices=SORTERS, default="topo")
    p.add_argument("--missing", choices=[m.value for m in MissingPolicy], default="strict")
    p.set_defaults(func=_run_order)

    p = sub.add_parser("eval", help="score predicted orders against gold")
    _add_common(p)
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--orders", required=True, type=Path)
    p.add_argument("--long-threshold", type=int, default=10)
    p.set_defaults(func=_run_eval)

    p = sub.add_parser("human-eval", help="aggregate pairwise preference annotations")
    p.add_argument("--annotations", required=True, type=Path)
    p.add_argument("--labels", required=True, type=Path)
    p.add_argument("--corpus", type=Path,
                   help="optional story corpus; adds per-story token counts to the report")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=_run_human_eval)
    return parser


def _run_shuffle(args) -> None:
    cmd_shuffle(RunConfig(corpus=args.corpus, out=args.out, seed=args.seed, jobs=args.jobs))


def _run_order(args) -> None:
    cmd_order(RunConfig(
        corpus=args.corpus, out=args.out, manifest=args.manifest, seed=args.seed,
        oracle=args.oracle, flip_prob=args.flip_prob, predictions=args.predictions,
        sorter=args.sorter, missing=MissingPolicy(args.missing), jobs=args.jobs))


def _run_eval(args) -> None:
    cmd_eval(RunConfig(
        corpus=args.corpus, out=args.out, manifest=args.manifest, orders=args.orders,
        long_threshold=args.long_threshold, jobs=args.jobs))


def _run_human_eval(args) -> None:
    cmd_human_eval(args.annotations, args.labels, args.out, args.corpus)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Sweep oracle noise and report how ordering quality degrades.

For each flip probability, every pairwise answer is independently flipped
with that probability before sorting; the table shows the resulting corpus
metrics for both sorters.
"""

import argparse

from pairorder.core import shuffle_document
from pairorder.metrics import aggregate, score_document
from pairorder.oracles import noisy_query
from pairorder.ordering import build_constraint_graph, merge_sort_order, topological_sort
from pairorder.synth import generate_corpus


def run_level(docs, flip, seed, sorter):
    scores = []
    for doc in docs:
        sh = shuffle_document(doc, seed)

        def query(i, j):
            return noisy_query(sh, i, j, flip, seed)

        if sorter == "topo":
            order = topological_sort(build_constraint_graph(doc.v, query)).order
        else:
            order = merge_sort_order(doc.v, query).order
        scores.append(score_document(doc.id, order, sh.gold_order()))
    return aggregate(scores)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--docs", type=int, default=300)
    ap.add_argument("--v-min", type=int, default=2)
    ap.add_argument("--v-max", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--flips", type=float, nargs="+",
                    default=[0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5])
    args = ap.parse_args()

    docs = generate_corpus(args.docs, args.v_min, args.v_max, args.seed)
    print(f"{'flip':>5}  {'sorter':>6}  {'PMR':>7}  {'Acc':>7}  {'Tau':>6}  "
          f"{'Rouge-S':>7}  {'LCS':>7}")
    for flip in args.flips:
        for sorter in ("topo", "merge"):
            rep = run_level(docs, flip, args.seed, sorter)
            print(f"{flip:5.2f}  {sorter:>6}  {rep.pmr:7.2f}  {rep.acc:7.2f}  "
                  f"{rep.tau:6.2f}  {rep.rouge_s:7.2f}  {rep.lcs:7.2f}")


if __name__ == "__main__":
    main()

"""Shared test utilities: independent oracles kept deliberately separate from
the implementations they check."""

from bisect import bisect_left

from pairorder.core import enumerate_pairs
from pairorder.ordering import ConstraintGraph


def tournament_from_bits(v, bits):
    succ = [[] for _ in range(v)]
    for (i, j), bit in zip(enumerate_pairs(v), bits):
        if bit:
            succ[i].append(j)
        else:
            succ[j].append(i)
    return ConstraintGraph(v=v, successors=tuple(tuple(s) for s in succ))


def transitive_tournament(order):
    """Tournament whose edges all agree with ``order`` (hence acyclic)."""
    v = len(order)
    pos = {node: idx for idx, node in enumerate(order)}
    bits = [pos[i] < pos[j] for i, j in enumerate_pairs(v)]
    return tournament_from_bits(v, bits)


def kahn_is_acyclic(g):
    """Independent cycle detector: in-degree peeling, no DFS."""
    indeg = [0] * g.v
    for _, w in g.edges():
        indeg[w] += 1
    frontier = [u for u in range(g.v) if indeg[u] == 0]
    seen = 0
    while frontier:
        u = frontier.pop()
        seen += 1
        for w in g.successors[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                frontier.append(w)
    return seen == g.v


def lis_length(seq):
    """Independent longest-increasing-subsequence oracle: patience sorting."""
    tails = []
    for x in seq:
        k = bisect_left(tails, x)
        if k == len(tails):
            tails.append(x)
        else:
            tails[k] = x
    return len(tails)

"""Order recovery from pairwise constraints.

A full set of pairwise predictions for one document forms a tournament: a
directed graph with exactly one edge per sentence pair, edge u -> w meaning
"u's sentence precedes w's". Recovery is either depth-first topological sort
over the whole tournament, or a comparator-driven merge sort that queries the
oracle lazily and needs only O(v log v) of the O(v^2) pairs.

A learned classifier can emit inconsistent constraints, so tournaments may
contain cycles. The DFS stays total by skipping (and counting) edges that
point at a node currently on the DFS stack; ``dropped_edges`` is therefore 0
exactly when the tournament is acyclic, and the returned order violates
exactly ``dropped_edges`` constraint edges.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import ValidationError, enumerate_pairs

QueryFn = Callable[[int, int], float]

BRUTE_FORCE_MAX_V = 8  # factorial search; anything larger is out of reach


@dataclass(frozen=True)
class ConstraintGraph:
    """Tournament over shuffled indices: successors[u] = targets of edges u -> w."""

    v: int
    successors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.v < 1 or len(self.successors) != self.v:
            raise ValidationError(f"adjacency size {len(self.successors)} != v={self.v}")
        seen: set[tuple[int, int]] = set()
        for u, targets in enumerate(self.successors):
            for w in targets:
                if w == u:
                    raise ValidationError(f"self-loop at node {u}")
                if not 0 <= w < self.v:
                    raise ValidationError(f"edge target {w} out of range")
                pair = (min(u, w), max(u, w))
                if pair in seen:
                    raise ValidationError(f"both directions present for pair {pair}")
                seen.add(pair)
        if len(seen) != self.v * (self.v - 1) // 2:
            raise ValidationError(
                f"tournament needs {self.v * (self.v - 1) // 2} edges, got {len(seen)}")

    def edges(self):
        for u, targets in enumerate(self.successors):
            for w in targets:
                yield u, w

    def has_edge(self, u: int, w: int) -> bool:
        return w in self.successors[u]


@dataclass(frozen=True)
class OrderingResult:
    order: tuple[int, ...]   # predicted reading order of shuffled indices
    queries_made: int
    dropped_edges: int


def build_constraint_graph(v: int, query: QueryFn) -> ConstraintGraph:
    """Query every pair once; edge i -> j iff query(i, j) >= 0.5, else j -> i."""
    successors: list[list[int]] = [[] for _ in range(v)]
    for i, j in enumerate_pairs(v):
        if query(i, j) >= 0.5:
            successors[i].append(j)
        else:
            successors[j].append(i)
    return ConstraintGraph(v=v, successors=tuple(tuple(s) for s in successors))


def topological_sort(g: ConstraintGraph) -> OrderingResult:
    """Depth-first topological sort, fixed deterministic traversal.

    Roots and out-neighbors are taken in ascending index order; each node is
    prepended to the output once all its descendants are finished. An edge
    into an in-progress node is a back edge (cycle): it is skipped and counted.
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * g.v
    order: deque[int] = deque()
    dropped = 0

    def visit(u: int) -> None:
        nonlocal dropped
        color[u] = GRAY
        for w in g.successors[u]:
            if color[w] == WHITE:
                visit(w)
            elif color[w] == GRAY:
                dropped += 1
            # BLACK targets already sit after u in the final order
        color[u] = BLACK
        order.appendleft(u)

    for root in range(g.v):
        if color[root] == WHITE:
            visit(root)
    return OrderingResult(order=tuple(order), queries_made=0, dropped_edges=dropped)


def merge_sort_order(v: int, query: QueryFn) -> OrderingResult:
    """Top-down merge sort over shuffled indices, querying the oracle on demand.

    Comparator: i before j iff (i < j and query(i, j) >= 0.5) or
    (i > j and query(j, i) < 0.5). Every comparison costs one query, and a
    pair is never compared twice, so queries_made <= v * ceil(log2 v).
    """
    if v < 1:
        raise ValidationError(f"sentence count must be >= 1, got {v}")
    queries = 0

    def precedes(a: int, b: int) -> bool:
        nonlocal queries
        queries += 1
        if a < b:
            return query(a, b) >= 0.5
        return query(b, a) < 0.5

    def sort(items: list[int]) -> list[int]:
        if len(items) <= 1:
            return items
        mid = len(items) // 2
        left, right = sort(items[:mid]), sort(items[mid:])
        merged: list[int] = []
        i = j = 0
        while i < len(left) and j < len(right):
            if precedes(right[j], left[i]):
                merged.append(right[j])
                j += 1
            else:
                merged.append(left[i])
                i += 1
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged

    order = sort(list(range(v)))
    return OrderingResult(order=tuple(order), queries_made=queries, dropped_edges=0)


_PERM_CACHE: dict[int, np.ndarray] = {}


def _all_permutations(v: int) -> np.ndarray:
    """All permutations of 0..v-1 in lexicographic order, one per row."""
    if v not in _PERM_CACHE:
        _PERM_CACHE[v] = np.array(list(itertools.permutations(range(v))), dtype=np.int8)
    return _PERM_CACHE[v]


def brute_force_max_agreement(v: int, query: QueryFn) -> tuple[int, ...]:
    """Test oracle: enumerate all v! orders, return the one satisfying the most edges.

    Ties break to the lexicographically smallest permutation. Not exposed via
    the CLI; the factorial blow-up is capped at v <= 8.
    """
    if v > BRUTE_FORCE_MAX_V:
        raise ValidationError(f"brute force capped at v <= {BRUTE_FORCE_MAX_V}, got {v}")
    if v == 1:
        return (0,)
    perms = _all_permutations(v)
    position = np.empty_like(perms)
    np.put_along_axis(position, perms, np.arange(v, dtype=perms.dtype), axis=1)
    satisfied = np.zeros(len(perms), dtype=np.int16)
    for i, j in enumerate_pairs(v):
        u, w = (i, j) if query(i, j) >= 0.5 else (j, i)
        satisfied += position[:, u] < position[:, w]
    best = int(np.argmax(satisfied))  # first maximum = lexicographically smallest
    return tuple(int(x) for x in perms[best])


def graph_query(g: ConstraintGraph) -> QueryFn:
    """Adapt an existing tournament into a query function (1.0/0.0 answers)."""

    def query(i: int, j: int) -> float:
        if not 0 <= i < j < g.v:
            raise ValidationError(f"pair ({i}, {j}) out of range for v={g.v}")
        return 1.0 if g.has_edge(i, j) else 0.0

    return query


def order_satisfies(order: Sequence[int], g: ConstraintGraph) -> int:
    """Number of constraint edges the given order satisfies."""
    pos = {node: idx for idx, node in enumerate(order)}
    return sum(1 for u, w in g.edges() if pos[u] < pos[w])

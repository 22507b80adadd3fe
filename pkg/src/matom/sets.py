"""Set calculus on the support graph: image, future/past, invariance, convexity.

All operations are pure functions over an immutable :class:`SupportGraph`.
Subsets of ``{0..n-1}`` go in as any iterable of ints and come out as
``frozenset``.  Per-node reachability closures are memoized (the graph is
hashable), which changes nothing observable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import InputError
from .matrix import NonnegativeMatrix

IndexSet = frozenset


@dataclass(frozen=True)
class SupportGraph:
    """Directed graph of the support pattern: edge ``j -> i`` iff ``T[i][j] > 0``."""

    n: int
    succ: tuple[tuple[int, ...], ...]  # succ[j]: nodes receiving mass from j
    pred: tuple[tuple[int, ...], ...]  # pred[i]: nodes sending mass to i

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.succ)

    def edges(self) -> list[tuple[int, int]]:
        return [(j, i) for j in range(self.n) for i in self.succ[j]]

    def has_edge(self, source: int, target: int) -> bool:
        return target in self.succ[source]

    def to_bool_matrix(self) -> np.ndarray:
        """Boolean adjacency with the matrix convention ``adj[i, j] = (j -> i)``."""
        adj = np.zeros((self.n, self.n), dtype=bool)
        for j in range(self.n):
            for i in self.succ[j]:
                adj[i, j] = True
        return adj


def support_graph(matrix: NonnegativeMatrix, threshold: float = 1e-12) -> SupportGraph:
    """Support pattern of a matrix; see :meth:`NonnegativeMatrix.support_mask`."""
    mask = matrix.support_mask(threshold)
    return graph_from_bool(mask)


def graph_from_bool(adj: np.ndarray) -> SupportGraph:
    adj = np.asarray(adj, dtype=bool)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise InputError(f"adjacency must be square, got shape {adj.shape}")
    n = adj.shape[0]
    succ = tuple(tuple(int(i) for i in np.nonzero(adj[:, j])[0]) for j in range(n))
    pred = tuple(tuple(int(j) for j in np.nonzero(adj[i, :])[0]) for i in range(n))
    return SupportGraph(n=n, succ=succ, pred=pred)


def as_support(obj, threshold: float = 1e-12) -> SupportGraph:
    """Coerce a SupportGraph, NonnegativeMatrix or array-like to a SupportGraph."""
    if isinstance(obj, SupportGraph):
        return obj
    if isinstance(obj, NonnegativeMatrix):
        return support_graph(obj, threshold)
    return support_graph(NonnegativeMatrix(obj), threshold)


def validate_subset(graph: SupportGraph, members: Iterable[int]) -> IndexSet:
    out = frozenset(int(x) for x in members)
    for x in out:
        if not 0 <= x < graph.n:
            raise InputError(f"index {x} out of range for dimension {graph.n}")
    return out


# ---------------------------------------------------------------------------
# Image, future, past
# ---------------------------------------------------------------------------


def image(graph, members: Iterable[int]) -> IndexSet:
    """One-step image ``T(A) = {i : some j in A has an edge j -> i}``."""
    g = as_support(graph)
    a = validate_subset(g, members)
    out: set[int] = set()
    for j in a:
        out.update(g.succ[j])
    return frozenset(out)


def _closure(start: Iterable[int], neighbours) -> frozenset:
    seen = set(start)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for y in neighbours[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


@lru_cache(maxsize=65536)
def _node_future(graph: SupportGraph, node: int) -> frozenset:
    return _closure((node,), graph.succ)


@lru_cache(maxsize=65536)
def _node_past(graph: SupportGraph, node: int) -> frozenset:
    return _closure((node,), graph.pred)


def future(graph, members: Iterable[int]) -> IndexSet:
    """Forward reachability closure of A (including A): the minimal invariant superset."""
    g = as_support(graph)
    a = validate_subset(g, members)
    out: set[int] = set()
    for x in a:
        out |= _node_future(g, x)
    return frozenset(out)


def past(graph, members: Iterable[int]) -> IndexSet:
    """Backward reachability closure of A: the minimal co-invariant superset."""
    g = as_support(graph)
    a = validate_subset(g, members)
    out: set[int] = set()
    for x in a:
        out |= _node_past(g, x)
    return frozenset(out)


def strict_future(graph, members: Iterable[int]) -> IndexSet:
    """``F*(A) = F(A) \\ A``."""
    g = as_support(graph)
    a = validate_subset(g, members)
    return future(g, a) - a


def strict_past(graph, members: Iterable[int]) -> IndexSet:
    """``P*(A) = P(A) \\ A``."""
    g = as_support(graph)
    a = validate_subset(g, members)
    return past(g, a) - a


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def is_invariant(graph, members: Iterable[int]) -> bool:
    """No mass leaves A: ``T(A)`` is contained in A."""
    g = as_support(graph)
    a = validate_subset(g, members)
    return image(g, a) <= a


def is_co_invariant(graph, members: Iterable[int]) -> bool:
    g = as_support(graph)
    a = validate_subset(g, members)
    return all(set(g.pred[i]) <= a for i in a)


def is_convex(graph, members: Iterable[int]) -> bool:
    """A equals the intersection of its future and its past."""
    g = as_support(graph)
    a = validate_subset(g, members)
    return (future(g, a) & past(g, a)) == a


def is_irreducible(graph, members: Iterable[int]) -> bool:
    """The subgraph induced on A is strongly connected (and A is nonempty).

    Singletons count as strongly connected whether or not they carry a
    self-loop; the empty set is not irreducible.
    """
    g = as_support(graph)
    a = validate_subset(g, members)
    if not a:
        return False
    root = next(iter(a))
    forward = _closure_within(g.succ, a, root)
    if forward != a:
        return False
    return _closure_within(g.pred, a, root) == a


def _closure_within(neighbours, allowed: frozenset, root: int) -> frozenset:
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in neighbours[x]:
            if y in allowed and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def is_admissible(graph, members: Iterable[int]) -> bool:
    """A is a union of atoms (strongly connected components)."""
    g = as_support(graph)
    a = validate_subset(g, members)
    comp_of = _component_of(g)
    comps = {comp_of[x] for x in a}
    covered = sum(_component_sizes(g)[c] for c in comps)
    return covered == len(a)


def restrict(graph, members: Iterable[int]) -> SupportGraph:
    """Drop every edge touching the complement of ``members`` (size unchanged).

    Graph analogue of the matrix restriction that zeroes rows and columns
    outside the set.
    """
    g = as_support(graph)
    keep = validate_subset(g, members)
    if not keep:
        raise InputError("restriction to the empty set")
    succ = tuple(
        tuple(i for i in g.succ[j] if i in keep) if j in keep else () for j in range(g.n)
    )
    pred = tuple(
        tuple(j for j in g.pred[i] if j in keep) if i in keep else () for i in range(g.n)
    )
    return SupportGraph(n=g.n, succ=succ, pred=pred)


def transpose(graph) -> SupportGraph:
    g = as_support(graph)
    return SupportGraph(n=g.n, succ=g.pred, pred=g.succ)


# ---------------------------------------------------------------------------
# Strongly connected components (iterative Tarjan)
# ---------------------------------------------------------------------------


def strongly_connected_components(graph) -> list[frozenset]:
    """SCCs of the support graph, iteratively (no recursion-depth limit).

    Components come out in reverse topological order of the condensation
    (successors of a component appear before it).
    """
    g = as_support(graph)
    n = g.n
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    components: list[frozenset] = []

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for k in range(pi, len(g.succ[v])):
                w = g.succ[v][k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.add(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
    return components


@lru_cache(maxsize=4096)
def _scc_data(graph: SupportGraph) -> tuple[tuple[frozenset, ...], tuple[int, ...]]:
    comps = tuple(strongly_connected_components(graph))
    comp_of = [0] * graph.n
    for k, comp in enumerate(comps):
        for x in comp:
            comp_of[x] = k
    return comps, tuple(comp_of)


def _component_of(g: SupportGraph) -> tuple[int, ...]:
    return _scc_data(g)[1]


def _component_sizes(g: SupportGraph) -> list[int]:
    return [len(c) for c in _scc_data(g)[0]]

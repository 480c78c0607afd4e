"""Weighted simple DAG: validation, topological order, reachability, quotient graph."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    CycleDetectedError,
    DuplicateEdgeError,
    PartitionArityMismatchError,
    SelfLoopError,
)

# Above this vertex count reachability queries fall back to per-query DFS
# instead of being cached, to keep memory at O(n + m).
REACHABILITY_CACHE_CAP = 2048


@dataclass(frozen=True)
class TopoOrder:
    """A topological order and its inverse permutation."""

    order: tuple[int, ...]
    position: tuple[int, ...]


def _kahn(n: int, succ, indeg_init) -> list[int]:
    """Kahn's algorithm with a min-vertex-id heap for the ready set."""
    indeg = list(indeg_init)
    ready = [u for u in range(n) if indeg[u] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    return order


def _extract_cycle(remaining: set[int], pred) -> list[int]:
    """Walk predecessors inside the unresolved set until a vertex repeats."""
    seen: dict[int, int] = {}
    path: list[int] = []
    u = min(remaining)
    while u not in seen:
        seen[u] = len(path)
        path.append(u)
        u = min(v for v in pred[u] if v in remaining)
    cycle = path[seen[u]:]
    cycle.reverse()
    return cycle


class Dag:
    """A simple directed acyclic graph with vertex weights and edge costs.

    Construction validates the input: vertex ids in range, non-negative
    weights and costs, no self-loops, no parallel edges, and no directed
    cycle.  The instance is immutable afterwards and safe to share between
    threads.
    """

    def __init__(self, weights: Sequence[int], edges: Iterable[tuple[int, int, int]],
                 reach_cache_cap: int = REACHABILITY_CACHE_CAP):
        self.w = tuple(int(x) for x in weights)
        self.n = len(self.w)
        for i, wi in enumerate(self.w):
            if wi < 0:
                raise ValueError(f"negative weight {wi} at vertex {i}")

        succ: list[list[int]] = [[] for _ in range(self.n)]
        pred: list[list[int]] = [[] for _ in range(self.n)]
        seen_pairs: set[tuple[int, int]] = set()
        edge_list: list[tuple[int, int, int]] = []
        for u, v, c in edges:
            u, v, c = int(u), int(v), int(c)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if c < 0:
                raise ValueError(f"negative cost {c} on edge ({u},{v})")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if (u, v) in seen_pairs:
                raise DuplicateEdgeError(f"duplicate edge {u}->{v}")
            seen_pairs.add((u, v))
            edge_list.append((u, v, c))
            succ[u].append(v)
            pred[v].append(u)
        self.edges = tuple(edge_list)
        self.succ = tuple(tuple(sorted(s)) for s in succ)
        self.pred = tuple(tuple(sorted(p)) for p in pred)
        self.cost = {(u, v): c for u, v, c in edge_list}

        order = _kahn(self.n, self.succ, [len(p) for p in self.pred])
        if len(order) < self.n:
            remaining = set(range(self.n)) - set(order)
            raise CycleDetectedError(_extract_cycle(remaining, self.pred))
        position = [0] * self.n
        for idx, u in enumerate(order):
            position[u] = idx
        self.topo = TopoOrder(tuple(order), tuple(position))

        self._cache_reach = self.n <= reach_cache_cap
        self._desc_cache: dict[int, frozenset[int]] = {}
        self._anc_cache: dict[int, frozenset[int]] = {}

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int:
        return sum(self.w)

    @property
    def total_cost(self) -> int:
        return sum(c for _, _, c in self.edges)

    def _check_vertex(self, u: int) -> None:
        if not (0 <= u < self.n):
            raise ValueError(f"vertex {u} out of range for n={self.n}")

    def _reach(self, u: int, adjacency) -> frozenset[int]:
        seen: set[int] = set()
        stack = [u]
        while stack:
            a = stack.pop()
            for b in adjacency[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return frozenset(seen)

    def descendants(self, u: int) -> frozenset[int]:
        """All vertices reachable from u by a non-empty path (u excluded)."""
        self._check_vertex(u)
        if self._cache_reach:
            if u not in self._desc_cache:
                self._desc_cache[u] = self._reach(u, self.succ)
            return self._desc_cache[u]
        return self._reach(u, self.succ)

    def ancestors(self, u: int) -> frozenset[int]:
        """All vertices that reach u by a non-empty path (u excluded)."""
        self._check_vertex(u)
        if self._cache_reach:
            if u not in self._anc_cache:
                self._anc_cache[u] = self._reach(u, self.pred)
            return self._anc_cache[u]
        return self._reach(u, self.pred)

    def path_nodes(self, u: int, v: int) -> frozenset[int]:
        """Interior vertices lying on some u->v path, endpoints excluded."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            return frozenset()
        return self.descendants(u) & self.ancestors(v)


def validate_dag(weights: Sequence[int], edges: Iterable[tuple[int, int, int]]) -> TopoOrder:
    """Validate a raw vertex/edge list and return its deterministic topological order."""
    return Dag(weights, edges).topo


@dataclass(frozen=True)
class QuotientGraph:
    """Graph over part ids induced by a partition; may be cyclic."""

    k: int
    weights: tuple[int, ...]
    edge_costs: dict

    def successors(self, s: int) -> list[int]:
        return sorted(t for (a, t) in self.edge_costs if a == s)

    def find_cycle(self):
        """Return one cycle as a part-id sequence, or None if acyclic."""
        succ = [[] for _ in range(self.k)]
        pred = [[] for _ in range(self.k)]
        indeg = [0] * self.k
        for (s, t) in self.edge_costs:
            succ[s].append(t)
            pred[t].append(s)
            indeg[t] += 1
        order = _kahn(self.k, succ, indeg)
        if len(order) == self.k:
            return None
        remaining = set(range(self.k)) - set(order)
        return _extract_cycle(remaining, pred)

    @property
    def is_acyclic(self) -> bool:
        return self.find_cycle() is None

    @property
    def total_edge_cost(self) -> int:
        return sum(self.edge_costs.values())


def quotient_graph(g: Dag, p) -> QuotientGraph:
    """Contract each part to a node, summing weights and crossing edge costs."""
    assignment = p.assignment
    if len(assignment) != g.n:
        raise PartitionArityMismatchError(
            f"partition covers {len(assignment)} vertices, graph has {g.n}")
    weights = [0] * p.k
    for i, s in enumerate(assignment):
        weights[s] += g.w[i]
    costs: dict = {}
    for u, v, c in g.edges:
        s, t = assignment[u], assignment[v]
        if s != t:
            costs[(s, t)] = costs.get((s, t), 0) + c
    return QuotientGraph(p.k, tuple(weights), costs)

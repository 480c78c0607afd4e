"""Multilevel pipeline: acyclicity-safe coarsening, exact initial partitioning,
projection, and warm-started refinement."""

from __future__ import annotations

from dataclasses import dataclass

from .dag import Dag, TopoOrder
from .errors import InfeasibleInstanceError, InvalidProjectionError
from .exact import INFEASIBLE, OPTIMAL, SolveBudget, branch_and_bound
from .formulations import BuildOptions, build_proposed, decode_partition
from .model import read_solution, write_lp
from .partition import Partition, balance_bound

DEFAULT_REFINE_BUDGET = 10_000


@dataclass(frozen=True)
class CoarseningLevel:
    """One contraction step: the coarser graph plus the fine->coarse mapping."""

    graph: Dag
    mapping: tuple[int, ...]
    order: TopoOrder
    skipped_checks: int = 0


def _contraction_safe(g: Dag, u: int, v: int) -> bool:
    """Contracting edge (u, v) is safe iff no u->v path survives without it."""
    seen = set()
    stack = [w for w in g.succ[u] if w != v]
    while stack:
        a = stack.pop()
        if a == v:
            return False
        if a in seen:
            continue
        seen.add(a)
        stack.extend(g.succ[a])
    return True


def _contract(g: Dag, u: int, v: int):
    """Merge v into u; returns the coarser Dag and the old->new id mapping."""
    mapping = []
    next_id = 0
    for i in range(g.n):
        if i == v:
            mapping.append(-1)
        else:
            mapping.append(next_id)
            next_id += 1
    mapping[v] = mapping[u]
    weights = [0] * (g.n - 1)
    for i in range(g.n):
        weights[mapping[i]] += g.w[i]
    costs: dict[tuple[int, int], int] = {}
    for a, b, c in g.edges:
        na, nb = mapping[a], mapping[b]
        if na == nb:
            continue
        costs[(na, nb)] = costs.get((na, nb), 0) + c
    edges = sorted((a, b, c) for (a, b), c in costs.items())
    return Dag(weights, edges), tuple(mapping)


def coarsen(g: Dag, target_n: int,
            max_weight: int | None = None) -> list[CoarseningLevel]:
    """Contract heavy edges one at a time while preserving acyclicity.

    Stops at target_n vertices or when no safe contraction remains.  The
    current topological index lets us skip the reachability check whenever
    the edge joins consecutively indexed vertices (no interior path can
    exist then).  With max_weight set, contractions that would create a
    vertex heavier than the cap are skipped so the coarsest graph stays
    partitionable under the balance bound.
    """
    if target_n < 2:
        raise ValueError(f"target_n must be >= 2, got {target_n}")
    levels: list[CoarseningLevel] = []
    current = g
    skipped = 0
    while current.n > target_n:
        position = current.topo.position
        candidates = sorted(current.edges, key=lambda e: (-e[2], e[0], e[1]))
        chosen = None
        for u, v, _ in candidates:
            if max_weight is not None and current.w[u] + current.w[v] > max_weight:
                continue
            if position[v] - position[u] == 1:
                skipped += 1
                chosen = (u, v)
                break
            if _contraction_safe(current, u, v):
                chosen = (u, v)
                break
        if chosen is None:
            break
        coarse, mapping = _contract(current, *chosen)
        levels.append(CoarseningLevel(coarse, mapping, coarse.topo, skipped))
        current = coarse
    return levels


def project(p_coarse: Partition, mapping, fine_n: int) -> Partition:
    """Pull a coarse partition back through a fine->coarse mapping."""
    if len(mapping) != fine_n:
        raise InvalidProjectionError(
            f"mapping covers {len(mapping)} vertices, expected {fine_n}")
    coarse = p_coarse.assignment
    for target in mapping:
        if not (0 <= target < len(coarse)):
            raise InvalidProjectionError(f"mapping target {target} out of range")
    return Partition(tuple(coarse[mapping[i]] for i in range(fine_n)), p_coarse.k)


def initial_partition(coarsest: Dag, k: int, eps=0, mode: str = "exact",
                      budget: SolveBudget | None = None,
                      lp_path=None, solution_path=None) -> Partition:
    """Partition the coarsest graph: exact solve, or LP emission for an
    external solver whose solution file is ingested back."""
    if mode == "exact":
        result = branch_and_bound(coarsest, k, eps, budget=budget)
        if result.status == INFEASIBLE or result.partition is None:
            raise InfeasibleInstanceError(
                f"no balanced acyclic {k}-way partition at the coarsest level")
        return result.partition
    if mode == "emit-lp":
        model = build_proposed(coarsest, BuildOptions(k=k, eps=eps))
        if lp_path is not None:
            with open(lp_path, "w", encoding="ascii") as fh:
                fh.write(write_lp(model))
        if solution_path is None:
            raise ValueError("emit-lp mode needs solution_path to ingest")
        with open(solution_path, "r", encoding="ascii") as fh:
            assignment, _ = read_solution(model, fh.read())
        partition, _ = decode_partition(model, assignment)
        return partition
    raise ValueError(f"unknown initial partitioning mode {mode!r}")


def uncoarsen_refine(g: Dag, levels: list[CoarseningLevel],
                     coarse_partition: Partition, k: int, eps=0,
                     budget_nodes: int = DEFAULT_REFINE_BUDGET) -> Partition:
    """Project level by level and refine with warm-started branch and bound."""
    graphs = [g] + [level.graph for level in levels]
    current = coarse_partition
    for idx in range(len(levels) - 1, -1, -1):
        finer = graphs[idx]
        current = project(current, levels[idx].mapping, finer.n)
        result = branch_and_bound(finer, k, eps, warm=current,
                                  budget=SolveBudget(max_nodes=budget_nodes))
        if result.partition is not None:
            current = result.partition
    return current


def multilevel_partition(g: Dag, k: int, eps=0, target_n: int = 8,
                         budget_nodes: int = DEFAULT_REFINE_BUDGET):
    """Full pipeline; returns (partition, info dict with level statistics)."""
    cap = balance_bound(g, k, eps)
    levels = coarsen(g, target_n, max_weight=cap) if g.n > target_n else []
    # The weight cap keeps the coarsest graph partitionable in the common
    # case, but interactions between balance and acyclicity can still make
    # it infeasible; fall back to finer levels until one solves.
    while True:
        coarsest = levels[-1].graph if levels else g
        try:
            initial = initial_partition(coarsest, k, eps,
                                        budget=SolveBudget(max_nodes=budget_nodes))
            break
        except InfeasibleInstanceError:
            if not levels:
                raise
            levels.pop()
    final = uncoarsen_refine(g, levels, initial, k, eps, budget_nodes)
    info = {
        "levels": len(levels),
        "coarsest_n": coarsest.n,
        "skipped_safety_checks": levels[-1].skipped_checks if levels else 0,
    }
    return final, info

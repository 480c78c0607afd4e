"""Builders for the ILP formulations, plus encode/decode between
partitions and model assignments.

All builders produce a LinearModel over the shared variable naming scheme
x_{i}_{s}, z_{i}_{j}, y_{s}_{t}, pi_{s}, pq_{s}_{q}, u_{s}.  Pair indices
for z follow topological position order, so "i before j" always means
pos[i] < pos[j].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .dag import Dag, quotient_graph, _kahn
from .errors import (
    AmbiguousAssignmentError,
    InvalidKError,
    QubitCapacityInfeasibleError,
    TooLargeError,
)
from .model import LinearModel, MAXIMIZE, MINIMIZE, evaluate
from .partition import Partition, balance_bound, to_fraction
from .preprocess import PreprocessTables, a_prime_value, compute_tables

MIN_CUT = "min_cut"
MAX_INTERNAL = "max_internal"

FORMULATION_NAMES = (
    "undirected",
    "nossack",
    "albareda-base",
    "albareda-extended",
    "albareda-final",
    "proposed",
)


@dataclass(frozen=True)
class BuildOptions:
    k: int
    eps: object = 0
    relax_z: bool = False


def _x(i, s):
    return f"x_{i}_{s}"


def _z(i, j):
    return f"z_{i}_{j}"


def _y(s, t):
    return f"y_{s}_{t}"


def _pi(s):
    return f"pi_{s}"


def _pq(s, q):
    return f"pq_{s}_{q}"


def _u(s):
    return f"u_{s}"


def _check_k(opts: BuildOptions):
    if opts.k < 1:
        raise InvalidKError(f"k must be >= 1, got {opts.k}")


def _add_common(m: LinearModel, g: Dag, k: int, bound: int) -> None:
    """x variables, one-part-per-vertex, and balance constraints."""
    for i in range(g.n):
        for s in range(k):
            m.add_binary(_x(i, s))
    for i in range(g.n):
        m.add_constraint(f"onepart_{i}", [(1, _x(i, s)) for s in range(k)], "=", 1)
    for s in range(k):
        m.add_constraint(f"balance_{s}",
                         [(g.w[i], _x(i, s)) for i in range(g.n)], "<=", bound)


def _add_z(m: LinearModel, i, j, relax_z: bool) -> str:
    name = _z(i, j)
    if relax_z:
        m.add_continuous(name, 0, 1)
    else:
        m.add_binary(name)
    return name


def _base_meta(m: LinearModel, kind: str, g: Dag, opts: BuildOptions,
               bound: int, convention: str) -> None:
    m.meta.update({
        "kind": kind,
        "n": g.n,
        "k": opts.k,
        "eps": str(to_fraction(opts.eps)),
        "bound": bound,
        "convention": convention,
        "edge_costs": tuple(g.edges),
        "total_cost": g.total_cost,
    })


def chained_triples(g: Dag):
    """Triples (i, j, h) with i->j and j->h reachable, in topological pair order."""
    out = []
    for i in range(g.n):
        di = g.descendants(i)
        for j in sorted(di, key=lambda v: g.topo.position[v]):
            for h in sorted(g.descendants(j), key=lambda v: g.topo.position[v]):
                out.append((i, j, h))
    return out


def build_undirected(g: Dag, opts: BuildOptions) -> LinearModel:
    """Balanced k-way partitioning baseline that ignores edge directions."""
    _check_k(opts)
    k = opts.k
    bound = balance_bound(g, k, opts.eps)
    m = LinearModel("undirected")
    _add_common(m, g, k, bound)
    for u, v, _ in g.edges:
        _add_z(m, u, v, opts.relax_z)
    for u, v, _ in g.edges:
        for s in range(k):
            # two-sided linearization of z >= |x_us - x_vs|
            m.add_constraint(f"cut_{u}_{v}_{s}_lo",
                             [(1, _x(u, s)), (-1, _x(v, s)), (-1, _z(u, v))],
                             "<=", 0)
            m.add_constraint(f"cut_{u}_{v}_{s}_hi",
                             [(1, _x(v, s)), (-1, _x(u, s)), (-1, _z(u, v))],
                             "<=", 0)
    m.set_objective(MINIMIZE, [(c, _z(u, v)) for u, v, c in g.edges])
    _base_meta(m, "undirected", g, opts, bound, MIN_CUT)
    return m


def build_proposed(g: Dag, opts: BuildOptions) -> LinearModel:
    """Acyclic partitioning via an upper-triangular part adjacency matrix."""
    _check_k(opts)
    m = LinearModel("proposed")
    bound = balance_bound(g, opts.k, opts.eps)
    _proposed_core(m, g, opts.k, bound, opts.relax_z)
    m.set_objective(MINIMIZE, [(c, _z(u, v)) for u, v, c in g.edges])
    _base_meta(m, "proposed", g, opts, bound, MIN_CUT)
    return m


def _proposed_core(m: LinearModel, g: Dag, k: int, bound: int, relax_z: bool) -> None:
    _add_common(m, g, k, bound)
    for u, v, _ in g.edges:
        _add_z(m, u, v, relax_z)
    for s in range(k):
        for t in range(k):
            if s != t:
                m.add_binary(_y(s, t))
    for u, v, _ in g.edges:
        for s in range(k):
            # single-sided cut marking; sufficient at optimality because the
            # y constraints force part(u) <= part(v) along every edge
            m.add_constraint(f"cutmark_{u}_{v}_{s}",
                             [(1, _x(v, s)), (-1, _x(u, s)), (-1, _z(u, v))],
                             "<=", 0)
    for u, v, _ in g.edges:
        for s in range(k):
            for t in range(k):
                if s != t:
                    m.add_constraint(f"induced_{u}_{v}_{s}_{t}",
                                     [(1, _x(u, s)), (1, _x(v, t)), (-1, _y(s, t))],
                                     "<=", 1)
    for s in range(k):
        for t in range(s):
            m.add_constraint(f"lowertri_{s}_{t}", [(1, _y(s, t))], "=", 0)


def build_nossack(g: Dag, opts: BuildOptions) -> LinearModel:
    """MTZ-based acyclic partitioning model with part-size symmetry breaking."""
    _check_k(opts)
    k = opts.k
    bound = balance_bound(g, k, opts.eps)
    m = LinearModel("nossack")
    _add_common(m, g, k, bound)

    pos = g.topo.position
    triples = chained_triples(g)
    # z only for pairs the model actually references: edges and chained-triple
    # pairs; unreferenced pairs cannot affect the optimum
    zpairs: list[tuple[int, int]] = []
    seen = set()
    for u, v, _ in g.edges:
        if (u, v) not in seen:
            seen.add((u, v))
            zpairs.append((u, v))
    for i, j, h in triples:
        for pair in ((i, j), (j, h), (i, h)):
            if pair not in seen:
                seen.add(pair)
                zpairs.append(pair)
    zpairs.sort(key=lambda p: (pos[p[0]], pos[p[1]]))
    for i, j in zpairs:
        _add_z(m, i, j, opts.relax_z)
    for s in range(k):
        for t in range(k):
            if s != t:
                m.add_binary(_y(s, t))
    for s in range(k):
        m.add_integer(_pi(s), 0, k - 1)

    for i, j in zpairs:
        for s in range(k):
            m.add_constraint(f"samepart_{i}_{j}_{s}",
                             [(1, _z(i, j)), (1, _x(i, s)), (-1, _x(j, s))],
                             "<=", 1)
    for i, j, h in triples:
        zij, zjh, zih = _z(i, j), _z(j, h), _z(i, h)
        m.add_constraint(f"tri1_{i}_{j}_{h}",
                         [(1, zij), (1, zjh), (-1, zih)], "<=", 1)
        m.add_constraint(f"tri2_{i}_{j}_{h}",
                         [(1, zij), (-1, zjh), (1, zih)], "<=", 1)
        m.add_constraint(f"tri3_{i}_{j}_{h}",
                         [(-1, zij), (1, zjh), (1, zih)], "<=", 1)
        m.add_constraint(f"tri4_{i}_{j}_{h}", [(1, zih), (-1, zij)], "<=", 0)
        m.add_constraint(f"tri5_{i}_{j}_{h}",
                         [(2, zih), (-1, zij), (-1, zjh)], "<=", 0)
    for u, v, _ in g.edges:
        for s in range(k):
            for t in range(k):
                if s != t:
                    m.add_constraint(f"induced_{u}_{v}_{s}_{t}",
                                     [(1, _x(u, s)), (1, _x(v, t)), (-1, _y(s, t))],
                                     "<=", 1)
    # big-M must cover the widest possible pi gap, which is k-1 when k > n
    big_m = max(g.n, k)
    for s in range(k):
        for t in range(k):
            if s != t:
                m.add_constraint(f"mtz_{s}_{t}",
                                 [(big_m, _y(s, t)), (-1, _pi(t)), (1, _pi(s))],
                                 "<=", big_m - 1)
    for s in range(1, k):
        terms = [(1, _x(i, s)) for i in range(g.n)]
        terms += [(-1, _x(i, s - 1)) for i in range(g.n)]
        m.add_constraint(f"symmetry_{s}", terms, "<=", 0)

    m.set_objective(MAXIMIZE, [(c, _z(u, v)) for u, v, c in g.edges])
    _base_meta(m, "nossack", g, opts, bound, MAX_INTERNAL)
    return m


def build_albareda(g: Dag, opts: BuildOptions, tables: PreprocessTables | None = None,
                   variant: str = "base", retain_extended: bool = True) -> LinearModel:
    """Topological-part-index model with reachability preprocessing.

    variant: "base", "extended" (adds heavy-pair z fixing and the valid
    inequalities gated on the A/A' tables), or "final" (replaces the base
    topological families with the compact replacement constraints).
    """
    _check_k(opts)
    if variant not in ("base", "extended", "final"):
        raise ValueError(f"unknown Albareda variant {variant!r}")
    k = opts.k
    bound = balance_bound(g, k, opts.eps)
    need_triples = variant in ("extended", "final")
    if tables is None:
        tables = compute_tables(g, with_triples=need_triples)
    a_prime = tables.require_triples() if need_triples else None

    pos = g.topo.position
    alpha = tables.alpha
    a_tab = tables.A
    pairs = sorted(a_tab.keys(), key=lambda p: (pos[p[0]], pos[p[1]]))
    triples = [key for key in (a_prime or {})]
    triples.sort(key=lambda t: (pos[t[0]], pos[t[1]], pos[t[2]]))

    # z pool per variant: base needs only edge pairs (objective + topo3);
    # extended adds chained-triple pairs; final references every reachable
    # pair through the per-vertex weight constraint
    zset = {(u, v) for u, v, _ in g.edges}
    if variant in ("extended", "final"):
        for i, j, l in triples:
            zset.update([(i, j), (j, l), (i, l)])
    if variant == "final":
        zset.update(pairs)
    zpairs = sorted(zset, key=lambda p: (pos[p[0]], pos[p[1]]))

    m = LinearModel(f"albareda-{variant}")
    _add_common(m, g, k, bound)
    for i, j in zpairs:
        _add_z(m, i, j, opts.relax_z)

    def prefix_lt(i, s):  # sum_{t < s} x_it
        return [(1, _x(i, t)) for t in range(s)]

    def prefix_ge(i, s):  # sum_{t >= s} x_it
        return [(1, _x(i, t)) for t in range(s, k)]

    def prefix_le(i, s):  # sum_{t <= s} x_it
        return [(1, _x(i, t)) for t in range(s + 1)]

    if variant in ("base", "extended"):
        for i, j in pairs:
            heavy = a_tab[(i, j)] > bound
            for s in range(k):
                if heavy:
                    m.add_constraint(f"topo2_{i}_{j}_{s}",
                                     prefix_ge(i, s) + prefix_le(j, s), "<=", 1)
                else:
                    m.add_constraint(f"topo1_{i}_{j}_{s}",
                                     prefix_ge(i, s) + prefix_lt(j, s), "<=", 1)
        # topo3 is generated for every edge, not only heavy pairs as printed:
        # it is what pins z on cut edges, and it is valid regardless of A vs B
        for u, v, _ in g.edges:
            for s in range(k):
                m.add_constraint(f"topo3_{u}_{v}_{s}",
                                 [(1, _z(u, v))] + prefix_lt(u, s) + prefix_ge(v, s),
                                 "<=", 2)

    if variant in ("extended", "final"):
        for i, j in zpairs:
            if (i, j) in a_tab and a_tab[(i, j)] > bound:
                m.add_constraint(f"fixz_{i}_{j}", [(1, _z(i, j))], "=", 0)

    if (variant == "extended") or (variant == "final" and retain_extended):
        for i, j, l in triples:
            zij, zjl, zil = _z(i, j), _z(j, l), _z(i, l)
            a_ij, a_jl, a_il = a_tab[(i, j)], a_tab[(j, l)], a_tab[(i, l)]
            if a_ij > bound:
                m.add_constraint(f"xtri1_{i}_{j}_{l}",
                                 [(1, zij), (1, zjl), (-1, zil)], "<=", 1)
                m.add_constraint(f"xtri2_{i}_{j}_{l}",
                                 [(1, zil), (1, zjl), (-1, zij)], "<=", 1)
                m.add_constraint(f"xtri3_{i}_{j}_{l}",
                                 [(1, zij), (1, zil), (-1, zjl)], "<=", 1)
            if a_ij <= bound and a_il <= bound:
                m.add_constraint(f"xchain1_{i}_{j}_{l}",
                                 [(1, zil), (-1, zij)], "<=", 0)
            if a_ij <= bound and a_jl <= bound:
                m.add_constraint(f"xchain2_{i}_{j}_{l}",
                                 [(1, zil), (-1, zjl)], "<=", 0)
            ap = a_prime[(i, j, l)]
            if a_ij <= bound and a_il <= bound and a_jl <= bound and ap > bound:
                m.add_constraint(f"xtrip_{i}_{j}_{l}",
                                 [(1, zij), (1, zjl), (1, zil)], "<=", 1)
            if a_ij <= bound and a_il <= bound and a_jl > bound:
                m.add_constraint(f"xpair1_{i}_{j}_{l}",
                                 [(1, zij), (1, zil)], "<=", 1)
            if a_il <= bound and a_jl <= bound and a_ij > bound:
                m.add_constraint(f"xpair2_{i}_{j}_{l}",
                                 [(1, zil), (1, zjl)], "<=", 1)
            if a_ij <= bound and a_jl <= bound and a_il > bound:
                m.add_constraint(f"xpair3_{i}_{j}_{l}",
                                 [(1, zij), (1, zjl)], "<=", 1)

    if variant == "final":
        for i in range(g.n):
            terms = [(g.w[j], _z(j, i)) for j, jj in pairs if jj == i]
            terms += [(g.w[j], _z(i, j)) for ii, j in pairs if ii == i]
            m.add_constraint(f"weightcap_{i}", terms, "<=", bound - g.w[i])
        for i in range(g.n):
            reach_i = sorted(g.descendants(i), key=lambda v: pos[v])
            for a in range(len(reach_i)):
                for b in range(a + 1, len(reach_i)):
                    j, l = reach_i[a], reach_i[b]
                    if alpha[j][l]:
                        continue
                    if a_tab[(i, j)] > bound or a_tab[(i, l)] > bound:
                        continue
                    if a_prime_value(g, i, j, l) <= bound:
                        continue
                    for s in range(k):
                        terms = [(1, _z(i, j)), (1, _z(i, l))]
                        terms += prefix_ge(j, s) + prefix_ge(l, s) + prefix_lt(i, s)
                        m.add_constraint(f"acyc1_{i}_{j}_{l}_{s}", terms, "<=", 3)
        # ordering constraints for every reachable pair; z = 1 relaxes them,
        # z fixed to 0 for heavy pairs recovers the strict ordering
        for i, j in pairs:
            for s in range(k):
                terms = [(-1, _z(i, j))] + prefix_ge(i, s) + prefix_le(j, s)
                m.add_constraint(f"acyc2_{i}_{j}_{s}", terms, "<=", 1)

    m.set_objective(MAXIMIZE, [(c, _z(u, v)) for u, v, c in g.edges])
    _base_meta(m, f"albareda-{variant}", g, opts, bound, MAX_INTERNAL)
    return m


def build_quantum(g: Dag, opts: BuildOptions, nq, lm: int,
                  strategy: str = "incremental") -> LinearModel:
    """Acyclic partitioning with a per-part unique-qubit cap.

    strategy "incremental" emits the model for the given k only; the search
    over k lives in the circuit driver.  strategy "bigm" adds part-used
    indicators weighted by M = 1 + total edge cost so that minimizing part
    count dominates minimizing cut.
    """
    _check_k(opts)
    if strategy not in ("incremental", "bigm"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if len(nq) != g.n:
        raise ValueError(f"NQ has {len(nq)} rows, graph has {g.n} vertices")
    n_qubits = len(nq[0]) if nq else 0
    for i, row in enumerate(nq):
        if sum(1 for flag in row if flag) > lm:
            raise QubitCapacityInfeasibleError(
                f"vertex {i} touches more than L_m={lm} qubits")
    k = opts.k
    bound = balance_bound(g, k, opts.eps)
    m = LinearModel(f"quantum-{strategy}")
    _proposed_core(m, g, k, bound, opts.relax_z)
    for s in range(k):
        for q in range(n_qubits):
            m.add_binary(_pq(s, q))
    for i in range(g.n):
        for q in range(n_qubits):
            if nq[i][q]:
                for s in range(k):
                    m.add_constraint(f"qubit_{i}_{q}_{s}",
                                     [(1, _x(i, s)), (-1, _pq(s, q))], "<=", 0)
    for s in range(k):
        m.add_constraint(f"capacity_{s}",
                         [(1, _pq(s, q)) for q in range(n_qubits)], "<=", lm)
    if strategy == "bigm":
        big_m = 1 + g.total_cost
        for s in range(k):
            m.add_binary(_u(s))
        for i in range(g.n):
            for s in range(k):
                m.add_constraint(f"used_{i}_{s}",
                                 [(1, _x(i, s)), (-1, _u(s))], "<=", 0)
        terms = [(big_m, _u(s)) for s in range(k)]
        terms += [(c, _z(u, v)) for u, v, c in g.edges]
        m.set_objective(MINIMIZE, terms)
        m.meta["big_m"] = big_m
    else:
        m.set_objective(MINIMIZE, [(c, _z(u, v)) for u, v, c in g.edges])
    _base_meta(m, "quantum", g, opts, bound, MIN_CUT)
    m.meta.update({"nq": tuple(tuple(int(bool(f)) for f in row) for row in nq),
                   "lm": lm, "strategy": strategy})
    return m


def build_formulation(name: str, g: Dag, opts: BuildOptions,
                      tables: PreprocessTables | None = None) -> LinearModel:
    """Build one of the named non-quantum formulations."""
    if name == "undirected":
        return build_undirected(g, opts)
    if name == "nossack":
        return build_nossack(g, opts)
    if name == "proposed":
        return build_proposed(g, opts)
    if name.startswith("albareda-"):
        variant = name.split("-", 1)[1]
        return build_albareda(g, opts, tables, variant=variant)
    raise ValueError(f"unknown formulation {name!r}")


def _quotient_levels(g: Dag, p: Partition):
    """Kahn positions of parts in the quotient graph, or None if cyclic."""
    quotient = quotient_graph(g, p)
    succ = [[] for _ in range(p.k)]
    indeg = [0] * p.k
    for (s, t) in quotient.edge_costs:
        succ[s].append(t)
        indeg[t] += 1
    order = _kahn(p.k, succ, indeg)
    if len(order) < p.k:
        return None
    level = [0] * p.k
    for idx, s in enumerate(order):
        level[s] = idx
    return level


def canonical_assignment(m: LinearModel, g: Dag, p: Partition) -> dict:
    """The natural encoding of a partition over the model's variables.

    x from the assignment; z as the cut indicator (min-cut models) or the
    same-part indicator (max-internal models); y as the quotient adjacency;
    pi as a topological part numbering; pq/u from part contents.
    """
    kind = m.meta["kind"]
    same_part_z = m.meta["convention"] == MAX_INTERNAL
    part = p.assignment
    adjacency = set()
    for u, v, _ in g.edges:
        if part[u] != part[v]:
            adjacency.add((part[u], part[v]))
    levels = None
    nq = m.meta.get("nq")
    out: dict[str, int] = {}
    for var in m.variables:
        fields = var.name.split("_")
        tag = fields[0]
        if tag == "x":
            i, s = int(fields[1]), int(fields[2])
            out[var.name] = int(part[i] == s)
        elif tag == "z":
            i, j = int(fields[1]), int(fields[2])
            same = part[i] == part[j]
            out[var.name] = int(same if same_part_z else not same)
        elif tag == "y":
            s, t = int(fields[1]), int(fields[2])
            out[var.name] = int((s, t) in adjacency)
        elif tag == "pi":
            if levels is None:
                levels = _quotient_levels(g, p) or list(range(p.k))
            out[var.name] = levels[int(fields[1])]
        elif tag == "pq":
            s, q = int(fields[1]), int(fields[2])
            out[var.name] = int(any(part[i] == s and nq[i][q]
                                    for i in range(g.n)))
        elif tag == "u":
            s = int(fields[1])
            out[var.name] = int(s in part)
        else:
            raise ValueError(f"cannot encode variable {var.name!r} for {kind}")
    return out


def assignment_min_cut(m: LinearModel, a) -> Fraction:
    """Cut value claimed by an assignment, in the min-cut convention."""
    z_cut = sum(Fraction(a.get(_z(u, v), 0)) * c
                for u, v, c in m.meta["edge_costs"])
    if m.meta["convention"] == MAX_INTERNAL:
        return m.meta["total_cost"] - z_cut
    return z_cut


def decode_partition(m: LinearModel, a) -> tuple[Partition, Fraction]:
    """Read the x block back into a Partition; error if not one part per vertex."""
    n, k = m.meta["n"], m.meta["k"]
    assignment = []
    for i in range(n):
        chosen = [s for s in range(k) if round(Fraction(a.get(_x(i, s), 0))) == 1]
        if len(chosen) != 1:
            raise AmbiguousAssignmentError(
                f"vertex {i} has {len(chosen)} parts set")
        assignment.append(chosen[0])
    return Partition(tuple(assignment), k), assignment_min_cut(m, a)


def exhaustive_model_optimum(m: LinearModel, g: Dag, guard_bits: int = 24):
    """Optimum over canonical encodings of all k^n part assignments.

    Returns (min_cut, partition) for the best feasible encoding, or
    (None, None) when no encoding is feasible.  Guarded against blow-up.
    """
    n, k = m.meta["n"], m.meta["k"]
    if k > 1 and n * (k - 1).bit_length() > guard_bits:
        raise TooLargeError(f"k^n too large for exhaustive search (n={n}, k={k})")
    maximize = m.objective_sense == MAXIMIZE
    best_obj = None
    best_p = None
    for assignment in product(range(k), repeat=n):
        p = Partition(assignment, k)
        a = canonical_assignment(m, g, p)
        res = evaluate(m, a, early_exit=True)
        if not res.feasible:
            continue
        if best_obj is None or (res.objective > best_obj if maximize
                                else res.objective < best_obj):
            best_obj = res.objective
            best_p = p
    if best_p is None:
        return None, None
    canonical = canonical_assignment(m, g, best_p)
    return assignment_min_cut(m, canonical), best_p

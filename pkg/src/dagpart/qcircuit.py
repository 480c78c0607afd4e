"""Quantum-circuit ingestion, circuit->DAG conversion, and the minimum-part
partitioning driver with a per-part unique-qubit cap."""

from __future__ import annotations

from dataclasses import dataclass

from .dag import Dag
from .errors import (
    CircuitParseError,
    EmptyCircuitError,
    NoFeasibleKError,
    QubitCapacityInfeasibleError,
    UnknownQubitError,
)
from .exact import OPTIMAL, SolveBudget, branch_and_bound, brute_force
from .partition import Partition


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[str, ...]


@dataclass(frozen=True)
class Circuit:
    """Gate list over named qubits, in program order."""

    qubits: tuple[str, ...]
    gates: tuple[Gate, ...]


def parse_circuit(text: str) -> Circuit:
    """Parse the circuit file format: one `name q0 q1 ...` gate per line,
    `#` comments, qubits declared implicitly in first-appearance order."""
    qubits: list[str] = []
    seen: set[str] = set()
    gates: list[Gate] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise CircuitParseError(f"gate needs at least one operand: {raw!r}",
                                    line_no)
        name, operands = tokens[0], tokens[1:]
        if len(set(operands)) != len(operands):
            raise CircuitParseError(f"duplicate operand in gate {name!r}", line_no)
        for q in operands:
            if q not in seen:
                seen.add(q)
                qubits.append(q)
        gates.append(Gate(name, tuple(operands)))
    return Circuit(tuple(qubits), tuple(gates))


def circuit_to_dag(c: Circuit, entry_exit_weight: int = 0):
    """Convert to a DAG with one vertex per gate plus entry/exit per qubit.

    Each qubit's uses form a line subgraph entry -> gates -> exit with unit
    edge costs.  Gate vertices weigh 1; entry/exit vertices default to 0 so
    balance reflects computational gates only.

    Returns (dag, nq) where nq is the vertex-by-qubit incidence matrix.
    """
    if not c.gates:
        raise EmptyCircuitError("circuit has no gates")
    qubit_index = {q: idx for idx, q in enumerate(c.qubits)}
    n_gates = len(c.gates)
    n_qubits = len(c.qubits)
    n = n_gates + 2 * n_qubits
    entry = lambda q: n_gates + q
    exit_ = lambda q: n_gates + n_qubits + q

    weights = [1] * n_gates + [entry_exit_weight] * (2 * n_qubits)
    nq = [[0] * n_qubits for _ in range(n)]
    last_use = [entry(q) for q in range(n_qubits)]
    edges: list[tuple[int, int, int]] = []
    for gate_id, gate in enumerate(c.gates):
        for q_name in gate.qubits:
            if q_name not in qubit_index:
                raise UnknownQubitError(f"gate uses undeclared qubit {q_name!r}")
            q = qubit_index[q_name]
            nq[gate_id][q] = 1
            edges.append((last_use[q], gate_id, 1))
            last_use[q] = gate_id
    for q in range(n_qubits):
        nq[entry(q)][q] = 1
        nq[exit_(q)][q] = 1
        edges.append((last_use[q], exit_(q), 1))
    return Dag(weights, edges), tuple(tuple(row) for row in nq)


def unique_qubits(nq, vertices) -> int:
    """Number of qubit columns with at least one 1 among the given vertices."""
    if not nq:
        return 0
    n_qubits = len(nq[0])
    return sum(1 for q in range(n_qubits)
               if any(nq[i][q] for i in vertices))


def max_gate_arity(nq) -> int:
    return max((sum(row) for row in nq), default=0)


def min_parts_partition(g: Dag, nq, eps=0, lm: int = 0, engine: str = "bnb",
                        budget: SolveBudget | None = None):
    """Smallest k admitting a balanced acyclic partition with per-part unique
    qubit count at most lm; among those, the minimum cut.

    Increments k one by one starting from 1 and stops at the first feasible
    value.  Returns (k, partition, cut).
    """
    if engine not in ("brute", "bnb"):
        raise ValueError(f"unknown engine {engine!r}")
    if lm < max_gate_arity(nq):
        raise QubitCapacityInfeasibleError(
            f"a single gate touches more than L_m={lm} qubits")
    for k in range(1, g.n + 1):
        if engine == "brute":
            result = brute_force(g, k, eps, nq=nq, lm=lm)
        else:
            result = branch_and_bound(g, k, eps, budget=budget, nq=nq, lm=lm)
        if result.status == OPTIMAL:
            return k, result.partition, result.cut
    raise NoFeasibleKError(f"no feasible part count up to k={g.n}")


def part_qubit_counts(nq, p: Partition) -> list[int]:
    """Unique qubits used by each part, for reporting."""
    return [unique_qubits(nq, members) for members in p.parts()]

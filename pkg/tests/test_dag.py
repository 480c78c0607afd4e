import pytest

from dagpart import Dag, Partition, quotient_graph, validate_dag
from dagpart.errors import (
    CycleDetectedError,
    DuplicateEdgeError,
    PartitionArityMismatchError,
    SelfLoopError,
)

from conftest import chain, diamond


def test_basic_properties():
    g = diamond()
    assert g.n == 4
    assert g.m == 4
    assert g.total_weight == 4
    assert g.total_cost == 4
    assert g.succ[0] == (1, 2)
    assert g.pred[3] == (1, 2)
    assert g.cost[(0, 1)] == 1


def test_topo_order_deterministic_min_id():
    g = Dag([1, 1, 1], [(2, 0, 1), (2, 1, 1)])
    assert g.topo.order == (2, 0, 1)
    assert g.topo.position[2] == 0


def test_self_loop_rejected():
    with pytest.raises(SelfLoopError):
        Dag([1, 1], [(0, 0, 1)])


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdgeError):
        Dag([1, 1], [(0, 1, 1), (0, 1, 2)])


def test_cycle_rejected_with_witness():
    with pytest.raises(CycleDetectedError) as exc:
        Dag([1, 1, 1], [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    cycle = exc.value.cycle
    assert sorted(cycle) == [0, 1, 2]


def test_bad_endpoint_and_weight():
    with pytest.raises(ValueError):
        Dag([1, 1], [(0, 5, 1)])
    with pytest.raises(ValueError):
        Dag([1, -1], [])


def test_reachability():
    g = diamond()
    assert g.descendants(0) == frozenset({1, 2, 3})
    assert g.ancestors(3) == frozenset({0, 1, 2})
    assert g.path_nodes(0, 3) == frozenset({1, 2})
    assert g.path_nodes(1, 2) == frozenset()
    assert g.path_nodes(0, 0) == frozenset()


def test_validate_dag_function():
    topo = validate_dag([1, 1, 1], [(0, 1, 1), (1, 2, 1)])
    assert topo.order == (0, 1, 2)


def test_quotient_graph_acyclic():
    g = chain(4)
    q = quotient_graph(g, Partition((0, 0, 1, 1), 2))
    assert q.is_acyclic
    assert q.edge_costs == {(0, 1): 1}
    assert q.total_edge_cost == 1
    assert q.weights == (2, 2)


def test_quotient_graph_cycle_detected():
    g = Dag([1, 1, 1, 1], [(0, 3, 1), (1, 2, 1)])
    q = quotient_graph(g, Partition((0, 1, 0, 1), 2))
    assert not q.is_acyclic
    cycle = q.find_cycle()
    assert cycle is not None
    assert sorted(set(cycle)) == [0, 1]


def test_quotient_arity_mismatch():
    with pytest.raises(PartitionArityMismatchError):
        quotient_graph(chain(3), Partition((0, 1), 2))


def test_edge_cost_aggregation_in_quotient():
    g = Dag([1, 1, 1], [(0, 1, 2), (0, 2, 3), (1, 2, 5)])
    q = quotient_graph(g, Partition((0, 0, 1), 2))
    assert q.edge_costs == {(0, 1): 8}

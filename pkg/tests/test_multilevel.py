import pytest

from dagpart import (
    Dag,
    Partition,
    brute_force,
    coarsen,
    multilevel_partition,
    project,
    validate,
)
from dagpart.errors import InfeasibleInstanceError, InvalidProjectionError
from dagpart.multilevel import _contract, _contraction_safe, initial_partition

from conftest import chain, diamond, random_dag


def test_contraction_safety():
    g = diamond()
    # contracting 0-1 leaves path 0->2->3, no 0->1 alternative: safe
    assert _contraction_safe(g, 0, 1)
    g2 = Dag([1, 1, 1], [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
    # 0->2 has the alternative 0->1->2; contracting it would be unsafe
    assert not _contraction_safe(g2, 0, 2)
    assert _contraction_safe(g2, 0, 1)


def test_contract_merges_weights_and_costs():
    g = Dag([1, 2, 3], [(0, 1, 4), (0, 2, 1), (1, 2, 2)])
    coarse, mapping = _contract(g, 0, 1)
    assert coarse.n == 2
    assert coarse.w == (3, 3)
    assert mapping == (0, 0, 1)
    assert coarse.cost[(0, 1)] == 3  # parallel edges summed, self-edge dropped


def test_coarsen_conserves_weight():
    g = chain(10)
    levels = coarsen(g, 4)
    previous = g
    for level in levels:
        assert level.graph.total_weight == previous.total_weight
        assert level.graph.n == previous.n - 1
        previous = level.graph
    assert levels[-1].graph.n == 4


def test_coarsen_respects_weight_cap():
    g = chain(8)
    levels = coarsen(g, 2, max_weight=2)
    assert all(w <= 2 for w in levels[-1].graph.w)
    assert levels[-1].graph.n == 4  # cap stops coarsening early


def test_coarsen_edgeless_graph_stops():
    g = Dag([1, 1, 1, 1], [])
    assert coarsen(g, 2) == []


def test_coarsen_bad_target():
    with pytest.raises(ValueError):
        coarsen(chain(4), 1)


def test_project():
    coarse = Partition((0, 1), 2)
    fine = project(coarse, (0, 0, 1), 3)
    assert fine.assignment == (0, 0, 1)
    with pytest.raises(InvalidProjectionError):
        project(coarse, (0, 0), 3)
    with pytest.raises(InvalidProjectionError):
        project(coarse, (0, 0, 5), 3)


def test_initial_partition_infeasible():
    g = Dag([3, 1], [(0, 1, 1)])
    with pytest.raises(InfeasibleInstanceError):
        initial_partition(g, 2)


def test_initial_partition_emit_lp_round_trip(tmp_path):
    g = chain(4)
    lp_path = tmp_path / "m.lp"
    sol_path = tmp_path / "m.sol"
    sol_path.write_text(
        "x_0_0 1\nx_1_0 1\nx_2_1 1\nx_3_1 1\nz_1_2 1\ny_0_1 1\n")
    p = initial_partition(g, 2, mode="emit-lp", lp_path=lp_path,
                          solution_path=sol_path)
    assert p.assignment == (0, 0, 1, 1)
    assert lp_path.read_text().startswith("\\ Problem: proposed")


def test_multilevel_chain_exact():
    g = chain(9)
    p, info = multilevel_partition(g, 3, target_n=4)
    report = validate(g, p, 3, 0)
    assert report.feasible
    assert report.cut == brute_force(g, 3).cut == 2
    assert info["levels"] >= 1


def test_multilevel_small_graph_skips_coarsening():
    g = diamond()
    p, info = multilevel_partition(g, 2, target_n=8)
    assert info["levels"] == 0
    assert validate(g, p, 2, 0).feasible


def test_multilevel_falls_back_when_coarsest_infeasible():
    # aggressive target: the weight cap plus fallback still find a partition
    g = diamond()
    p, info = multilevel_partition(g, 2, target_n=2)
    assert validate(g, p, 2, 0).feasible


def test_multilevel_feasibility_random(rng):
    for _ in range(20):
        g = random_dag(rng, rng.randint(4, 9))
        k = rng.choice([2, 3])
        exact = brute_force(g, k, "3/10")
        if exact.status != "optimal":
            continue
        p, _ = multilevel_partition(g, k, "3/10", target_n=4)
        assert validate(g, p, k, "3/10").feasible

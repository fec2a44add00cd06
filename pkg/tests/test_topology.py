import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lizardlink.assembly import default_config_text
from lizardlink.errors import InvalidTopologyError
from lizardlink.topology import (
    Joint,
    LoopSpec,
    MechanismGraph,
    constrained_mobility,
    graph_from_dict,
    independent_loop_count,
    mobility,
    validate_driving_pairs,
)


@pytest.fixture
def lizard_graph() -> MechanismGraph:
    return graph_from_dict(json.loads(default_config_text())["mechanism_graph"])


def single_loop(n: int, driving=("J0",)) -> MechanismGraph:
    ids = [f"J{i}" for i in range(n)]
    return MechanismGraph(n, tuple(Joint(i, 1, i in driving) for i in ids), (LoopSpec(tuple(ids)),))


@pytest.mark.parametrize("n, m, v", [(13, 16, 4), (4, 4, 1), (5, 5, 1)])
def test_independent_loop_count(n, m, v):
    assert independent_loop_count(n, m) == v


def test_independent_loop_count_rejects_disconnected():
    with pytest.raises(InvalidTopologyError):
        independent_loop_count(10, 5)


def test_lizard_fixture_counts(lizard_graph):
    assert lizard_graph.n_links == 13
    assert lizard_graph.n_joints == 16
    assert lizard_graph.n_loops == 4
    assert mobility(lizard_graph) == 4
    assert constrained_mobility(lizard_graph) == 0
    assert set(lizard_graph.driving_ids) == {"R1", "R5", "R11", "R12"}


@pytest.mark.parametrize("n, f", [(4, 1), (5, 2)])
def test_single_loop_mobility(n, f):
    assert mobility(single_loop(n)) == f


def test_lizard_drivers_valid(lizard_graph):
    report = validate_driving_pairs(lizard_graph)
    assert report.valid
    assert report.constrained_mobility == 0
    assert report.mobility == 4
    assert report.summary() == "n=13 m=16 v=4 F=4 F*=0 driving=VALID"
    assert report.poc_dimension == 3


def test_two_drivers_invalid(lizard_graph):
    report = validate_driving_pairs(lizard_graph.with_driving(["R1", "R5"]))
    assert not report.valid
    assert report.constrained_mobility == 2  # 14 - 12
    assert len(report.reasons) == 2


def test_fourbar_single_crank_valid():
    report = validate_driving_pairs(single_loop(4))
    assert report.valid and report.constrained_mobility == 0


def test_underdriven_five_bar_invalid():
    report = validate_driving_pairs(single_loop(5))
    assert not report.valid
    assert report.constrained_mobility == 1


def test_driver_count_must_match_mobility():
    # a 2-dof joint lets two drivers lock an F=3 loop: F* = 0 but |drivers| != F
    ids = [f"J{i}" for i in range(5)]
    joints = tuple(Joint(i, 2 if i == "J0" else 1, i in ("J0", "J1")) for i in ids)
    report = validate_driving_pairs(MechanismGraph(5, joints, (LoopSpec(tuple(ids)),)))
    assert report.mobility == 3
    assert report.constrained_mobility == 0
    assert not report.valid


def test_graph_rejects_bad_references():
    with pytest.raises(InvalidTopologyError):
        MechanismGraph(3, (Joint("A"), Joint("B"), Joint("C")), (LoopSpec(("A", "B", "X")),))
    with pytest.raises(InvalidTopologyError):
        MechanismGraph(3, (Joint("A"), Joint("A"), Joint("C")), (LoopSpec(("A", "C", "A")),))
    with pytest.raises(InvalidTopologyError):
        LoopSpec(("A", "B"))
    with pytest.raises(InvalidTopologyError):
        Joint("A", dof=0)


def test_graph_rejects_loop_count_mismatch():
    with pytest.raises(InvalidTopologyError):
        MechanismGraph(4, tuple(Joint(i) for i in "ABCD"), ())


def test_graph_from_dict_reports_path():
    with pytest.raises(InvalidTopologyError) as info:
        graph_from_dict({"n_links": 4, "joints": [{"id": "A"}], "loops": []})
    assert info.value.path.startswith("$.mechanism_graph")


@given(st.sets(st.sampled_from([f"R{i}" for i in range(1, 17)])), st.sampled_from([f"R{i}" for i in range(1, 17)]))
def test_driving_monotone(drivers, extra):
    graph = graph_from_dict(json.loads(default_config_text())["mechanism_graph"])
    before = constrained_mobility(graph.with_driving(drivers))
    after = constrained_mobility(graph.with_driving(drivers | {extra}))
    assert after <= before


@given(st.lists(st.integers(min_value=1, max_value=3), min_size=4, max_size=12))
def test_mobility_is_exact_sum(dofs):
    n = len(dofs)
    joints = tuple(Joint(f"J{i}", d) for i, d in enumerate(dofs))
    graph = MechanismGraph(n, joints, (LoopSpec(tuple(j.id for j in joints)),))
    assert mobility(graph) == sum(dofs) - 3

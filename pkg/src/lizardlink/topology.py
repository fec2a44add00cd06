"""Mobility of multi-loop planar mechanisms and driving-pair validation.

Mobility is ``F = sum(f_i) - sum(xi_j)`` over joints and independent loops.
Each loop's count of independent displacement equations ``xi`` is stored as
data (3 for a planar loop) instead of being derived from position-orientation
characteristic sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from lizardlink.errors import InvalidTopologyError

PLANAR_XI = 3
# dimension of the moving platform's position-orientation set for a planar
# mechanism (two translations, one rotation); reported next to F for reference
PLANAR_POC_DIMENSION = 3


@dataclass(frozen=True)
class Joint:
    id: str
    dof: int = 1
    driving: bool = False

    def __post_init__(self) -> None:
        if self.dof < 1:
            raise InvalidTopologyError(f"joint {self.id!r} must have dof >= 1, got {self.dof}")


@dataclass(frozen=True)
class LoopSpec:
    joint_ids: tuple[str, ...]
    xi: int = PLANAR_XI
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "joint_ids", tuple(self.joint_ids))
        if len(self.joint_ids) < 3:
            raise InvalidTopologyError(f"loop {self.name or self.joint_ids} needs at least 3 joints")
        if self.xi < 1:
            raise InvalidTopologyError(f"loop {self.name or self.joint_ids} must have xi >= 1")


def independent_loop_count(n_links: int, n_joints: int) -> int:
    """Number of independent loops ``v = m - n + 1``."""
    if n_links < 1 or n_joints < n_links - 1:
        raise InvalidTopologyError(
            f"{n_joints} joints cannot connect {n_links} links into one mechanism"
        )
    return n_joints - n_links + 1


@dataclass(frozen=True)
class MechanismGraph:
    n_links: int
    joints: tuple[Joint, ...]
    loops: tuple[LoopSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "joints", tuple(self.joints))
        object.__setattr__(self, "loops", tuple(self.loops))
        ids = [j.id for j in self.joints]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise InvalidTopologyError(f"duplicate joint ids: {', '.join(dupes)}")
        known = set(ids)
        for k, loop in enumerate(self.loops):
            missing = [j for j in loop.joint_ids if j not in known]
            if missing:
                raise InvalidTopologyError(
                    f"loop references unknown joints {missing}", f"$.loops[{k}].joint_ids"
                )
        v = independent_loop_count(self.n_links, len(self.joints))
        if v != len(self.loops):
            raise InvalidTopologyError(
                f"n={self.n_links}, m={len(self.joints)} gives v={v} independent loops "
                f"but {len(self.loops)} are listed"
            )

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    @property
    def n_loops(self) -> int:
        return independent_loop_count(self.n_links, self.n_joints)

    @property
    def driving_ids(self) -> tuple[str, ...]:
        return tuple(j.id for j in self.joints if j.driving)

    def with_driving(self, ids: Iterable[str]) -> MechanismGraph:
        """Copy of the graph with exactly ``ids`` marked as driving joints."""
        chosen = set(ids)
        unknown = chosen - {j.id for j in self.joints}
        if unknown:
            raise InvalidTopologyError(f"unknown joints {sorted(unknown)}")
        joints = tuple(Joint(j.id, j.dof, j.id in chosen) for j in self.joints)
        return MechanismGraph(self.n_links, joints, self.loops)


def mobility(graph: MechanismGraph) -> int:
    return sum(j.dof for j in graph.joints) - sum(loop.xi for loop in graph.loops)


def constrained_mobility(graph: MechanismGraph) -> int:
    """Mobility left once every driving joint is locked."""
    return sum(j.dof for j in graph.joints if not j.driving) - sum(loop.xi for loop in graph.loops)


@dataclass(frozen=True)
class ValidationReport:
    n_links: int
    n_joints: int
    n_loops: int
    mobility: int
    constrained_mobility: int
    driving: tuple[str, ...]
    valid: bool
    reasons: tuple[str, ...] = field(default_factory=tuple)
    poc_dimension: int = PLANAR_POC_DIMENSION

    def summary(self) -> str:
        verdict = "VALID" if self.valid else "INVALID"
        return (
            f"n={self.n_links} m={self.n_joints} v={self.n_loops} "
            f"F={self.mobility} F*={self.constrained_mobility} driving={verdict}"
        )


def validate_driving_pairs(graph: MechanismGraph) -> ValidationReport:
    """Check that the driving joints of ``graph`` can be actuated simultaneously.

    Valid when locking them leaves zero mobility and their count equals the
    mechanism's mobility.
    """
    f = mobility(graph)
    f_star = constrained_mobility(graph)
    driving = graph.driving_ids
    reasons = []
    if not driving:
        reasons.append("no driving joints declared")
    if f_star != 0:
        reasons.append(f"locking the driving joints leaves F*={f_star}, expected 0")
    if len(driving) != f:
        reasons.append(f"{len(driving)} driving joints for a mechanism with F={f}")
    return ValidationReport(
        n_links=graph.n_links,
        n_joints=graph.n_joints,
        n_loops=graph.n_loops,
        mobility=f,
        constrained_mobility=f_star,
        driving=driving,
        valid=not reasons,
        reasons=tuple(reasons),
    )


def graph_from_dict(data: Mapping[str, Any], path: str = "$.mechanism_graph") -> MechanismGraph:
    """Build a graph from the ``mechanism_graph`` section of a config document."""
    try:
        joints = [
            Joint(str(j["id"]), int(j.get("dof", 1)), bool(j.get("driving", False)))
            for j in data["joints"]
        ]
        loops = [
            LoopSpec(tuple(str(i) for i in lp["joint_ids"]), int(lp.get("xi", PLANAR_XI)), str(lp.get("name", "")))
            for lp in data["loops"]
        ]
        n_links = int(data["n_links"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidTopologyError(f"malformed mechanism graph ({exc!r})", path) from exc
    try:
        return MechanismGraph(n_links, tuple(joints), tuple(loops))
    except InvalidTopologyError as exc:
        sub = exc.path if exc.path != "$" else ""
        raise InvalidTopologyError(exc.message, path + sub.removeprefix("$")) from exc

"""Four five-bar loops composed into the lizard mechanism.

Each loop's two driven angles come from an angle source: one of the four
actuators, a passive angle already solved in another loop (plus an offset),
or a constant.  Loops are evaluated in dependency order, solved on their
configured branch and placed in the world frame by a per-loop rigid frame.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence, Union

import jsonschema

from lizardlink.errors import (
    AssemblyUnreachableError,
    ConfigError,
    DegenerateConfigurationError,
    InvalidInputError,
    UnreachableError,
)
from lizardlink.fivebar import (
    CLOSURE_TOL,
    Branch,
    DrivenInput,
    FiveBarGeometry,
    LoopPose,
    LoopSolution,
    forward_pose,
    solve_passive,
)
from lizardlink.geom import Angle, Frame, Vec2, lerp, normalize_angle, rad
from lizardlink.topology import MechanismGraph, graph_from_dict

N_ACTUATORS = 4
LINK_NAMES = ("crank_a", "coupler_a", "coupler_b", "crank_b")
POSE_POINTS = ("g1", "g2", "p2", "p5", "p_couple")


class LoopRole(enum.Enum):
    HEAD = "Head"
    BODY_LEFT = "BodyLeft"
    BODY_RIGHT = "BodyRight"
    TAIL = "Tail"

    @classmethod
    def parse(cls, text: str) -> LoopRole:
        for role in cls:
            if role.value.lower() == text.strip().lower():
                return role
        raise InvalidInputError(
            f"unknown loop {text!r} (expected one of {', '.join(r.value for r in cls)})"
        )


ROLE_ORDER = tuple(LoopRole)


@dataclass(frozen=True)
class Actuator:
    index: int

    def __post_init__(self) -> None:
        if not 1 <= self.index <= N_ACTUATORS:
            raise InvalidInputError(f"actuator index must be in 1..{N_ACTUATORS}, got {self.index}")


@dataclass(frozen=True)
class SolvedAngle:
    loop: LoopRole
    which: str
    offset: Angle = 0.0

    def __post_init__(self) -> None:
        if self.which not in ("theta3", "theta4"):
            raise InvalidInputError(f"solved angle must be theta3 or theta4, got {self.which!r}")


@dataclass(frozen=True)
class Constant:
    value: Angle


AngleSource = Union[Actuator, SolvedAngle, Constant]


@dataclass(frozen=True)
class Marker:
    name: str
    loop: LoopRole
    link: str
    offset_along: float = 1.0
    offset_perp: float = 0.0

    def __post_init__(self) -> None:
        if self.link not in LINK_NAMES:
            raise InvalidInputError(f"marker {self.name!r}: unknown link {self.link!r}")
        if not 0.0 <= self.offset_along <= 1.0:
            raise InvalidInputError(f"marker {self.name!r}: offset_along must be in [0, 1]")

    def locate(self, pose: LoopPose) -> Vec2:
        """Marker position on ``pose``; positive perpendicular offset is left of the link."""
        start, end = pose.links()[self.link]
        point = lerp(start, end, self.offset_along)
        if self.offset_perp:
            direction = end - start
            point = point + direction.perp() * (self.offset_perp / direction.norm())
        return point


@dataclass(frozen=True)
class SharedJoint:
    name: str
    members: tuple[tuple[LoopRole, str], ...]


@dataclass(frozen=True)
class LizardAssembly:
    loops: Mapping[LoopRole, FiveBarGeometry]
    inputs: Mapping[LoopRole, tuple[AngleSource, AngleSource]]
    frames: Mapping[LoopRole, Frame] = field(default_factory=dict)
    branches: Mapping[LoopRole, Branch] = field(default_factory=dict)
    markers: tuple[Marker, ...] = ()
    shared_joints: tuple[SharedJoint, ...] = ()
    neutral: tuple[Angle, ...] = (math.pi / 2,) * N_ACTUATORS
    graph: MechanismGraph | None = None
    schedule: Mapping[str, Any] | None = None
    order: tuple[LoopRole, ...] = field(init=False)

    def __post_init__(self) -> None:
        for section in ("loops", "inputs"):
            missing = [r.value for r in LoopRole if r not in getattr(self, section)]
            if missing:
                raise ConfigError(f"missing loop {', '.join(missing)}", f"$.{section}")
        object.__setattr__(self, "order", _evaluation_order(self.inputs))
        used = {s.index for pair in self.inputs.values() for s in pair if isinstance(s, Actuator)}
        unused = sorted(set(range(1, N_ACTUATORS + 1)) - used)
        if unused:
            raise ConfigError(f"actuators {unused} drive no loop", "$.inputs")
        if len(self.neutral) != N_ACTUATORS:
            raise ConfigError(f"expected {N_ACTUATORS} neutral angles", "$.neutral_deg")

    def frame(self, role: LoopRole) -> Frame:
        return self.frames.get(role, Frame())

    def branch(self, role: LoopRole) -> Branch:
        return self.branches.get(role, Branch.ELBOW_UP)

    def marker(self, name: str) -> Marker:
        for m in self.markers:
            if m.name == name:
                return m
        raise InvalidInputError(f"unknown marker {name!r}")


@dataclass(frozen=True)
class BodyPose:
    poses: Mapping[LoopRole, LoopPose]
    marker_points: Mapping[str, Vec2]
    actuator_angles: tuple[Angle, ...]
    solutions: Mapping[LoopRole, LoopSolution]
    inputs: Mapping[LoopRole, DrivenInput]

    def as_dict(self) -> dict[str, Any]:
        return {
            "joints": {r.value: self.poses[r].as_dict() for r in ROLE_ORDER},
            "markers": {k: v.as_list() for k, v in self.marker_points.items()},
        }


def _evaluation_order(inputs: Mapping[LoopRole, tuple[AngleSource, AngleSource]]) -> tuple[LoopRole, ...]:
    sorter: TopologicalSorter[LoopRole] = TopologicalSorter()
    for role in ROLE_ORDER:
        deps = [s.loop for s in inputs[role] if isinstance(s, SolvedAngle)]
        sorter.add(role, *deps)
    try:
        sorter.prepare()
    except CycleError as exc:
        cycle = " -> ".join(r.value for r in exc.args[1])
        raise ConfigError(f"cyclic angle-source graph: {cycle}", "$.inputs") from None
    order: list[LoopRole] = []
    while sorter.is_active():
        ready = sorted(sorter.get_ready(), key=ROLE_ORDER.index)
        order.extend(ready)
        sorter.done(*ready)
    return tuple(order)


def _resolve(src: AngleSource, actuators: Sequence[Angle], solved: Mapping[LoopRole, LoopSolution]) -> Angle:
    if isinstance(src, Actuator):
        return actuators[src.index - 1]
    if isinstance(src, SolvedAngle):
        return normalize_angle(getattr(solved[src.loop], src.which) + src.offset)
    return src.value


def solve_assembly(asm: LizardAssembly, actuators: Sequence[Angle], tol: float = CLOSURE_TOL) -> BodyPose:
    """Solve every loop for the four actuator angles (radians) and place it in the world.

    Raises:
        AssemblyUnreachableError: a loop cannot close; carries its role and discriminant.
    """
    if len(actuators) != N_ACTUATORS:
        raise InvalidInputError(f"expected {N_ACTUATORS} actuator angles, got {len(actuators)}")
    acts = tuple(normalize_angle(a) for a in actuators)
    solved: dict[LoopRole, LoopSolution] = {}
    driven: dict[LoopRole, DrivenInput] = {}
    poses: dict[LoopRole, LoopPose] = {}
    for role in asm.order:
        geom = asm.loops[role]
        src2, src5 = asm.inputs[role]
        inp = DrivenInput(_resolve(src2, acts, solved), _resolve(src5, acts, solved))
        try:
            sol = solve_passive(geom, inp, asm.branch(role), tol)
        except UnreachableError as exc:
            raise AssemblyUnreachableError(role.value, exc.discriminant) from exc
        except DegenerateConfigurationError as exc:
            raise AssemblyUnreachableError(role.value, 0.0) from exc
        solved[role] = sol
        driven[role] = inp
        poses[role] = forward_pose(geom, inp, sol).transformed(asm.frame(role))
    ordered = {r: poses[r] for r in ROLE_ORDER}
    markers = {m.name: m.locate(ordered[m.loop]) for m in asm.markers}
    return BodyPose(
        poses=ordered,
        marker_points=markers,
        actuator_angles=acts,
        solutions={r: solved[r] for r in ROLE_ORDER},
        inputs={r: driven[r] for r in ROLE_ORDER},
    )


def shared_joint_error(asm: LizardAssembly, body: BodyPose) -> dict[str, float]:
    """Largest world-frame spread of each declared shared joint."""
    spread = {}
    for joint in asm.shared_joints:
        points = [getattr(body.poses[role], attr) for role, attr in joint.members]
        spread[joint.name] = max((p - q).norm() for p in points for q in points)
    return spread


# -- config loading ---------------------------------------------------------

def _schema() -> dict[str, Any]:
    text = resources.files("lizardlink.data").joinpath("assembly.schema.json").read_text()
    return json.loads(text)


def _json_path(parts: Sequence[Any]) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate_document(doc: Any) -> None:
    """Structural check of a config document against the bundled JSON schema."""
    validator = jsonschema.Draft202012Validator(_schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise ConfigError(error.message, _json_path(error.absolute_path))


def _role(name: str, path: str) -> LoopRole:
    try:
        return LoopRole.parse(name)
    except InvalidInputError:
        raise ConfigError(f"unknown loop {name!r}", path) from None


def _source(data: Mapping[str, Any], path: str) -> AngleSource:
    if "actuator" in data:
        return Actuator(int(data["actuator"]))
    if "solved" in data:
        s = data["solved"]
        return SolvedAngle(
            _role(s["loop"], path + ".solved.loop"), s["which"], math.radians(s.get("offset_deg", 0.0))
        )
    return Constant(rad(data["constant_deg"]))


def assembly_from_dict(doc: Mapping[str, Any]) -> LizardAssembly:
    validate_document(doc)
    loops = {}
    for name, g in doc["loops"].items():
        loops[_role(name, f"$.loops.{name}")] = FiveBarGeometry(
            g["l1"], g["l2"], g["l3"], g["l4"], g["l5"], math.radians(g.get("theta1_deg", 0.0))
        )
    inputs = {}
    for name, pair in doc["inputs"].items():
        path = f"$.inputs.{name}"
        inputs[_role(name, path)] = (
            _source(pair["theta2"], path + ".theta2"),
            _source(pair["theta5"], path + ".theta5"),
        )
    frames = {}
    for name, fr in doc.get("frames", {}).items():
        origin = fr.get("origin", [0.0, 0.0])
        frames[_role(name, f"$.frames.{name}")] = Frame(Vec2(*origin), rad(fr.get("rotation_deg", 0.0)))
    branches = {
        _role(name, f"$.branches.{name}"): Branch.parse(b) for name, b in doc.get("branches", {}).items()
    }
    markers = []
    for k, m in enumerate(doc.get("markers", [])):
        path = f"$.markers[{k}]"
        if m["link"] not in LINK_NAMES:
            raise ConfigError(f"unknown link {m['link']!r}", path + ".link")
        markers.append(
            Marker(m["name"], _role(m["loop"], path + ".loop"), m["link"],
                   float(m.get("offset_along", 1.0)), float(m.get("offset_perp", 0.0)))
        )
    names = [m.name for m in markers]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate marker names", "$.markers")
    shared = []
    for k, sj in enumerate(doc.get("shared_joints", [])):
        members = tuple(
            (_role(role, f"$.shared_joints[{k}].members[{i}]"), attr)
            for i, (role, attr) in enumerate(sj["members"])
        )
        shared.append(SharedJoint(sj["name"], members))
    neutral = tuple(rad(a) for a in doc.get("neutral_deg", [90.0] * N_ACTUATORS))
    graph = graph_from_dict(doc["mechanism_graph"]) if "mechanism_graph" in doc else None
    return LizardAssembly(
        loops=loops,
        inputs=inputs,
        frames=frames,
        branches=branches,
        markers=tuple(markers),
        shared_joints=tuple(shared),
        neutral=neutral,
        graph=graph,
        schedule=doc.get("schedule"),
    )


def load_assembly(config_text: str) -> LizardAssembly:
    """Parse and validate an assembly config (JSON text, angles in degrees)."""
    try:
        doc = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    return assembly_from_dict(doc)


def load_assembly_file(path: str | Path) -> LizardAssembly:
    return load_assembly(Path(path).read_text(encoding="utf-8"))


def default_config_text() -> str:
    return resources.files("lizardlink.data").joinpath("lizard_default.json").read_text()


def default_lizard() -> LizardAssembly:
    """Bundled reconstruction of the four-loop lizard.

    Head is driven by actuators 1-2 and Tail by 3-4.  The body-side loops take
    their cranks from the head and tail coupler angles, which stand in for the
    shared joints between loops.
    """
    return load_assembly(default_config_text())

"""Periodic actuator schedules and their playback through the assembly.

A schedule assigns each of the four actuators a waveform
``center + amplitude * shape((t / period - phase) mod 1)``, where ``shape`` is
a unit sine or a unit trapezoid with the same zero crossings.  The bundled
default pairs actuators diagonally: (1, 4) at phase 0 and (2, 3) at phase 0.5.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Mapping, Sequence, TextIO

from lizardlink.assembly import N_ACTUATORS, BodyPose, LizardAssembly, solve_assembly
from lizardlink.errors import AssemblyUnreachableError, ConfigError, GaitInfeasibleError, InvalidInputError
from lizardlink.fivebar import CLOSURE_TOL
from lizardlink.geom import Angle, normalize_angle

# a passive angle jumping this far between adjacent frames means the loop changed branch
MAX_FRAME_JUMP = math.pi / 2
_TIME_SLACK = 1e-9


@dataclass(frozen=True)
class Waveform:
    center: Angle
    amplitude: float = 0.0
    phase: float = 0.0
    shape: str = "sine"
    rise_fraction: float = 0.25

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise InvalidInputError(f"amplitude must be >= 0, got {self.amplitude}")
        if not 0.0 <= self.phase < 1.0:
            raise InvalidInputError(f"phase must be in [0, 1), got {self.phase}")
        if self.shape not in ("sine", "trapezoid"):
            raise InvalidInputError(f"unknown waveform shape {self.shape!r}")
        if not 0.0 < self.rise_fraction <= 0.5:
            raise InvalidInputError(f"rise_fraction must be in (0, 0.5], got {self.rise_fraction}")

    def unit(self, u: float) -> float:
        """Unit waveform on one cycle, ``u`` in [0, 1)."""
        if self.shape == "sine":
            return math.sin(2 * math.pi * u)
        half = self.rise_fraction / 2
        if u < half:
            return u / half
        if u < 0.5 - half:
            return 1.0
        if u < 0.5 + half:
            return (0.5 - u) / half
        if u < 1.0 - half:
            return -1.0
        return (u - 1.0) / half


@dataclass(frozen=True)
class GaitSchedule:
    period: float
    waveforms: tuple[Waveform, ...]
    sample_rate: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "waveforms", tuple(self.waveforms))
        if not self.period > 0:
            raise InvalidInputError(f"period must be positive, got {self.period}")
        if not self.sample_rate > 0:
            raise InvalidInputError(f"sample_rate must be positive, got {self.sample_rate}")
        if len(self.waveforms) != N_ACTUATORS:
            raise InvalidInputError(f"expected {N_ACTUATORS} waveforms, got {len(self.waveforms)}")

    @property
    def max_amplitude(self) -> float:
        return max(w.amplitude for w in self.waveforms)

    def frames_per_period(self) -> float:
        return self.period * self.sample_rate


def sample_schedule(sched: GaitSchedule, t: float) -> tuple[Angle, ...]:
    """Four actuator angles (radians) at time ``t``."""
    if t < 0:
        raise InvalidInputError(f"time must be non-negative, got {t}")
    cycle = t / sched.period
    return tuple(
        normalize_angle(w.center + w.amplitude * w.unit((cycle - w.phase) % 1.0))
        for w in sched.waveforms
    )


@dataclass(frozen=True)
class GaitFrame:
    t: float
    actuators: tuple[Angle, ...]
    pose: BodyPose

    def as_dict(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "actuators_deg": [math.degrees(a) for a in self.actuators],
            **self.pose.as_dict(),
        }


@dataclass(frozen=True)
class Trajectory:
    frames: tuple[GaitFrame, ...]
    period: float
    sample_rate: float

    def __len__(self) -> int:
        return len(self.frames)


def _frame_times(sample_rate: float, duration: float) -> list[float]:
    n = math.floor(duration * sample_rate + _TIME_SLACK)
    return [k / sample_rate for k in range(n + 1)]


def _solve_frame(asm: LizardAssembly, sched: GaitSchedule, t: float, tol: float) -> GaitFrame:
    acts = sample_schedule(sched, t)
    try:
        pose = solve_assembly(asm, acts, tol)
    except AssemblyUnreachableError as exc:
        raise GaitInfeasibleError(t, exc.role, exc.discriminant) from exc
    for role, sol in pose.solutions.items():
        if sol.tangent:
            raise GaitInfeasibleError(t, role.value, sol.discriminant, "reaches a branch-change pose")
    return GaitFrame(t, acts, pose)


def _check_continuity(prev: GaitFrame, cur: GaitFrame) -> None:
    for role, sol in cur.pose.solutions.items():
        before = prev.pose.solutions[role]
        for name in ("theta3", "theta4"):
            jump = abs(normalize_angle(getattr(sol, name) - getattr(before, name)))
            if jump > MAX_FRAME_JUMP:
                raise GaitInfeasibleError(cur.t, role.value, sol.discriminant, "flips branch")


def rollout(
    asm: LizardAssembly,
    sched: GaitSchedule,
    duration: float,
    workers: int = 1,
    tol: float = CLOSURE_TOL,
) -> Trajectory:
    """Solve the assembly at every ``1/sample_rate`` step of ``[0, duration]``.

    Branches stay as configured on the assembly for the whole run.

    Raises:
        GaitInfeasibleError: the earliest frame that cannot be solved, touches
            a zero-discriminant pose, or jumps to the other branch.
    """
    if not duration > 0:
        raise InvalidInputError(f"duration must be positive, got {duration}")
    times = _frame_times(sched.sample_rate, duration)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map yields in submission order, so the first raise is the earliest frame
            frames = list(pool.map(lambda t: _solve_frame(asm, sched, t, tol), times))
    else:
        frames = [_solve_frame(asm, sched, t, tol) for t in times]
    for prev, cur in zip(frames, frames[1:]):
        _check_continuity(prev, cur)
    return Trajectory(tuple(frames), sched.period, sched.sample_rate)


@dataclass(frozen=True)
class StrideMetrics:
    stride_length: float
    path_length: float
    duty_estimate: float


def stride_metrics(traj: Trajectory, marker: str, contact_threshold: float | None = None) -> StrideMetrics:
    """Foot-marker statistics over the first period of a trajectory.

    ``stride_length`` is the fore-aft (world x) excursion of the marker,
    ``path_length`` the polyline length it travels, and ``duty_estimate`` the
    fraction of frames with y below ``contact_threshold`` (default: the mean y
    over the period).
    """
    if not traj.frames:
        raise InvalidInputError("empty trajectory")
    if marker not in traj.frames[0].pose.marker_points:
        raise InvalidInputError(f"unknown marker {marker!r}")
    if traj.frames[-1].t < traj.period - _TIME_SLACK:
        raise InvalidInputError(
            f"trajectory spans {traj.frames[-1].t:.6g}s, shorter than one period ({traj.period:.6g}s)"
        )
    window = [f for f in traj.frames if f.t <= traj.period + _TIME_SLACK]
    points = [f.pose.marker_points[marker] for f in window]
    xs = [p.x for p in points]
    stride = max(xs) - min(xs)
    path = sum((b - a).norm() for a, b in zip(points, points[1:]))
    # the closing frame at t == period repeats t == 0
    cycle = [p for f, p in zip(window, points) if f.t < traj.period - _TIME_SLACK] or points
    threshold = contact_threshold if contact_threshold is not None else sum(p.y for p in cycle) / len(cycle)
    duty = sum(p.y < threshold for p in cycle) / len(cycle)
    return StrideMetrics(stride, path, duty)


def write_jsonl(traj: Trajectory, destination: TextIO) -> None:
    for frame in traj.frames:
        destination.write(json.dumps(frame.as_dict(), separators=(",", ":")) + "\n")


def schedule_from_dict(data: Mapping[str, Any], path: str = "$.schedule") -> GaitSchedule:
    """Schedule from its JSON form (angles in degrees)."""
    try:
        waves = []
        for k, w in enumerate(data["waveforms"]):
            try:
                waves.append(Waveform(
                    math.radians(w["center_deg"]),
                    math.radians(w.get("amplitude_deg", 0.0)),
                    float(w.get("phase", 0.0)),
                    w.get("shape", "sine"),
                    float(w.get("rise_fraction", 0.25)),
                ))
            except InvalidInputError as exc:
                raise ConfigError(str(exc), f"{path}.waveforms[{k}]") from exc
        return GaitSchedule(float(data["period"]), tuple(waves), float(data["sample_rate"]))
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"missing field {exc.args[0]!r}", path) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), path) from exc


def load_schedule(text: str) -> GaitSchedule:
    """Standalone schedule file: either the schedule object or ``{"schedule": {...}}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise ConfigError("schedule must be a JSON object")
    if "schedule" in doc:
        return schedule_from_dict(doc["schedule"])
    return schedule_from_dict(doc, "$")


def default_schedule(asm: LizardAssembly) -> GaitSchedule:
    if asm.schedule is None:
        raise ConfigError("assembly config has no schedule section", "$.schedule")
    return schedule_from_dict(asm.schedule)


def constant_schedule(angles: Sequence[Angle], period: float = 1.0, sample_rate: float = 10.0) -> GaitSchedule:
    """Zero-amplitude schedule holding the actuators at ``angles``."""
    return GaitSchedule(period, tuple(Waveform(a) for a in angles), sample_rate)

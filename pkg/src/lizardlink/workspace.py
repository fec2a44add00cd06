"""Workspace sweep over the driven-angle grid and CSV/SVG export.

The sweep visits every (theta2, theta5) pair on an inclusive degree grid,
solves the loop on one branch and records the pose, or marks the sample
unreachable.  Rows are indexed by ascending theta5; exports walk theta5
descending and theta2 ascending.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, TextIO

from lizardlink.errors import DegenerateConfigurationError, EmptyWorkspaceError, InvalidInputError, UnreachableError
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
from lizardlink.geom import Vec2

CSV_HEADER = ("theta2_deg", "theta5_deg", "reachable",
              "x1", "y1", "x2", "y2", "x3", "y3", "x4", "y4", "x5", "y5")

# slack when counting grid steps so that e.g. (160 - 45) / 1 is not floored to 114
_STEP_SLACK = 1e-9


@dataclass(frozen=True)
class AngleRange:
    """Inclusive degree range ``start, start + step, ..., <= end``."""

    start: float
    end: float
    step: float = 1.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.start, self.end, self.step)):
            raise InvalidInputError("range bounds must be finite")
        if self.step <= 0:
            raise InvalidInputError(f"step must be positive, got {self.step}")
        if self.start > self.end:
            raise InvalidInputError(f"start {self.start} exceeds end {self.end}")

    @property
    def count(self) -> int:
        return math.floor((self.end - self.start) / self.step + _STEP_SLACK) + 1

    def values(self) -> tuple[float, ...]:
        return tuple(self.start + i * self.step for i in range(self.count))


@dataclass(frozen=True)
class SweepSpec:
    theta2: AngleRange = field(default_factory=lambda: AngleRange(45.0, 160.0, 1.0))
    theta5: AngleRange = field(default_factory=lambda: AngleRange(0.0, 135.0, 1.0))
    branch: Branch = Branch.ELBOW_UP


@dataclass(frozen=True, slots=True)
class SampleResult:
    theta2_deg: float
    theta5_deg: float
    reachable: bool
    pose: LoopPose | None = None
    solution: LoopSolution | None = None


@dataclass(frozen=True)
class WorkspaceGrid:
    theta2_deg: tuple[float, ...]
    theta5_deg: tuple[float, ...]
    samples: tuple[tuple[SampleResult, ...], ...]  # [i_theta5][i_theta2]

    def __post_init__(self) -> None:
        if len(self.samples) != len(self.theta5_deg) or any(
            len(row) != len(self.theta2_deg) for row in self.samples
        ):
            raise ValueError("sample array does not match the grid axes")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.theta5_deg), len(self.theta2_deg))

    @property
    def size(self) -> int:
        return len(self.theta5_deg) * len(self.theta2_deg)

    def reachable_samples(self) -> list[SampleResult]:
        return [s for s in self.export_order() if s.reachable]

    @property
    def reachable_count(self) -> int:
        return sum(s.reachable for row in self.samples for s in row)

    def export_order(self) -> Iterator[SampleResult]:
        """theta5 descending (outer), theta2 ascending (inner)."""
        for row in reversed(self.samples):
            yield from row


def _sample(geom: FiveBarGeometry, t2: float, t5: float, branch: Branch) -> SampleResult:
    inp = DrivenInput.from_degrees(t2, t5)
    try:
        sol = solve_passive(geom, inp, branch)
    except (UnreachableError, DegenerateConfigurationError):
        return SampleResult(t2, t5, False)
    return SampleResult(t2, t5, True, forward_pose(geom, inp, sol), sol)


def _row(geom: FiveBarGeometry, theta2s: tuple[float, ...], t5: float, branch: Branch) -> tuple[SampleResult, ...]:
    return tuple(_sample(geom, t2, t5, branch) for t2 in theta2s)


def sweep(geom: FiveBarGeometry, spec: SweepSpec | None = None, workers: int = 1) -> WorkspaceGrid:
    """Solve ``geom`` at every grid point of ``spec``; failures are recorded, not raised."""
    spec = spec or SweepSpec()
    theta2s = spec.theta2.values()
    theta5s = spec.theta5.values()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(lambda t5: _row(geom, theta2s, t5, spec.branch), theta5s))
    else:
        rows = tuple(_row(geom, theta2s, t5, spec.branch) for t5 in theta5s)
    return WorkspaceGrid(theta2s, theta5s, rows)


def _check_closure(sample: SampleResult) -> None:
    if __debug__ and sample.solution is not None:
        assert sample.solution.residual <= CLOSURE_TOL, (
            f"closure residual {sample.solution.residual} at "
            f"theta2={sample.theta2_deg}, theta5={sample.theta5_deg}"
        )


def _num(value: float) -> str:
    text = format(value, ".9g")
    return "0" if text == "-0" else text


def export_csv(grid: WorkspaceGrid, destination: TextIO) -> None:
    """One row per sample; joints 1..5 are g1, p2, coupler joint, p5, g2."""
    writer = csv.writer(destination, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in grid.export_order():
        row = [_num(s.theta2_deg), _num(s.theta5_deg), "true" if s.reachable else "false"]
        if s.reachable:
            _check_closure(s)
            for p in s.pose.joints():
                row.extend((_num(p.x), _num(p.y)))
        else:
            row.extend([""] * 10)
        writer.writerow(row)


# -- SVG -----------------------------------------------------------------------

SVG_MODES = ("overlay", "points")
_LINK_COLORS = {
    "crank_a": "#1f77b4",
    "coupler_a": "#ff7f0e",
    "coupler_b": "#2ca02c",
    "crank_b": "#d62728",
}


def _svg_num(value: float) -> str:
    text = format(value, ".6g")
    return "0" if text == "-0" else text


def _bounds(points: list[Vec2]) -> tuple[float, float, float, float]:
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return min(xs), min(ys), max(xs), max(ys)


def export_svg(grid: WorkspaceGrid, destination: TextIO, mode: str = "overlay") -> None:
    """Standalone SVG 1.1: overplotted linkages, or coupler-joint point cloud.

    The y-axis is flipped so that +y points up on screen.
    """
    if mode not in SVG_MODES:
        raise InvalidInputError(f"unknown SVG mode {mode!r} (expected one of {SVG_MODES})")
    reachable = grid.reachable_samples()
    if mode == "overlay" and not reachable:
        raise EmptyWorkspaceError("no reachable samples to draw")

    points = [p for s in reachable for p in s.pose.joints()] if mode == "overlay" else [
        s.pose.p_couple for s in reachable
    ]
    if points:
        x0, y0, x1, y1 = _bounds(points)
    else:
        x0 = y0 = x1 = y1 = 0.0
    span = max(x1 - x0, y1 - y0) or 1.0
    # a degenerate (single point or collinear) extent still gets a visible box
    width = max(x1 - x0, 0.1 * span)
    height = max(y1 - y0, 0.1 * span)
    x0 -= (width - (x1 - x0)) / 2
    y1 += (height - (y1 - y0)) / 2
    mx, my = 0.05 * width, 0.05 * height
    vb = (x0 - mx, -(y1 + my), width + 2 * mx, height + 2 * my)
    stroke = 0.002 * span
    radius = 0.004 * span

    out = destination.write
    out('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n')
    out('<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="800" height="{_svg_num(800 * vb[3] / vb[2])}" '
        f'viewBox="{" ".join(_svg_num(v) for v in vb)}">\n')
    out(f'<title>workspace {mode}: {len(reachable)} of {grid.size} samples reachable</title>\n')
    if mode == "overlay":
        for link, color in _LINK_COLORS.items():
            out(f'<g id="{link}" stroke="{color}" stroke-width="{_svg_num(stroke)}" '
                'stroke-opacity="0.25" fill="none">\n')
            for s in reachable:
                _check_closure(s)
                a, b = s.pose.links()[link]
                out(f'<line x1="{_svg_num(a.x)}" y1="{_svg_num(-a.y)}" '
                    f'x2="{_svg_num(b.x)}" y2="{_svg_num(-b.y)}"/>\n')
            out("</g>\n")
    else:
        out('<g id="coupler_joint" fill="#1f77b4" stroke="none">\n')
        for s in reachable:
            _check_closure(s)
            p = s.pose.p_couple
            out(f'<circle cx="{_svg_num(p.x)}" cy="{_svg_num(-p.y)}" r="{_svg_num(radius)}"/>\n')
        out("</g>\n")
    out("</svg>\n")

"""Command-line front end.

Exit status: 0 success, 1 config or usage error, 2 kinematically infeasible
request, 3 I/O failure while writing output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from lizardlink.assembly import (
    LizardAssembly,
    LoopRole,
    load_assembly_file,
    shared_joint_error,
    solve_assembly,
)
from lizardlink.errors import ConfigError, EmptyWorkspaceError, InfeasibleError, InvalidInputError, LizardError
from lizardlink.fivebar import Branch, DrivenInput, forward_pose, solve_passive
from lizardlink.gait import default_schedule, load_schedule, rollout, stride_metrics, write_jsonl
from lizardlink.topology import graph_from_dict, validate_driving_pairs
from lizardlink.workspace import AngleRange, SweepSpec, export_csv, export_svg, sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class OutputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2, which is reserved
        raise UsageError(message)


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc.msg} (line {exc.lineno})") from exc


def _load(path: str) -> LizardAssembly:
    try:
        return load_assembly_file(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc


def _fmt_point(p) -> str:
    return f"({p.x:.6f}, {p.y:.6f})"


def _open_out(path: str):
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_solve(args: argparse.Namespace) -> int:
    asm = _load(args.config)
    role = LoopRole.parse(args.loop)
    geom = asm.loops[role]
    branch = Branch.parse(args.branch) if args.branch else asm.branch(role)
    if not (math.isfinite(args.theta2) and math.isfinite(args.theta5)):
        raise InvalidInputError("angles must be finite")
    inp = DrivenInput.from_degrees(args.theta2, args.theta5)
    sol = solve_passive(geom, inp, branch)
    pose = forward_pose(geom, inp, sol)
    if args.json:
        out = {
            "loop": role.value,
            "branch": branch.value,
            "theta2_deg": args.theta2,
            "theta5_deg": args.theta5,
            "theta3_deg": math.degrees(sol.theta3),
            "theta4_deg": math.degrees(sol.theta4),
            "residual": sol.residual,
            "discriminant": sol.discriminant,
            "joints": pose.as_dict(),
        }
        print(json.dumps(out, sort_keys=True))
        return EXIT_OK
    print(f"loop={role.value} branch={branch.value}")
    print(f"theta3={math.degrees(sol.theta3):.6f}")
    print(f"theta4={math.degrees(sol.theta4):.6f}")
    print(f"residual={sol.residual:.3e}")
    for name, p in (("g1", pose.g1), ("p2", pose.p2), ("p_couple", pose.p_couple),
                    ("p5", pose.p5), ("g2", pose.g2)):
        print(f"{name}={_fmt_point(p)}")
    return EXIT_OK


def cmd_dof(args: argparse.Namespace) -> int:
    doc = _read_json(args.config)
    if not isinstance(doc, dict) or "mechanism_graph" not in doc:
        raise ConfigError("config has no mechanism_graph section", "$.mechanism_graph")
    report = validate_driving_pairs(graph_from_dict(doc["mechanism_graph"]))
    if args.json:
        print(json.dumps({
            "n": report.n_links, "m": report.n_joints, "v": report.n_loops,
            "F": report.mobility, "F_star": report.constrained_mobility,
            "driving": list(report.driving), "valid": report.valid,
            "reasons": list(report.reasons), "poc_dimension": report.poc_dimension,
        }, sort_keys=True))
        return EXIT_OK
    print(report.summary())
    for reason in report.reasons:
        print(f"  - {reason}")
    return EXIT_OK


def _range(values: Sequence[float] | None, default: AngleRange) -> AngleRange:
    if values is None:
        return default
    return AngleRange(*values)


def cmd_workspace(args: argparse.Namespace) -> int:
    asm = _load(args.config)
    role = LoopRole.parse(args.loop)
    suffix = Path(args.out).suffix.lower()
    if suffix not in (".csv", ".svg"):
        raise UsageError(f"--out must end in .csv or .svg, got {args.out!r}")
    defaults = SweepSpec()
    spec = SweepSpec(
        theta2=_range(args.theta2_range, defaults.theta2),
        theta5=_range(args.theta5_range, defaults.theta5),
        branch=Branch.parse(args.branch) if args.branch else asm.branch(role),
    )
    grid = sweep(asm.loops[role], spec, workers=args.workers)
    if suffix == ".svg" and args.mode == "overlay" and grid.reachable_count == 0:
        raise EmptyWorkspaceError(f"no reachable samples among {grid.size}; nothing to overlay")
    handle = _open_out(args.out)
    try:
        with handle:
            if suffix == ".csv":
                export_csv(grid, handle)
            else:
                export_svg(grid, handle, args.mode)
    except OSError as exc:
        raise OutputError(f"cannot write {args.out}: {exc.strerror}") from exc
    print(f"samples={grid.size} reachable={grid.reachable_count}")
    return EXIT_OK


def cmd_gait(args: argparse.Namespace) -> int:
    asm = _load(args.config)
    if args.schedule:
        try:
            text = Path(args.schedule).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {args.schedule}: {exc.strerror}") from exc
        sched = load_schedule(text)
    else:
        sched = default_schedule(asm)
    duration = args.duration if args.duration is not None else sched.period
    traj = rollout(asm, sched, duration, workers=args.workers)
    handle = _open_out(args.out)
    try:
        with handle:
            write_jsonl(traj, handle)
    except OSError as exc:
        raise OutputError(f"cannot write {args.out}: {exc.strerror}") from exc
    print(f"frames={len(traj)}")
    if args.metrics:
        m = stride_metrics(traj, args.metrics)
        print(f"stride_length={m.stride_length:.6g} path_length={m.path_length:.6g} "
              f"duty_estimate={m.duty_estimate:.6g}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    asm = _load(args.config)
    print(f"loops: {', '.join(r.value for r in asm.order)} (evaluation order)")
    if asm.graph is not None:
        print(validate_driving_pairs(asm.graph).summary())
    body = solve_assembly(asm, asm.neutral)
    worst = max(s.residual for s in body.solutions.values())
    print(f"neutral pose solved, max residual={worst:.3e}")
    for name, spread in shared_joint_error(asm, body).items():
        print(f"shared joint {name}: spread={spread:.3e}")
    if asm.schedule is not None:
        default_schedule(asm)
        print("schedule: ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lizardlink", description="Five-bar lizard linkage kinematics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one loop for two crank angles")
    p.add_argument("config")
    p.add_argument("--loop", required=True)
    p.add_argument("--theta2", type=float, required=True, help="crank A angle, degrees")
    p.add_argument("--theta5", type=float, required=True, help="crank B angle, degrees")
    p.add_argument("--branch", choices=("up", "down"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("dof", help="mobility and driving-pair check")
    p.add_argument("config")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dof)

    p = sub.add_parser("workspace", help="sweep a loop's driven-angle grid")
    p.add_argument("config")
    p.add_argument("--loop", required=True)
    p.add_argument("--out", required=True, help="output .csv or .svg")
    p.add_argument("--mode", choices=("overlay", "points"), default="overlay")
    p.add_argument("--theta2-range", nargs=3, type=float, metavar=("START", "END", "STEP"))
    p.add_argument("--theta5-range", nargs=3, type=float, metavar=("START", "END", "STEP"))
    p.add_argument("--branch", choices=("up", "down"))
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_workspace)

    p = sub.add_parser("gait", help="play a gait schedule through the assembly")
    p.add_argument("config")
    p.add_argument("--schedule", help="schedule JSON (default: the config's schedule section)")
    p.add_argument("--duration", type=float, help="seconds (default: one period)")
    p.add_argument("--out", required=True, help="output .jsonl")
    p.add_argument("--metrics", metavar="MARKER")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_gait)

    p = sub.add_parser("validate", help="load a config and check it end to end")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LizardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Position, mobility, workspace and gait analysis of integrated five-bar linkages."""

from lizardlink.assembly import (
    BodyPose,
    LizardAssembly,
    LoopRole,
    default_lizard,
    load_assembly,
    solve_assembly,
)
from lizardlink.fivebar import (
    Branch,
    DrivenInput,
    FiveBarGeometry,
    LoopPose,
    LoopSolution,
    closure_residual,
    forward_pose,
    solve_both_branches,
    solve_passive,
)
from lizardlink.geom import Vec2, normalize_angle, polar
from lizardlink.topology import MechanismGraph, independent_loop_count, mobility, validate_driving_pairs

__all__ = [
    "BodyPose",
    "Branch",
    "DrivenInput",
    "FiveBarGeometry",
    "LizardAssembly",
    "LoopPose",
    "LoopRole",
    "LoopSolution",
    "MechanismGraph",
    "Vec2",
    "closure_residual",
    "default_lizard",
    "forward_pose",
    "independent_loop_count",
    "load_assembly",
    "mobility",
    "normalize_angle",
    "polar",
    "solve_assembly",
    "solve_both_branches",
    "solve_passive",
    "validate_driving_pairs",
]

__version__ = "0.1.0"

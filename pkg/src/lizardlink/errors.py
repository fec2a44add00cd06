"""Exception hierarchy shared by the kinematics modules and the CLI."""

from __future__ import annotations


class LizardError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(LizardError, ValueError):
    """A numeric argument is outside its domain (non-finite, negative length, ...)."""


class ConfigError(LizardError, ValueError):
    """A configuration document is malformed or semantically inconsistent.

    ``path`` is a JSON-path style pointer to the offending field.
    """

    def __init__(self, message: str, path: str = "$") -> None:
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class InvalidTopologyError(ConfigError):
    """Mechanism graph counts or references are inconsistent."""


class InfeasibleError(LizardError):
    """Kinematically impossible request (maps to CLI exit status 2)."""


class UnreachableError(InfeasibleError):
    """The two coupler circles of a five-bar loop do not intersect."""

    def __init__(self, discriminant: float, message: str | None = None) -> None:
        self.discriminant = discriminant
        super().__init__(
            message or f"configuration unreachable (discriminant={discriminant:.6g})"
        )


class DegenerateConfigurationError(InfeasibleError):
    """Crank tips coincide with equal couplers, so the coupler joint is undetermined."""


class AssemblyUnreachableError(UnreachableError):
    """One loop of an assembly cannot be closed."""

    def __init__(self, role: str, discriminant: float) -> None:
        self.role = role
        super().__init__(
            discriminant,
            f"loop {role} unreachable (discriminant={discriminant:.6g})",
        )


class EmptyWorkspaceError(InfeasibleError):
    """A workspace grid has no reachable sample to draw."""


class GaitInfeasibleError(InfeasibleError):
    """A gait frame cannot be solved, or would require a branch flip."""

    def __init__(self, t: float, role: str, discriminant: float, reason: str = "unreachable") -> None:
        self.t = t
        self.role = role
        self.discriminant = discriminant
        self.reason = reason
        super().__init__(
            f"gait infeasible at t={t:.6g}s: loop {role} {reason} "
            f"(discriminant={discriminant:.6g})"
        )

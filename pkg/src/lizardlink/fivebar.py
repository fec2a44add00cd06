"""Closed-form position analysis of a planar five-bar loop.

Loop layout (all angles absolute, measured from the local x-axis)::

    g1 --l2--> p2 --l3--> pc <--l4-- p5 <--l5-- g2
     \\________________l1 (theta1)_______________/

with ``g1`` at the origin, ``g2 = polar(l1, theta1)``, and closure
``R2 + R3 - R4 - R5 - R1 = 0``.  The passive angles come from two
tangent-of-half-angle quadratics::

    theta4: A t^2 + B t + C = 0       theta3: D t^2 - E t + F = 0

``Branch.ELBOW_UP`` places the coupler joint to the left of the directed line
p2 -> p5.  It is the branch picked by the roots ``(-B - sqrt(B^2 - 4AC)) / 2A``
and ``(E - sqrt(E^2 - 4DF)) / 2D``; ELBOW_DOWN takes the other signs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from lizardlink.errors import DegenerateConfigurationError, InvalidInputError, UnreachableError
from lizardlink.geom import ORIGIN, Angle, Vec2, normalize_angle, polar

CLOSURE_TOL = 1e-9
# relative tolerance for "zero" leading coefficients and discriminants
ZERO_REL_TOL = 1e-12


class Branch(enum.Enum):
    ELBOW_UP = "up"
    ELBOW_DOWN = "down"

    @classmethod
    def parse(cls, text: str) -> Branch:
        key = text.strip().lower()
        aliases = {"up": cls.ELBOW_UP, "elbowup": cls.ELBOW_UP, "elbow_up": cls.ELBOW_UP,
                   "down": cls.ELBOW_DOWN, "elbowdown": cls.ELBOW_DOWN, "elbow_down": cls.ELBOW_DOWN}
        try:
            return aliases[key]
        except KeyError:
            raise InvalidInputError(f"unknown branch {text!r} (expected 'up' or 'down')") from None

    @property
    def sign(self) -> float:
        """Sign applied to the square root of the discriminant for this branch."""
        return -1.0 if self is Branch.ELBOW_UP else 1.0


@dataclass(frozen=True, slots=True)
class FiveBarGeometry:
    l1: float
    l2: float
    l3: float
    l4: float
    l5: float
    theta1: Angle = 0.0

    def __post_init__(self) -> None:
        for name in ("l1", "l2", "l3", "l4", "l5"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidInputError(f"{name} must be a positive finite length, got {value!r}")
        object.__setattr__(self, "theta1", normalize_angle(self.theta1))

    @property
    def lengths(self) -> tuple[float, float, float, float, float]:
        return (self.l1, self.l2, self.l3, self.l4, self.l5)

    def scaled_couplers(self, factor: float) -> FiveBarGeometry:
        return FiveBarGeometry(self.l1, self.l2, self.l3 * factor, self.l4 * factor, self.l5, self.theta1)


@dataclass(frozen=True, slots=True)
class DrivenInput:
    theta2: Angle
    theta5: Angle

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta2", normalize_angle(self.theta2))
        object.__setattr__(self, "theta5", normalize_angle(self.theta5))

    @classmethod
    def from_degrees(cls, theta2_deg: float, theta5_deg: float) -> DrivenInput:
        return cls(math.radians(theta2_deg), math.radians(theta5_deg))


@dataclass(frozen=True, slots=True)
class LoopSolution:
    theta3: Angle
    theta4: Angle
    branch: Branch
    residual: float
    discriminant: float = 0.0
    tangent: bool = False


@dataclass(frozen=True, slots=True)
class LoopPose:
    g1: Vec2
    g2: Vec2
    p2: Vec2
    p5: Vec2
    p_couple: Vec2

    def joints(self) -> tuple[Vec2, Vec2, Vec2, Vec2, Vec2]:
        """The five joints in chain order g1, p2, pc, p5, g2."""
        return (self.g1, self.p2, self.p_couple, self.p5, self.g2)

    def links(self) -> dict[str, tuple[Vec2, Vec2]]:
        """Moving links as (start, end) pairs, keyed by link name."""
        return {
            "crank_a": (self.g1, self.p2),
            "coupler_a": (self.p2, self.p_couple),
            "coupler_b": (self.p5, self.p_couple),
            "crank_b": (self.g2, self.p5),
        }

    def transformed(self, frame) -> LoopPose:
        return LoopPose(*(frame.apply(p) for p in (self.g1, self.g2, self.p2, self.p5, self.p_couple)))

    def as_dict(self) -> dict[str, list[float]]:
        return {
            "g1": self.g1.as_list(),
            "p2": self.p2.as_list(),
            "p_couple": self.p_couple.as_list(),
            "p5": self.p5.as_list(),
            "g2": self.g2.as_list(),
        }


@dataclass(frozen=True, slots=True)
class _Coefficients:
    k1: float
    k2: float
    k3: float
    k4: float
    a: float
    b: float
    c: float
    d: float
    e: float
    f: float


def coefficients(geom: FiveBarGeometry, inp: DrivenInput) -> _Coefficients:
    """K1..K4 and the quadratic coefficients A..F for one driven input.

    ``(K2, K1)`` is the vector p5 - p2 between crank tips; ``(K4, K3)`` is its
    negation.  The ground-link terms carry theta1 so that a rotated ground link
    closes too.
    """
    l1, l2, l3, l4, l5 = geom.lengths
    s2, c2 = math.sin(inp.theta2), math.cos(inp.theta2)
    s5, c5 = math.sin(inp.theta5), math.cos(inp.theta5)
    s1, c1 = math.sin(geom.theta1), math.cos(geom.theta1)

    k1 = l5 * s5 - l2 * s2 + l1 * s1
    k2 = l5 * c5 - l2 * c2 + l1 * c1
    k3 = -l5 * s5 + l2 * s2 - l1 * s1
    k4 = -l5 * c5 + l2 * c2 - l1 * c1

    a = (l4 * l4 - 2 * k2 * l4 - l3 * l3 + k2 * k2 + k1 * k1) / 2
    b = 2 * k1 * l4
    c = (l4 * l4 + 2 * k2 * l4 - l3 * l3 + k2 * k2 + k1 * k1) / 2
    d = (l4 * l4 - l3 * l3 + 2 * k4 * l3 - k4 * k4 - k3 * k3) / 2
    e = 2 * k3 * l3
    f = (l4 * l4 - l3 * l3 - 2 * k4 * l3 - k4 * k4 - k3 * k3) / 2
    return _Coefficients(k1, k2, k3, k4, a, b, c, d, e, f)


def _discriminant(b: float, a: float, c: float) -> tuple[float, float]:
    """Return ``b^2 - 4ac`` and the magnitude scale it was computed from."""
    bb = b * b
    ac4 = 4 * a * c
    return bb - ac4, max(bb, abs(ac4))


def _half_angle_root(a: float, b: float, c: float, disc: float, sign: float) -> float:
    """Root ``(-b + sign*sqrt(disc)) / 2a`` of ``a t^2 + b t + c``, computed stably."""
    root_disc = math.sqrt(disc)
    if b >= 0:
        q = -(b + root_disc) / 2
        # q/a carries the minus sign, c/q the plus sign
        if sign < 0:
            return q / a
        return c / q if q != 0.0 else (-b + root_disc) / (2 * a)
    q = (-b + root_disc) / 2
    if sign > 0:
        return q / a
    return c / q if q != 0.0 else (-b - root_disc) / (2 * a)


def _is_zero(value: float, *others: float) -> bool:
    scale = max(abs(value), *(abs(o) for o in others))
    return scale == 0.0 or abs(value) < ZERO_REL_TOL * scale


def closure_residual(geom: FiveBarGeometry, inp: DrivenInput, theta3: Angle, theta4: Angle) -> float:
    """Norm of ``R2 + R3 - R4 - R5 - R1`` for the given passive angles."""
    l1, l2, l3, l4, l5 = geom.lengths
    x = (l2 * math.cos(inp.theta2) + l3 * math.cos(theta3) - l4 * math.cos(theta4)
         - l5 * math.cos(inp.theta5) - l1 * math.cos(geom.theta1))
    y = (l2 * math.sin(inp.theta2) + l3 * math.sin(theta3) - l4 * math.sin(theta4)
         - l5 * math.sin(inp.theta5) - l1 * math.sin(geom.theta1))
    return math.hypot(x, y)


def _fallback_angles(geom: FiveBarGeometry, co: _Coefficients, branch: Branch) -> tuple[float, float]:
    """atan2/acos circle-intersection form, used where a half-angle root is at pi."""
    l3, l4 = geom.l3, geom.l4
    dist = math.hypot(co.k1, co.k2)
    psi = math.atan2(co.k1, co.k2)  # direction p2 -> p5
    cos_beta = (l3 * l3 + dist * dist - l4 * l4) / (2 * l3 * dist)
    cos_gamma = (l4 * l4 + dist * dist - l3 * l3) / (2 * l4 * dist)
    beta = math.acos(min(1.0, max(-1.0, cos_beta)))
    gamma = math.acos(min(1.0, max(-1.0, cos_gamma)))
    if branch is Branch.ELBOW_UP:
        return psi + beta, psi + math.pi - gamma
    return psi - beta, psi + math.pi + gamma


def _solve(geom: FiveBarGeometry, inp: DrivenInput, branch: Branch, tol: float) -> LoopSolution:
    co = coefficients(geom, inp)
    disc4, scale4 = _discriminant(co.b, co.a, co.c)
    disc3, _ = _discriminant(co.e, co.d, co.f)
    tangent = abs(disc4) <= ZERO_REL_TOL * scale4

    if disc4 < 0.0:
        if disc4 < -ZERO_REL_TOL * scale4:
            raise UnreachableError(disc4)
        disc4 = 0.0
    if disc3 < 0.0:
        disc3 = 0.0

    dist = math.hypot(co.k1, co.k2)
    if dist <= ZERO_REL_TOL * max(geom.l3, geom.l4):
        raise DegenerateConfigurationError(
            "crank tips coincide; coupler joint position is undetermined"
        )

    if _is_zero(co.a, co.b, co.c) or _is_zero(co.d, co.e, co.f):
        theta3, theta4 = _fallback_angles(geom, co, branch)
    else:
        t4 = _half_angle_root(co.a, co.b, co.c, disc4, branch.sign)
        # theta3 quadratic is D t^2 - E t + F, i.e. b = -E
        t3 = _half_angle_root(co.d, -co.e, co.f, disc3, branch.sign)
        theta4 = 2 * math.atan(t4)
        theta3 = 2 * math.atan(t3)

    theta3 = normalize_angle(theta3)
    theta4 = normalize_angle(theta4)
    residual = closure_residual(geom, inp, theta3, theta4)
    if residual > tol:
        raise UnreachableError(
            disc4,
            f"closure residual {residual:.3g} exceeds tolerance {tol:.3g} "
            f"(ill-conditioned near-tangent pose, discriminant={disc4:.6g})",
        )
    return LoopSolution(theta3, theta4, branch, residual, disc4, tangent)


def solve_passive(
    geom: FiveBarGeometry,
    inp: DrivenInput,
    branch: Branch = Branch.ELBOW_UP,
    tol: float = CLOSURE_TOL,
) -> LoopSolution:
    """Solve the passive angles theta3, theta4 of one loop on the given branch.

    Raises:
        UnreachableError: the coupler circles around p2 and p5 do not meet.
        DegenerateConfigurationError: p2 and p5 coincide and l3 == l4.
    """
    return _solve(geom, inp, branch, tol)


def solve_both_branches(
    geom: FiveBarGeometry, inp: DrivenInput, tol: float = CLOSURE_TOL
) -> list[LoopSolution]:
    """Every real assembly of the loop: two, one at tangency, none when unreachable."""
    try:
        up = _solve(geom, inp, Branch.ELBOW_UP, tol)
    except (UnreachableError, DegenerateConfigurationError):
        return []
    if up.tangent:
        return [up]
    return [up, _solve(geom, inp, Branch.ELBOW_DOWN, tol)]


def forward_pose(geom: FiveBarGeometry, inp: DrivenInput, sol: LoopSolution) -> LoopPose:
    """Joint coordinates in the loop's local frame (ground pivot A at the origin)."""
    g1 = ORIGIN
    g2 = g1 + polar(geom.l1, geom.theta1)
    p2 = g1 + polar(geom.l2, inp.theta2)
    p5 = g2 + polar(geom.l5, inp.theta5)
    p_couple = p2 + polar(geom.l3, sol.theta3)
    return LoopPose(g1=g1, g2=g2, p2=p2, p5=p5, p_couple=p_couple)

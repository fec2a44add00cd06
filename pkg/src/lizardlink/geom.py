"""Planar vector and angle primitives.

Angles are plain floats in radians. ``normalize_angle`` maps them into the
half-open interval (-pi, pi]; degrees only appear at the config/CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from lizardlink.errors import InvalidInputError

TWO_PI = 2.0 * math.pi

Angle = float


def normalize_angle(raw: float) -> Angle:
    """Return ``raw`` wrapped into (-pi, pi]."""
    if not math.isfinite(raw):
        raise InvalidInputError(f"angle must be finite, got {raw!r}")
    wrapped = math.remainder(raw, TWO_PI)
    if wrapped <= -math.pi:
        wrapped += TWO_PI
    return wrapped


def deg(radians: float) -> float:
    return math.degrees(radians)


def rad(degrees: float) -> Angle:
    """Convert a degree value from an external interface into a normalized angle."""
    return normalize_angle(math.radians(degrees))


@dataclass(frozen=True, slots=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInputError(f"vector components must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def cross(self, other: Vec2) -> float:
        """z-component of the 3D cross product; positive when ``other`` is to the left."""
        return self.x * other.y - self.y * other.x

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def angle(self) -> Angle:
        return normalize_angle(math.atan2(self.y, self.x))

    def rotated(self, angle: Angle) -> Vec2:
        c, s = math.cos(angle), math.sin(angle)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)

    def perp(self) -> Vec2:
        """Rotate by +90 degrees (the left-hand normal)."""
        return Vec2(-self.y, self.x)

    def as_list(self) -> list[float]:
        return [self.x, self.y]


ORIGIN = Vec2(0.0, 0.0)


def polar(length: float, angle: Angle) -> Vec2:
    """Vector of magnitude ``length`` pointing along ``angle``."""
    if not length >= 0.0:
        raise InvalidInputError(f"length must be non-negative, got {length!r}")
    return Vec2(length * math.cos(angle), length * math.sin(angle))


def lerp(a: Vec2, b: Vec2, fraction: float) -> Vec2:
    return Vec2(a.x + (b.x - a.x) * fraction, a.y + (b.y - a.y) * fraction)


@dataclass(frozen=True, slots=True)
class Frame:
    """Rigid placement of a loop's local frame in the world frame."""

    origin: Vec2 = ORIGIN
    rotation: Angle = 0.0

    def apply(self, p: Vec2) -> Vec2:
        return self.origin + p.rotated(self.rotation)

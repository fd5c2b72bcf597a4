"""Exact planar lattice geometry: rationals, lattice vectors, cones and fans.

Everything here is exact.  Scalars are `fractions.Fraction`, directions are
integer vectors, and all cone/fan predicates are decided with integer cross
products.  Fans are rank-2 only: rays are kept sorted counterclockwise
starting from the most clockwise ray at or above the positive x-axis, and
every two-dimensional cone is spanned by a pair of adjacent rays.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

Rational = Fraction

__all__ = [
    "Rational",
    "LatticeVector",
    "QuadrantPoint",
    "Cone",
    "Fan",
    "FanReport",
    "GeometryError",
    "StructuralInvalid",
    "PointOutsideSupport",
    "RayNotInterior",
    "TargetNotInFan",
    "primitive",
    "locate",
    "stellar_subdivide",
    "validate_fan",
    "complete_fan",
    "fan_from_cones",
    "fan_to_text",
    "fan_from_text",
    "rational_str",
    "parse_rational",
]


class GeometryError(ValueError):
    """Base class for exact-geometry input errors."""


class StructuralInvalid(GeometryError):
    """A fan violates its structural invariants (overlapping cones, bad rays)."""


class PointOutsideSupport(GeometryError):
    """A located point lies outside the union of the fan's cones."""


class RayNotInterior(GeometryError):
    """A subdivision ray does not lie strictly inside the target cone."""


class TargetNotInFan(GeometryError):
    """The cone passed to a subdivision is not a cone of the fan."""


_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse `N` or `N/D` into an exact rational; decimals are rejected."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not an exact rational literal: {text!r}")
    return Fraction(text)


def rational_str(value: Fraction) -> str:
    """Serialize a rational as the canonical exact string `num/den`."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class LatticeVector:
    """An integer vector in the plane; used for ray and contact directions."""

    x: int
    y: int

    def __post_init__(self) -> None:
        if not isinstance(self.x, int) or not isinstance(self.y, int):
            raise GeometryError(f"lattice vector needs integer entries, got {self!r}")

    def __iter__(self) -> Iterator[int]:
        yield self.x
        yield self.y

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.x, -self.y)

    def scale(self, k: int) -> "LatticeVector":
        return LatticeVector(k * self.x, k * self.y)

    def cross(self, other: "LatticeVector") -> int:
        return self.x * other.y - self.y * other.x

    def dot(self, other: "LatticeVector") -> int:
        return self.x * other.x + self.y * other.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_primitive(self) -> bool:
        return math.gcd(self.x, self.y) == 1

    def swapped(self) -> "LatticeVector":
        return LatticeVector(self.y, self.x)


ZERO_VECTOR = LatticeVector(0, 0)


def primitive(v: LatticeVector) -> tuple[LatticeVector, int]:
    """Split an integer vector into primitive direction and multiplicity.

    Returns `(direction, k)` with `v = k * direction`, `k >= 0`, and
    `direction` primitive (or zero exactly when `v` is zero).
    """
    g = math.gcd(v.x, v.y)
    if g == 0:
        return ZERO_VECTOR, 0
    return LatticeVector(v.x // g, v.y // g), g


def _ccw_sorted(rays: Iterable[LatticeVector]) -> tuple[LatticeVector, ...]:
    # Counterclockwise order over [0, 2pi) starting from (1, 0), decided
    # exactly: split into half planes, compare within a half by cross product.
    def half(v: LatticeVector) -> int:
        return 0 if (v.y > 0 or (v.y == 0 and v.x > 0)) else 1

    def cmp(u: LatticeVector, v: LatticeVector) -> int:
        hu, hv = half(u), half(v)
        if hu != hv:
            return -1 if hu < hv else 1
        c = u.cross(v)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return tuple(sorted(rays, key=functools.cmp_to_key(cmp)))


@dataclass(frozen=True)
class QuadrantPoint:
    """A point of the closed quadrant [0, oo)^2 with exact coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.x < 0 or self.y < 0:
            raise GeometryError(f"point {self.x}, {self.y} leaves the quadrant")

    def __iter__(self) -> Iterator[Fraction]:
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Cone:
    """A strongly convex rational cone spanned by 0, 1 or 2 primitive rays.

    Two-dimensional cones list their generators counterclockwise.
    """

    generators: tuple[LatticeVector, ...]

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(gens) > 2:
            raise StructuralInvalid("only simplicial planar cones are supported")
        for g in gens:
            if g.is_zero() or not g.is_primitive():
                raise StructuralInvalid(f"cone generator {g} must be primitive")
        if len(gens) == 2 and gens[0].cross(gens[1]) <= 0:
            raise StructuralInvalid(
                f"cone generators {gens[0]}, {gens[1]} must be independent and counterclockwise"
            )

    @property
    def dim(self) -> int:
        return len(self.generators)

    def determinant(self) -> int:
        if self.dim != 2:
            return 0
        return self.generators[0].cross(self.generators[1])

    def _coordinates(self, px, py) -> tuple[Fraction, Fraction]:
        u, v = self.generators
        det = u.cross(v)
        s = Fraction(px * v.y - py * v.x, det)
        t = Fraction(u.x * py - u.y * px, det)
        return s, t

    def contains(self, px, py) -> bool:
        px, py = Fraction(px), Fraction(py)
        if self.dim == 0:
            return px == 0 and py == 0
        if self.dim == 1:
            g = self.generators[0]
            return g.x * py == g.y * px and (px * g.x + py * g.y) >= 0
        s, t = self._coordinates(px, py)
        return s >= 0 and t >= 0

    def interior_contains(self, px, py) -> bool:
        """Membership in the relative interior."""
        px, py = Fraction(px), Fraction(py)
        if self.dim == 0:
            return px == 0 and py == 0
        if self.dim == 1:
            g = self.generators[0]
            return g.x * py == g.y * px and (px * g.x + py * g.y) > 0
        s, t = self._coordinates(px, py)
        return s > 0 and t > 0


ZERO_CONE = Cone(())


@dataclass(frozen=True)
class FanReport:
    smooth: bool
    complete: bool


@dataclass(frozen=True)
class Fan:
    """A rational polyhedral fan in the plane.

    `cones` holds every cone of the fan: the zero cone, one ray cone per
    ray, and the two-dimensional cones.  Construction normalizes ordering;
    use :func:`fan_from_cones` to build from the maximal cones alone.
    """

    rays: tuple[LatticeVector, ...]
    cones: tuple[Cone, ...]

    def __post_init__(self) -> None:
        rays = _ccw_sorted(self.rays)
        if len(set(rays)) != len(rays):
            raise StructuralInvalid("duplicate rays")
        for r in rays:
            if not r.is_primitive():
                raise StructuralInvalid(f"ray {r} is not primitive")
        cones2 = sorted(
            (c for c in self.cones if c.dim == 2),
            key=lambda c: rays.index(c.generators[0]) if c.generators[0] in rays else -1,
        )
        normalized = (ZERO_CONE,) + tuple(Cone((r,)) for r in rays) + tuple(cones2)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "cones", normalized)

    @property
    def cones2d(self) -> tuple[Cone, ...]:
        return tuple(c for c in self.cones if c.dim == 2)

    def validate_structure(self) -> None:
        """Raise :class:`StructuralInvalid` unless the fan is a genuine fan."""
        index = {r: i for i, r in enumerate(self.rays)}
        for cone in self.cones2d:
            u, v = cone.generators
            if u not in index or v not in index:
                raise StructuralInvalid(f"cone generator of {cone} missing from ray list")
            # Generators must be angularly adjacent: no third ray strictly inside.
            for r in self.rays:
                if r not in (u, v) and cone.interior_contains(r.x, r.y):
                    raise StructuralInvalid(f"ray {r} lies inside cone {cone}")
        seen = set()
        for cone in self.cones2d:
            if cone.generators in seen:
                raise StructuralInvalid(f"duplicate cone {cone}")
            seen.add(cone.generators)
        # Overlap: distinct 2D cones may only share boundary rays.
        cones = self.cones2d
        for i in range(len(cones)):
            for j in range(i + 1, len(cones)):
                u, v = cones[i].generators
                a, b = cones[j].generators
                mid_i = u + v
                mid_j = a + b
                if cones[j].interior_contains(mid_i.x, mid_i.y) or cones[i].interior_contains(
                    mid_j.x, mid_j.y
                ):
                    raise StructuralInvalid(f"cones {cones[i]} and {cones[j]} overlap")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return self.rays == other.rays and set(self.cones) == set(other.cones)

    def __hash__(self) -> int:
        return hash((self.rays, frozenset(self.cones)))


def fan_from_cones(cones: Iterable[Cone]) -> Fan:
    """Assemble a fan from its maximal cones, collecting rays and faces."""
    cones = list(cones)
    rays: list[LatticeVector] = []
    for cone in cones:
        for g in cone.generators:
            if g not in rays:
                rays.append(g)
    return Fan(rays=tuple(rays), cones=tuple(c for c in cones if c.dim == 2))


def _normalize_point(p) -> tuple[Fraction, Fraction]:
    if isinstance(p, QuadrantPoint):
        return p.x, p.y
    x, y = p
    return Fraction(x), Fraction(y)


def locate(fan: Fan, p) -> Cone:
    """Find the unique smallest cone whose relative interior contains `p`.

    The origin locates to the zero cone, ray points to their ray cone, and
    everything else to a two-dimensional cone.  Raises
    :class:`PointOutsideSupport` when `p` misses the fan's support.
    """
    px, py = _normalize_point(p)
    if px == 0 and py == 0:
        return ZERO_CONE
    # Scale to an integer direction once so that all tests below are integer.
    den = px.denominator * py.denominator // math.gcd(px.denominator, py.denominator)
    ix, iy = int(px * den), int(py * den)
    for r in fan.rays:
        if r.x * iy == r.y * ix and (ix * r.x + iy * r.y) > 0:
            return Cone((r,))
    for cone in fan.cones2d:
        u, v = cone.generators
        det = u.cross(v)
        s = ix * v.y - iy * v.x
        t = u.x * iy - u.y * ix
        if det < 0:
            s, t = -s, -t
        if s > 0 and t > 0:
            return cone
    raise PointOutsideSupport(f"point ({px}, {py}) lies outside the fan support")


def stellar_subdivide(fan: Fan, target: Cone, ray: LatticeVector) -> Fan:
    """Insert `ray` into the 2D cone `target`, splitting it in two.

    This is the fan operation matching the blowup of a toric surface at the
    fixed point of `target`.  The ray must be primitive and strictly
    interior to the target cone.
    """
    if target.dim != 2 or target not in fan.cones:
        raise TargetNotInFan(f"{target} is not a 2D cone of the fan")
    if not ray.is_primitive():
        raise RayNotInterior(f"subdivision ray {ray} must be primitive")
    if not target.interior_contains(Fraction(ray.x), Fraction(ray.y)):
        raise RayNotInterior(f"ray {ray} is not interior to {target}")
    u, v = target.generators
    new_cones = [c for c in fan.cones2d if c != target]
    new_cones.extend([Cone((u, ray)), Cone((ray, v))])
    return Fan(rays=fan.rays + (ray,), cones=tuple(new_cones))


def validate_fan(fan: Fan) -> FanReport:
    """Report smoothness and completeness of a structurally valid fan."""
    fan.validate_structure()
    smooth = all(abs(c.determinant()) == 1 for c in fan.cones2d)
    rays = fan.rays
    complete = len(rays) >= 3
    if complete:
        cone_set = {c.generators for c in fan.cones2d}
        for i, r in enumerate(rays):
            nxt = rays[(i + 1) % len(rays)]
            if r.cross(nxt) <= 0 or (r, nxt) not in cone_set:
                complete = False
                break
    return FanReport(smooth=smooth, complete=complete)


def complete_fan(fan: Fan) -> Fan:
    """Close a quadrant-supported fan with the down and left rays.

    Adds rays (-1, 0) and (0, -1) together with the three closing cones, so
    the result is a complete fan describing the ambient toric surface.
    """
    down, left = LatticeVector(0, -1), LatticeVector(-1, 0)
    first, last = fan.rays[0], fan.rays[-1]
    if first != LatticeVector(1, 0) or last != LatticeVector(0, 1):
        raise StructuralInvalid("completion expects a fan supported on the quadrant")
    cones = list(fan.cones2d)
    cones.append(Cone((last, left)))
    cones.append(Cone((left, down)))
    cones.append(Cone((down, first)))
    return Fan(rays=fan.rays + (left, down), cones=tuple(cones))


def fan_to_text(fan: Fan) -> str:
    """Serialize a fan to the line-based text format (`ray a b`, `cone ...`)."""
    lines = [f"ray {r.x} {r.y}" for r in fan.rays]
    for cone in fan.cones2d:
        u, v = cone.generators
        lines.append(f"cone {u.x} {u.y} {v.x} {v.y}")
    return "\n".join(lines) + "\n"


def fan_from_text(text: str) -> Fan:
    rays: list[LatticeVector] = []
    cones: list[Cone] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "ray" and len(parts) == 3:
                rays.append(LatticeVector(int(parts[1]), int(parts[2])))
            elif parts[0] == "cone" and len(parts) == 5:
                u = LatticeVector(int(parts[1]), int(parts[2]))
                v = LatticeVector(int(parts[3]), int(parts[4]))
                cones.append(Cone((u, v)))
            else:
                raise ValueError
        except ValueError as exc:
            raise StructuralInvalid(f"bad fan line {lineno}: {raw!r}") from exc
    return Fan(rays=tuple(rays), cones=tuple(cones))

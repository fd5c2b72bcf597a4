"""Tropical curves in the quadrant and tropicalization of degenerating lines.

Conventions.  The family of lines is

    f_n([w1, w2]) = [x_n * w1,  y_n * (w1 + w2),  w2],

with coefficient valuations x_n ~ c1 * n^(-p) and y_n ~ c2 * n^(-q).  The
image line satisfies  y_n z1 - x_n z2 + x_n y_n z3 = 0, so in min-plus
coordinates (v(n^(-t)) = t) its tropicalization is the corner locus of

    min(q + X,  p + Y,  p + q)

intersected with the quadrant [0, oo)^2.  Traveling right means moving
toward the first coordinate divisor, traveling up toward the second.
Curves are stored with exact rational positions, integral edge directions,
and segments and rays kept separate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    GeometryError,
    LatticeVector,
    QuadrantPoint,
    parse_rational,
    rational_str,
)

__all__ = [
    "NegativeExponent",
    "CurveInvalid",
    "LineFamily",
    "Vertex",
    "Segment",
    "Ray",
    "TropicalCurve",
    "VertexBalance",
    "BalanceReport",
    "tropicalize_line",
    "corner_locus_oracle",
    "reflect",
    "validate_curve",
    "curves_equal",
    "min_squared_distance",
    "curve_to_json",
    "curve_from_json",
]


class NegativeExponent(ValueError):
    """A valuation exponent was negative."""


class CurveInvalid(ValueError):
    """A tropical curve violates its structural invariants."""


@dataclass(frozen=True)
class LineFamily:
    """A degenerating family of lines, recorded through its valuations.

    `p` and `q` are the decay exponents of the two coefficients; the
    complex coefficients `c1`, `c2` only matter to the floating-point
    amoeba module.
    """

    p: Fraction
    q: Fraction
    c1: complex = 1.0 + 0.0j
    c2: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.p < 0 or self.q < 0:
            raise NegativeExponent(f"exponents must be >= 0, got ({self.p}, {self.q})")
        if self.c1 == 0 or self.c2 == 0:
            raise ValueError("coefficients must be nonzero")

    @classmethod
    def of(cls, p, q, c1: complex = 1.0, c2: complex = 1.0) -> "LineFamily":
        return cls(Fraction(p), Fraction(q), complex(c1), complex(c2))


@dataclass(frozen=True)
class Vertex:
    id: str
    position: QuadrantPoint


@dataclass(frozen=True)
class Segment:
    """A bounded edge: position(head) - position(tail) = length * contact."""

    tail: str
    head: str
    contact: LatticeVector
    length: Fraction


@dataclass(frozen=True)
class Ray:
    """An unbounded edge leaving `base` in direction `contact` forever."""

    base: str
    contact: LatticeVector


@dataclass(frozen=True)
class TropicalCurve:
    vertices: tuple[Vertex, ...]
    segments: tuple[Segment, ...]
    rays: tuple[Ray, ...]

    def position(self, vertex_id: str) -> QuadrantPoint:
        for v in self.vertices:
            if v.id == vertex_id:
                return v.position
        raise CurveInvalid(f"unknown vertex id {vertex_id!r}")

    def validate(self) -> None:
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise CurveInvalid("duplicate vertex ids")
        pos = {v.id: v.position for v in self.vertices}
        for s in self.segments:
            if s.tail not in pos or s.head not in pos:
                raise CurveInvalid(f"segment {s} references a missing vertex")
            if s.contact.is_zero():
                raise CurveInvalid("segment with zero contact vector")
            if s.length <= 0:
                raise CurveInvalid("segment with non-positive length")
            dx = pos[s.head].x - pos[s.tail].x
            dy = pos[s.head].y - pos[s.tail].y
            if dx != s.length * s.contact.x or dy != s.length * s.contact.y:
                raise CurveInvalid(
                    f"segment identity broken on {s.tail}->{s.head}: "
                    f"delta ({dx}, {dy}) != {s.length} * {tuple(s.contact)}"
                )
        for r in self.rays:
            if r.base not in pos:
                raise CurveInvalid(f"ray {r} references a missing vertex")
            if r.contact.is_zero():
                raise CurveInvalid("ray with zero contact vector")
            if r.contact.x < 0 or r.contact.y < 0:
                raise CurveInvalid(f"ray {r} eventually leaves the quadrant")
        if len(self.vertices) > 1:
            parent = {i: i for i in ids}

            def find(a: str) -> str:
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for s in self.segments:
                parent[find(s.tail)] = find(s.head)
            roots = {find(i) for i in ids}
            if len(roots) != 1:
                raise CurveInvalid("curve is not connected")

    def canonical(self):
        """Geometry-only normal form, independent of vertex ids and order."""
        pos = {v.id: (v.position.x, v.position.y) for v in self.vertices}
        verts = tuple(sorted(pos.values()))
        segs = []
        for s in self.segments:
            a, b = pos[s.tail], pos[s.head]
            if a <= b:
                segs.append((a, b, (s.contact.x, s.contact.y), s.length))
            else:
                segs.append((b, a, (-s.contact.x, -s.contact.y), s.length))
        rays = tuple(sorted((pos[r.base], (r.contact.x, r.contact.y)) for r in self.rays))
        return verts, tuple(sorted(segs)), rays


def curves_equal(a: TropicalCurve, b: TropicalCurve) -> bool:
    """Exact geometric equality, ignoring vertex naming."""
    return a.canonical() == b.canonical()


def tropicalize_line(family: LineFamily) -> TropicalCurve:
    """Corner locus of min(q + X, p + Y, p + q) inside the quadrant.

    Case analysis on the exponents (p, q):

    * both positive, p != q: a boundary vertex at (p - q, 0) (or its mirror)
      joined by a (1, 1) segment to the vertex (p, q), which emits rays
      (1, 0) and (0, 1);
    * p == q > 0: same picture with the boundary vertex at the origin;
    * exactly one positive: a single vertex on the corresponding axis with
      rays (1, 0) and (0, 1);
    * p == q == 0: a single vertex at the origin with the two axis rays.
    """
    p, q = family.p, family.q
    e10, e01, e11 = LatticeVector(1, 0), LatticeVector(0, 1), LatticeVector(1, 1)
    if p == 0 and q == 0:
        v0 = Vertex("v0", QuadrantPoint(Fraction(0), Fraction(0)))
        return TropicalCurve((v0,), (), (Ray("v0", e10), Ray("v0", e01)))
    if q == 0:
        v0 = Vertex("v0", QuadrantPoint(p, Fraction(0)))
        return TropicalCurve((v0,), (), (Ray("v0", e10), Ray("v0", e01)))
    if p == 0:
        v0 = Vertex("v0", QuadrantPoint(Fraction(0), q))
        return TropicalCurve((v0,), (), (Ray("v0", e10), Ray("v0", e01)))
    if p >= q:
        base = QuadrantPoint(p - q, Fraction(0))
        length = q
    else:
        base = QuadrantPoint(Fraction(0), q - p)
        length = p
    v0 = Vertex("v0", base)
    v1 = Vertex("v1", QuadrantPoint(p, q))
    seg = Segment("v0", "v1", e11, length)
    return TropicalCurve((v0, v1), (seg,), (Ray("v1", e10), Ray("v1", e01)))


def corner_locus_oracle(
    family: LineFamily,
    window: Fraction,
    step: Fraction,
    tol: Fraction,
) -> set[tuple[Fraction, Fraction]]:
    """Brute-force corner locus scan over the grid of spacing `step`.

    Evaluates the three tropical terms at every grid point of
    [0, window]^2 and keeps the points where the two smallest terms are
    within `tol` of each other.  Entirely independent of the case analysis
    in :func:`tropicalize_line`; everything is computed in a common integer
    unit so the scan is exact and fast.
    """
    window, step, tol = Fraction(window), Fraction(step), Fraction(tol)
    if window <= 0 or step <= 0 or tol < 0:
        raise ValueError("window and step must be positive, tol non-negative")
    p, q = family.p, family.q
    dens = [step.denominator, p.denominator, q.denominator, tol.denominator]
    unit = 1
    for d in dens:
        unit = unit * d // math.gcd(unit, d)
    pi, qi = int(p * unit), int(q * unit)
    si = int(step * unit)
    ti = int(tol * unit)
    count = int(window / step)
    hits: set[tuple[Fraction, Fraction]] = set()
    const = pi + qi
    for i in range(count + 1):
        t1 = qi + i * si
        for j in range(count + 1):
            t2 = pi + j * si
            a, b, c = sorted((t1, t2, const))
            if b - a <= ti:
                hits.add((Fraction(i * si, unit), Fraction(j * si, unit)))
    return hits


def reflect(curve: TropicalCurve) -> TropicalCurve:
    """Swap the two coordinates of every position and contact vector."""
    vertices = tuple(
        Vertex(v.id, QuadrantPoint(v.position.y, v.position.x)) for v in curve.vertices
    )
    segments = tuple(
        Segment(s.tail, s.head, s.contact.swapped(), s.length) for s in curve.segments
    )
    rays = tuple(Ray(r.base, r.contact.swapped()) for r in curve.rays)
    return TropicalCurve(vertices, segments, rays)


@dataclass(frozen=True)
class VertexBalance:
    vertex: str
    contact_sum: LatticeVector
    stratum: str  # "interior" | "x-axis" | "y-axis" | "origin"
    balanced: bool


@dataclass(frozen=True)
class BalanceReport:
    entries: tuple[VertexBalance, ...]

    def entry(self, vertex_id: str) -> VertexBalance:
        for e in self.entries:
            if e.vertex == vertex_id:
                return e
        raise KeyError(vertex_id)


def validate_curve(curve: TropicalCurve) -> BalanceReport:
    """Check structure and report the outgoing contact sum per vertex.

    Vertices on the open boundary strata of the quadrant are routinely
    unbalanced (an edge has left through the boundary); they are reported,
    never rejected.
    """
    curve.validate()
    sums = {v.id: LatticeVector(0, 0) for v in curve.vertices}
    for s in curve.segments:
        sums[s.tail] = sums[s.tail] + s.contact
        sums[s.head] = sums[s.head] - s.contact
    for r in curve.rays:
        sums[r.base] = sums[r.base] + r.contact
    entries = []
    for v in curve.vertices:
        x, y = v.position.x, v.position.y
        if x > 0 and y > 0:
            stratum = "interior"
        elif x > 0:
            stratum = "x-axis"
        elif y > 0:
            stratum = "y-axis"
        else:
            stratum = "origin"
        total = sums[v.id]
        entries.append(VertexBalance(v.id, total, stratum, total.is_zero()))
    return BalanceReport(tuple(entries))


def min_squared_distance(curve: TropicalCurve, point) -> Fraction:
    """Exact squared Euclidean distance from a point to the curve."""
    px, py = Fraction(point[0]), Fraction(point[1])
    pos = {v.id: v.position for v in curve.vertices}
    best: Fraction | None = None

    def consider(d2: Fraction) -> None:
        nonlocal best
        if best is None or d2 < best:
            best = d2

    for v in curve.vertices:
        consider((px - v.position.x) ** 2 + (py - v.position.y) ** 2)

    def edge_distance(ax, ay, dx, dy, tmax: Fraction | None) -> Fraction:
        # Project onto a*(t) = (ax + t dx, ay + t dy), clamp t to [0, tmax].
        num = (px - ax) * dx + (py - ay) * dy
        den = dx * dx + dy * dy
        t = num / den
        if t < 0:
            t = Fraction(0)
        if tmax is not None and t > tmax:
            t = tmax
        qx, qy = ax + t * dx, ay + t * dy
        return (px - qx) ** 2 + (py - qy) ** 2

    for s in curve.segments:
        a = pos[s.tail]
        consider(
            edge_distance(a.x, a.y, Fraction(s.contact.x), Fraction(s.contact.y), s.length)
        )
    for r in curve.rays:
        a = pos[r.base]
        consider(edge_distance(a.x, a.y, Fraction(r.contact.x), Fraction(r.contact.y), None))
    if best is None:
        raise CurveInvalid("curve has no vertices")
    return best


def curve_to_json(curve: TropicalCurve) -> dict:
    return {
        "vertices": [
            {"id": v.id, "x": rational_str(v.position.x), "y": rational_str(v.position.y)}
            for v in curve.vertices
        ],
        "segments": [
            {
                "tail": s.tail,
                "head": s.head,
                "contact": [s.contact.x, s.contact.y],
                "length": rational_str(s.length),
            }
            for s in curve.segments
        ],
        "rays": [
            {"base": r.base, "contact": [r.contact.x, r.contact.y]} for r in curve.rays
        ],
    }


def curve_from_json(data: dict) -> TropicalCurve:
    try:
        vertices = tuple(
            Vertex(v["id"], QuadrantPoint(parse_rational(v["x"]), parse_rational(v["y"])))
            for v in data["vertices"]
        )
        segments = tuple(
            Segment(
                s["tail"],
                s["head"],
                LatticeVector(int(s["contact"][0]), int(s["contact"][1])),
                parse_rational(s["length"]),
            )
            for s in data["segments"]
        )
        rays = tuple(
            Ray(r["base"], LatticeVector(int(r["contact"][0]), int(r["contact"][1])))
            for r in data["rays"]
        )
    except (KeyError, TypeError, GeometryError) as exc:
        raise CurveInvalid(f"malformed tropical curve document: {exc}") from exc
    curve = TropicalCurve(vertices, segments, rays)
    curve.validate()
    return curve

"""Deterministic SVG pictures: tropical curves with level lines, and fans.

Blue strokes for the curve, gray dashed lines for the level subdivision,
black arrows for fan rays.  Rays are truncated at the window boundary.
Every emitted byte is a fixed function of the input, so outputs are golden
testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .building import LevelStructure
from .geometry import Fan, LatticeVector
from .tropical import TropicalCurve, validate_curve

__all__ = ["RenderSpec", "render_tropical", "render_fan"]

_MARGIN = 40.0
_CURVE_COLOR = "#1f4fd8"
_LEVEL_COLOR = "#888888"
_AXIS_COLOR = "#222222"
_CONE_FILLS = ("#f2e8d5", "#dbe9f2")


@dataclass(frozen=True)
class RenderSpec:
    window: Fraction = Fraction(6)
    scale: Fraction = Fraction(60)
    show_levels: bool = True
    labels: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "window", Fraction(self.window))
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.window <= 0 or self.scale <= 0:
            raise ValueError("window and scale must be positive")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Canvas:
    def __init__(self, spec: RenderSpec):
        self.spec = spec
        side = float(spec.window * spec.scale)
        self.size = side + 2 * _MARGIN
        self.lines: list[str] = []
        self.lines.append(
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_fmt(self.size)}" height="{_fmt(self.size)}" '
            f'viewBox="0 0 {_fmt(self.size)} {_fmt(self.size)}">'
        )

    def map(self, x, y) -> tuple[float, float]:
        s = float(self.spec.scale)
        return (_MARGIN + float(x) * s, self.size - _MARGIN - float(y) * s)

    def line(self, a, b, cls: str, style: str) -> None:
        (x1, y1), (x2, y2) = self.map(*a), self.map(*b)
        self.lines.append(
            f'<line class="{cls}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
            f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" {style}/>'
        )

    def polygon(self, pts, fill: str) -> None:
        mapped = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (self.map(*p) for p in pts))
        self.lines.append(f'<polygon class="cone" points="{mapped}" fill="{fill}"/>')

    def text(self, pos, content: str) -> None:
        x, y = self.map(*pos)
        self.lines.append(
            f'<text class="label" x="{_fmt(x + 4)}" y="{_fmt(y - 4)}" '
            f'font-size="11" font-family="sans-serif">{content}</text>'
        )

    def axes(self) -> None:
        w = self.spec.window
        style = f'stroke="{_AXIS_COLOR}" stroke-width="1.5"'
        self.line((0, 0), (w, 0), "axis", style)
        self.line((0, 0), (0, w), "axis", style)

    def finish(self) -> str:
        self.lines.append("</svg>")
        return "\n".join(self.lines) + "\n"


def _clip_ray(x0: float, y0: float, dx: float, dy: float, window: float):
    """Largest t >= 0 with the ray still inside [0, window]^2, or None."""
    limits = []
    if dx > 0:
        limits.append((window - x0) / dx)
    elif dx < 0:
        limits.append(-x0 / dx)
    if dy > 0:
        limits.append((window - y0) / dy)
    elif dy < 0:
        limits.append(-y0 / dy)
    if not limits:
        return None
    t = min(limits)
    return t if t > 0 else None


def _boundary_shadows(curve: TropicalCurve):
    """Clipped continuations of unbalanced boundary vertices.

    A boundary vertex with outgoing contact sum d has lost an edge of
    direction -d through the quadrant boundary; its image runs along the
    boundary toward the origin.  These strokes are part of the pictures of
    limit curves.
    """
    report = validate_curve(curve)
    pos = {v.id: (float(v.position.x), float(v.position.y)) for v in curve.vertices}
    shadows = []
    for entry in report.entries:
        if entry.balanced or entry.stratum == "interior":
            continue
        x, y = pos[entry.vertex]
        dx, dy = float(-entry.contact_sum.x), float(-entry.contact_sum.y)
        # March the clamped path max(0, position + t*d) piece by piece; a
        # coordinate already at 0 is pinned there.
        cx, cy = x, y
        if cx == 0 and dx < 0:
            dx = 0.0
        if cy == 0 and dy < 0:
            dy = 0.0
        while dx < 0 or dy < 0:
            candidates = []
            if dx < 0:
                candidates.append(-cx / dx)
            if dy < 0:
                candidates.append(-cy / dy)
            t = min(candidates)
            nx, ny = cx + t * dx, cy + t * dy
            if t > 0:
                shadows.append(((cx, cy), (nx, ny)))
            if dx < 0 and abs(nx) < 1e-12:
                nx, dx = 0.0, 0.0
            if dy < 0 and abs(ny) < 1e-12:
                ny, dy = 0.0, 0.0
            cx, cy = nx, ny
    return shadows


def render_tropical(
    curve: TropicalCurve,
    levels: LevelStructure | None = None,
    spec: RenderSpec | None = None,
) -> str:
    """SVG picture of a curve, with dashed level lines when `levels` given."""
    spec = spec or RenderSpec()
    canvas = _Canvas(spec)
    window = float(spec.window)
    if levels is not None and spec.show_levels:
        style = f'stroke="{_LEVEL_COLOR}" stroke-width="1" stroke-dasharray="6 4"'
        for value in levels.values:
            v = float(value)
            if v <= window:
                canvas.line((value, 0), (value, spec.window), "level", style)
        for value in levels.values:
            v = float(value)
            if v <= window:
                canvas.line((0, value), (spec.window, value), "level", style)
    canvas.axes()
    style = f'stroke="{_CURVE_COLOR}" stroke-width="2.5" stroke-linecap="round"'
    pos = {v.id: (float(v.position.x), float(v.position.y)) for v in curve.vertices}
    for s in curve.segments:
        canvas.line(pos[s.tail], pos[s.head], "curve", style)
    for r in curve.rays:
        x0, y0 = pos[r.base]
        t = _clip_ray(x0, y0, float(r.contact.x), float(r.contact.y), window)
        if t is not None:
            canvas.line(
                (x0, y0),
                (x0 + t * r.contact.x, y0 + t * r.contact.y),
                "curve",
                style,
            )
    for a, b in _boundary_shadows(curve):
        if a != b:
            canvas.line(a, b, "curve", style)
    if spec.labels:
        for v in curve.vertices:
            canvas.text(pos[v.id], f"({v.position.x},{v.position.y})")
    return canvas.finish()


def render_fan(fan: Fan, spec: RenderSpec | None = None) -> str:
    """SVG picture of a fan: shaded cones and arrowed rays from the origin."""
    spec = spec or RenderSpec()
    canvas = _Canvas(spec)
    window = float(spec.window)

    def boundary_point(v: LatticeVector):
        t = _clip_ray(0.0, 0.0, float(v.x), float(v.y), window)
        # Rays of a fan may leave the positive window; clip on the full box.
        m = max(abs(v.x), abs(v.y))
        t2 = window / m if m else 0.0
        t = t2 if t is None else min(t, t2)
        return (t * v.x, t * v.y)

    for i, cone in enumerate(fan.cones2d):
        u, v = cone.generators
        pu, pv = boundary_point(u), boundary_point(v)
        mid = u + v
        pm = boundary_point(mid)
        canvas.polygon([(0, 0), pu, pm, pv], _CONE_FILLS[i % 2])
    canvas.axes()
    style = f'stroke="{_AXIS_COLOR}" stroke-width="2"'
    for r in fan.rays:
        tip = boundary_point(r)
        canvas.line((0, 0), tip, "ray", style)
        # Small arrowhead, drawn as two barbs.
        tx, ty = canvas.map(*tip)
        ox, oy = canvas.map(0, 0)
        dx, dy = tx - ox, ty - oy
        norm = (dx * dx + dy * dy) ** 0.5 or 1.0
        ux, uy = dx / norm, dy / norm
        px, py = -uy, ux
        for sgn in (1.0, -1.0):
            bx = tx - 10 * ux + sgn * 5 * px
            by = ty - 10 * uy + sgn * 5 * py
            canvas.lines.append(
                f'<line class="arrow" x1="{_fmt(tx)}" y1="{_fmt(ty)}" '
                f'x2="{_fmt(bx)}" y2="{_fmt(by)}" {style}/>'
            )
        if spec.labels:
            canvas.text(tip, f"({r.x},{r.y})")
    return canvas.finish()

"""Floating-point check that rescaled log images of lines approach their
tropical limits.

A point [z1 : z2 : z3] with nonzero coordinates maps to

    ( max(0, -log|z1/z3| / log n),  max(0, -log|z2/z3| / log n) ),

so coordinates in a compact region collapse to 0 and depth toward a
coordinate divisor becomes distance along an axis.  Sampling the line
family over the Riemann sphere and measuring the Hausdorff distance of the
clipped cloud to the tropical curve exhibits the C / log n decay that
stands in for the Gromov-Hausdorff statement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .tropical import LineFamily, TropicalCurve

__all__ = [
    "ZeroCoordinate",
    "EmptySample",
    "AmoebaSample",
    "ConvergenceReport",
    "MAX_BASE",
    "log_image",
    "sample_amoeba",
    "hausdorff",
    "discretize_curve",
    "convergence_report",
]

# Beyond this base, n^(-p) products start brushing the double-precision
# floor for the exponents this module is used with.
MAX_BASE = 1.0e8

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class ZeroCoordinate(ValueError):
    """log_image needs all three homogeneous coordinates nonzero."""


class EmptySample(ValueError):
    """No sample points survive inside the requested window."""


@dataclass(frozen=True)
class AmoebaSample:
    """Clipped log-image point cloud of one member of the family."""

    n: float
    points: np.ndarray  # shape (k, 2), clipped to the quadrant
    domain: np.ndarray  # shape (k,), the sampled affine chart points w


@dataclass(frozen=True)
class ConvergenceReport:
    entries: tuple[tuple[float, float], ...]  # (n, hausdorff distance)
    decay_constant: float
    r_squared: float
    monotone: bool


def log_image(point, n: float) -> tuple[float, float]:
    """Rescaled log-modulus image of a projective point, clipped to the quadrant."""
    z1, z2, z3 = (complex(z) for z in point)
    if z1 == 0 or z2 == 0 or z3 == 0:
        raise ZeroCoordinate("log image needs nonzero homogeneous coordinates")
    if not n > 1:
        raise ValueError("rescaling base must exceed 1")
    log_n = math.log(n)
    x = -math.log(abs(z1 / z3)) / log_n
    y = -math.log(abs(z2 / z3)) / log_n
    return (max(0.0, x), max(0.0, y))


def sample_amoeba(
    family: LineFamily, n: float, count: int, depth: float | None = None
) -> AmoebaSample:
    """Deterministic point cloud of the log image of one line of the family.

    Domain points cover the thrice-marked sphere through its three ends
    (the zeros of the coordinates w1, w1 + w2, w2), at depths spread
    log-uniformly in base n with golden-angle rotation: w = n^(-t) e^(i a)
    near 0, w = -1 + n^(-t) e^(i a) near -1, and w = n^(t) e^(i a) near
    infinity.  The infinity end is capped at depth min(p, q), where its
    image meets the quadrant boundary; the others reach `depth` (default
    p + q + 2).  The scheme is a fixed function of its arguments, so equal
    inputs give bit-identical clouds.
    """
    if not n > 1:
        raise ValueError("rescaling base must exceed 1")
    if n > MAX_BASE:
        raise ValueError(f"rescaling base {n} exceeds the supported {MAX_BASE:g}")
    if count < 1:
        raise ValueError("need at least one sample point")
    p, q = float(family.p), float(family.q)
    max_depth = depth if depth is not None else p + q + 2.0
    caps = (max_depth, max_depth, min(p, q))
    x_n = family.c1 * n ** (-p)
    y_n = family.c2 * n ** (-q)

    per_end = [len(range(e, count, 3)) for e in range(3)]
    ws: list[complex] = []
    points: list[tuple[float, float]] = []
    for k in range(count):
        end = k % 3
        idx = k // 3
        t = caps[end] * (idx + 0.5) / per_end[end] if per_end[end] else 0.0
        angle = 2.0 * math.pi * ((k * _GOLDEN) % 1.0)
        unit = complex(math.cos(angle), math.sin(angle))
        if end == 0:
            w = n ** (-t) * unit
        elif end == 1:
            w = -1.0 + n ** (-t) * unit
        else:
            w = n**t * unit
        z1 = x_n * w
        z2 = y_n * (w + 1.0)
        z3 = 1.0 + 0.0j
        if z1 == 0 or z2 == 0:
            continue
        ws.append(w)
        points.append(log_image((z1, z2, z3), n))
    return AmoebaSample(
        n=float(n),
        points=np.array(points, dtype=np.float64).reshape(-1, 2),
        domain=np.array(ws, dtype=np.complex128),
    )


def discretize_curve(
    curve: TropicalCurve, window: float, step: float | None = None
) -> np.ndarray:
    """Dense polyline point set of a curve, truncated to [0, window]^2."""
    if step is None:
        step = window / 512.0
    pos = {v.id: (float(v.position.x), float(v.position.y)) for v in curve.vertices}
    points: list[tuple[float, float]] = list(pos.values())

    def walk(x0, y0, dx, dy, tmax):
        k = max(1, int(math.ceil(tmax / step * math.hypot(dx, dy))))
        for i in range(1, k + 1):
            t = tmax * i / k
            points.append((x0 + t * dx, y0 + t * dy))

    for s in curve.segments:
        x0, y0 = pos[s.tail]
        walk(x0, y0, float(s.contact.x), float(s.contact.y), float(s.length))
    for r in curve.rays:
        x0, y0 = pos[r.base]
        dx, dy = float(r.contact.x), float(r.contact.y)
        # Longest parameter keeping the ray inside the window.
        limits = []
        if dx > 0:
            limits.append((window - x0) / dx)
        if dy > 0:
            limits.append((window - y0) / dy)
        tmax = min(limits) if limits else 0.0
        if tmax > 0:
            walk(x0, y0, dx, dy, tmax)
    pts = np.array(points, dtype=np.float64)
    inside = (pts[:, 0] <= window + 1e-12) & (pts[:, 1] <= window + 1e-12)
    return pts[inside]


def hausdorff(sample: AmoebaSample, curve: TropicalCurve, window: float) -> float:
    """Symmetric Hausdorff distance between cloud and curve inside the window."""
    pts = sample.points
    keep = (pts[:, 0] <= window) & (pts[:, 1] <= window)
    cloud = pts[keep]
    if cloud.size == 0:
        raise EmptySample("no sample points inside the window")
    poly = discretize_curve(curve, window)
    if poly.size == 0:
        raise EmptySample("curve has no points inside the window")
    distances = cdist(cloud, poly)
    cloud_to_curve = float(distances.min(axis=1).max())
    curve_to_cloud = float(distances.min(axis=0).max())
    return max(cloud_to_curve, curve_to_cloud)


def convergence_report(
    family: LineFamily,
    bases,
    count: int,
    window: float,
) -> ConvergenceReport:
    """Hausdorff distances over a ladder of bases, with a 1/log n fit."""
    from .tropical import tropicalize_line

    curve = tropicalize_line(family)
    entries = []
    for n in bases:
        sample = sample_amoeba(family, float(n), count)
        entries.append((float(n), hausdorff(sample, curve, window)))
    xs = np.array([1.0 / math.log(n) for n, _ in entries])
    ys = np.array([d for _, d in entries])
    slope, intercept = np.polyfit(xs, ys, 1)
    fitted = slope * xs + intercept
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    monotone = all(b < a * 1.1 for (_, a), (_, b) in zip(entries, entries[1:]))
    if len(entries) >= 2:
        monotone = monotone and entries[-1][1] < entries[0][1]
    return ConvergenceReport(
        entries=tuple(entries),
        decay_constant=float(slope),
        r_squared=float(r_squared),
        monotone=monotone,
    )

"""Moduli fans of tropical line limits and the classification of limit types.

The moduli space of the tropical curves is the quadrant, parameterized by
the position (p, q) of the central vertex and divided along the diagonal
ray: that is the coarse ("exploded") fan.  Tracking level coincidences
refines it by four smooth blowups into the fine fan with rays

    (1,0), (2,1), (3,2), (1,1), (2,3), (1,2), (0,1),

whose cones cut the quadrant into 14 limit types: the interior point, 7
rays and 6 open two-dimensional cones.  Interior type curves have a rigid
matching system; ray types a one-parameter kernel; cone types a
two-parameter kernel.  Kernel dimension and post-quotient complex dimension
always sum to 2, the dimension of the space of lines.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    Cone,
    Fan,
    LatticeVector,
    ZERO_CONE,
    complete_fan,
    fan_from_cones,
    locate,
    stellar_subdivide,
)

__all__ = [
    "LimitType",
    "TypeRow",
    "NotARefinement",
    "NotSmoothlyFactorizable",
    "exploded_fan",
    "ionel_fan",
    "classify",
    "blowup_sequence",
    "type_table",
]


class NotARefinement(ValueError):
    """The fine fan does not refine the coarse fan."""


class NotSmoothlyFactorizable(ValueError):
    """No sequence of smooth stellar subdivisions connects the two fans."""


@dataclass(frozen=True)
class LimitType:
    kind: str  # "INTERIOR" | "RAY" | "CONE"
    cone: Cone
    label: str
    mirror: str


@dataclass(frozen=True)
class TypeRow:
    label: str
    kind: str
    conditions: str
    kernel_dim: int
    quotient_dim: int
    mirror: str


@functools.lru_cache(maxsize=None)
def exploded_fan(complete: bool = False) -> Fan:
    """The coarse moduli fan: the quadrant divided along the diagonal."""
    e10, e11, e01 = LatticeVector(1, 0), LatticeVector(1, 1), LatticeVector(0, 1)
    fan = fan_from_cones([Cone((e10, e11)), Cone((e11, e01))])
    return complete_fan(fan) if complete else fan


@functools.lru_cache(maxsize=None)
def ionel_fan(complete: bool = False) -> Fan:
    """The fine moduli fan: four stellar subdivisions of the coarse fan.

    Two blowups at the corners adjacent to the diagonal, then two more at
    the corners the first pair created.
    """
    fan = exploded_fan()
    e10, e11, e01 = LatticeVector(1, 0), LatticeVector(1, 1), LatticeVector(0, 1)
    fan = stellar_subdivide(fan, Cone((e10, e11)), LatticeVector(2, 1))
    fan = stellar_subdivide(fan, Cone((e11, e01)), LatticeVector(1, 2))
    fan = stellar_subdivide(fan, Cone((LatticeVector(2, 1), e11)), LatticeVector(3, 2))
    fan = stellar_subdivide(fan, Cone((e11, LatticeVector(1, 2))), LatticeVector(2, 3))
    return complete_fan(fan) if complete else fan


def _cone_label(cone: Cone) -> str:
    if cone.dim == 0:
        return "INTERIOR"
    if cone.dim == 1:
        g = cone.generators[0]
        return f"RAY({g.x},{g.y})"
    u, v = cone.generators
    # List the generator nearer the diagonal first, matching how the cones
    # read off the sequence conditions (the diagonal side is the reference).
    if u.x >= u.y and v.x >= v.y:
        u, v = v, u
    return f"CONE(({u.x},{u.y}),({v.x},{v.y}))"


def _mirror_cone(cone: Cone) -> Cone:
    if cone.dim == 0:
        return ZERO_CONE
    gens = tuple(g.swapped() for g in cone.generators)
    if len(gens) == 2 and gens[0].cross(gens[1]) < 0:
        gens = (gens[1], gens[0])
    return Cone(gens)


def _limit_type(cone: Cone) -> LimitType:
    kind = {0: "INTERIOR", 1: "RAY", 2: "CONE"}[cone.dim]
    return LimitType(
        kind=kind,
        cone=cone,
        label=_cone_label(cone),
        mirror=_cone_label(_mirror_cone(cone)),
    )


def classify(p, q) -> LimitType:
    """Limit type of the line family with valuations (p, q), p, q >= 0."""
    p, q = Fraction(p), Fraction(q)
    if p < 0 or q < 0:
        raise ValueError(f"valuations must be non-negative, got ({p}, {q})")
    cone = locate(ionel_fan(), (p, q))
    return _limit_type(cone)


def blowup_sequence(coarse: Fan, fine: Fan) -> list[tuple[Cone, LatticeVector]]:
    """Factor a smooth refinement into rounds of stellar subdivisions.

    Each round inserts, in counterclockwise order, every missing ray that is
    the sum of the two generators of a current cone.  Raises when `fine`
    does not refine `coarse` or when some round finds no insertable ray.
    """
    _check_refinement(coarse, fine)
    steps: list[tuple[Cone, LatticeVector]] = []
    current = coarse
    missing = [r for r in fine.rays if r not in current.rays]
    while missing:
        round_steps = []
        for cone in current.cones2d:
            u, v = cone.generators
            if (u + v) in missing:
                round_steps.append((cone, u + v))
        if not round_steps:
            raise NotSmoothlyFactorizable(
                f"no missing ray of {missing} is a sum of adjacent generators"
            )
        for cone, ray in round_steps:
            current = stellar_subdivide(current, cone, ray)
            steps.append((cone, ray))
        missing = [r for r in fine.rays if r not in current.rays]
    if current != fine:
        raise NotSmoothlyFactorizable("ray set matches but cone structure differs")
    return steps


def _check_refinement(coarse: Fan, fine: Fan) -> None:
    for r in coarse.rays:
        if r not in fine.rays:
            raise NotARefinement(f"coarse ray {r} is not a ray of the fine fan")
    cone_of = {}
    for fc in fine.cones2d:
        u, v = fc.generators
        mid = u + v
        carrier = next(
            (cc for cc in coarse.cones2d if cc.contains(Fraction(mid.x), Fraction(mid.y))),
            None,
        )
        if carrier is None:
            raise NotARefinement(f"fine cone {fc} sticks out of the coarse support")
        cone_of[fc.generators] = carrier
    # Each coarse 2D cone must be tiled by its fine cones, generator to
    # generator, in counterclockwise order.
    for cc in coarse.cones2d:
        tiles = [fc for fc in fine.cones2d if cone_of[fc.generators] == cc]
        if not tiles:
            raise NotARefinement(f"coarse cone {cc} is not covered")
        tiles.sort(key=lambda fc: fine.rays.index(fc.generators[0]))
        if tiles[0].generators[0] != cc.generators[0]:
            raise NotARefinement(f"tiling of {cc} does not start at its first generator")
        for a, b in zip(tiles, tiles[1:]):
            if a.generators[1] != b.generators[0]:
                raise NotARefinement(f"gap in the tiling of {cc}")
        if tiles[-1].generators[1] != cc.generators[1]:
            raise NotARefinement(f"tiling of {cc} does not reach its second generator")


_CONDITIONS = {
    "INTERIOR": "p = 0 and q = 0",
    "RAY(1,0)": "p > 0 and q = 0",
    "RAY(0,1)": "q > 0 and p = 0",
    "CONE((2,1),(1,0))": "p > 2q and q > 0",
    "CONE((1,2),(0,1))": "q > 2p and p > 0",
    "RAY(2,1)": "p = 2q and q > 0",
    "RAY(1,2)": "q = 2p and p > 0",
    "CONE((3,2),(2,1))": "2q > p and 2p > 3q",
    "CONE((2,3),(1,2))": "2p > q and 2q > 3p",
    "RAY(3,2)": "2p = 3q and q > 0",
    "RAY(2,3)": "2q = 3p and p > 0",
    "CONE((1,1),(3,2))": "p > q and 3q > 2p",
    "CONE((1,1),(2,3))": "q > p and 3p > 2q",
    "RAY(1,1)": "p = q and p > 0",
}

_EXPECTED_DIMS = {"INTERIOR": (0, 2), "RAY": (1, 1), "CONE": (2, 0)}


def type_table() -> list[TypeRow]:
    """All 14 limit types with their expected dimensions.

    Kernel dimension of the matching system and complex dimension after the
    torus quotient; the two always sum to the dimension of the space of
    lines.
    """
    fan = ionel_fan()
    rows = []
    for cone in (ZERO_CONE,) + tuple(Cone((r,)) for r in fan.rays) + fan.cones2d:
        lt = _limit_type(cone)
        kernel_dim, quotient_dim = _EXPECTED_DIMS[lt.kind]
        rows.append(
            TypeRow(
                label=lt.label,
                kind=lt.kind,
                conditions=_CONDITIONS[lt.label],
                kernel_dim=kernel_dim,
                quotient_dim=quotient_dim,
                mirror=lt.mirror,
            )
        )
    return rows

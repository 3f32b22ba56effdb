"""Seeded samplers for the verification suites.

Each sample index gets its own generator, so reports do not depend on how
many workers draw samples or in which order.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List

from stabcover.arrangement_core import Arrangement
from stabcover.chamber_graph import SkeletonGraph, random_minimal_gallery
from stabcover.cover_geometry import (
    ComplexPoint,
    GaussianRational,
    check_off_hyperplanes,
)
from stabcover.deligne_groupoid import GroupoidWord, compose_words, word_from_path
from stabcover.errors import OnHyperplaneError


def rng_for(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def random_rational(rng: random.Random, window: int, *, positive: bool = False) -> Fraction:
    low = 1 if positive else -window
    return Fraction(rng.randint(low, window), rng.randint(1, window))


def random_gaussian(rng: random.Random, window: int) -> GaussianRational:
    return GaussianRational(random_rational(rng, window), random_rational(rng, window))


def random_upper(rng: random.Random, window: int) -> GaussianRational:
    """A value in H; one draw in eight lands on the negative real axis."""
    if rng.randrange(8) == 0:
        return GaussianRational(-random_rational(rng, window, positive=True), Fraction(0))
    return GaussianRational(random_rational(rng, window), random_rational(rng, window, positive=True))


def random_charge(rng: random.Random, rank: int, window: int) -> ComplexPoint:
    return tuple(random_upper(rng, window) for _ in range(rank))


def random_generic_point(rng: random.Random, arrangement: Arrangement, window: int) -> ComplexPoint:
    """Rejection-sample a point off every complexified hyperplane."""
    while True:
        z = tuple(random_gaussian(rng, window) for _ in range(arrangement.rank))
        try:
            check_off_hyperplanes(arrangement, z)
        except OnHyperplaneError:
            continue
        return z


def random_rectangle(rng: random.Random, arrangement: Arrangement, window: int) -> List[ComplexPoint]:
    """Closed axis-aligned rectangle in one coordinate line through a generic point.

    Piece transitions happen where the imaginary part crosses a real
    hyperplane, so the imaginary parts along the boundary must cross the
    real arrangement one hyperplane at a time.
    """
    while True:
        corner = random_generic_point(rng, arrangement, window)
        axis = rng.randrange(arrangement.rank)
        width = random_rational(rng, window, positive=True) * rng.choice((1, -1))
        height = random_rational(rng, window, positive=True) * rng.choice((1, -1))
        offsets = [
            GaussianRational(Fraction(0), Fraction(0)),
            GaussianRational(width, Fraction(0)),
            GaussianRational(width, height),
            GaussianRational(Fraction(0), height),
        ]
        if _boundary_hits_hyperplane(arrangement, corner, axis, width, height):
            continue
        if not crosses_walls_singly(arrangement, corner, axis, height):
            continue
        vertices = [
            tuple(c + offset if k == axis else c for k, c in enumerate(corner))
            for offset in offsets
        ]
        return vertices + [vertices[0]]


def crosses_walls_singly(
    arrangement: Arrangement, corner: ComplexPoint, axis: int, height: Fraction
) -> bool:
    """Whether im(corner) + t * height * e_axis, 0 <= t <= 1, avoids every real flat of codimension 2.

    Both ends must lie off every real hyperplane and no two hyperplanes may
    be crossed at the same parameter.
    """
    crossings = set()
    for hyperplane in arrangement.hyperplanes:
        level = sum((a * c.im for a, c in zip(hyperplane.normal, corner)), Fraction(0))
        slope = hyperplane.normal[axis] * height
        if level == 0 or level + slope == 0:
            return False
        if slope == 0:
            continue
        t = -level / slope
        if 0 < t < 1:
            if t in crossings:
                return False
            crossings.add(t)
    return True


def _boundary_hits_hyperplane(
    arrangement: Arrangement,
    corner: ComplexPoint,
    axis: int,
    width: Fraction,
    height: Fraction,
) -> bool:
    """Whether some hyperplane meets the rectangle's boundary in the moving coordinate."""
    low_x, high_x = sorted((Fraction(0), width))
    low_y, high_y = sorted((Fraction(0), height))
    for hyperplane in arrangement.hyperplanes:
        slope = hyperplane.normal[axis]
        if slope == 0:
            continue
        re = -sum((a * c.re for a, c in zip(hyperplane.normal, corner)), Fraction(0)) / slope
        im = -sum((a * c.im for a, c in zip(hyperplane.normal, corner)), Fraction(0)) / slope
        on_horizontal = low_x <= re <= high_x and im in (Fraction(0), height)
        on_vertical = low_y <= im <= high_y and re in (Fraction(0), width)
        if on_horizontal or on_vertical:
            return True
    return False


def random_word(
    graph: SkeletonGraph, rng: random.Random, max_length: int, source: int = 0
) -> GroupoidWord:
    """Random walk that crosses each wall forwards or along the opposite arrow backwards."""
    current, letters = source, []
    for _ in range(rng.randint(0, max_length)):
        arrow = rng.choice(graph.outgoing(current))
        if rng.random() < 0.5:
            letters.append((arrow.id, 1))
        else:
            letters.append((graph.reverse(arrow.id).id, -1))
        current = arrow.target
    return GroupoidWord(tuple(letters), source, current)


def random_loop_word(
    graph: SkeletonGraph, rng: random.Random, max_length: int, source: int = 0
) -> GroupoidWord:
    walk = random_word(graph, rng, max_length, source)
    closing = random_minimal_gallery(graph, walk.target, source, rng)
    return compose_words(walk, word_from_path(closing))

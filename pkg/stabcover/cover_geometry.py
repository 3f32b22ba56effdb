"""Pieces of the complexified complement and a combinatorial model of the stability space.

The piece of a chamber L is the image of H^n under its frame, where H is
the semi-closed upper half-plane. A stability point is a groupoid word
ending at C+ together with a charge in H^n; projecting it applies the frame
of the word's source chamber.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import sympy

from stabcover.arrangement_core import Arrangement, Chamber, Vector, build_coxeter_arrangement
from stabcover.chamber_graph import SkeletonGraph
from stabcover.deligne_groupoid import GroupoidWord, compose_words, free_reduce, make_word
from stabcover.errors import (
    CoverageError,
    DisjointnessError,
    OnHyperplaneError,
    RefinementNeededError,
    StabCoverValidationError,
)
from stabcover.ktheory_tracking import KMatrix, f_along_path, phi_of_chamber

DEFAULT_REFINEMENT_DEPTH = 32


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re: int | Fraction, im: int | Fraction = 0) -> "GaussianRational":
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def scale(self, factor: int | Fraction) -> "GaussianRational":
        return GaussianRational(self.re * factor, self.im * factor)

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


ComplexPoint = Tuple[GaussianRational, ...]


@dataclass(frozen=True)
class StabilityPoint:
    """``base`` runs from the chamber of the heart to C+; ``charge`` is in H^n."""

    base: GroupoidWord
    charge: ComplexPoint


@dataclass(frozen=True)
class WeylGroup:
    cartan: Tuple[Vector, ...]
    generators: Tuple[sympy.ImmutableMatrix, ...]
    elements: Tuple[sympy.ImmutableMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------
# Pieces
# ---------------------------------------------------------------------------


def in_H(value: GaussianRational) -> bool:
    """Membership in {r e^{i pi t} : r > 0, 0 < t <= 1}."""
    return value.im > 0 or (value.im == 0 and value.re < 0)


def point(*coords: Tuple[int | Fraction, int | Fraction]) -> ComplexPoint:
    """Build a complex point from (re, im) pairs."""
    return tuple(GaussianRational.of(re, im) for re, im in coords)


def apply_matrix(rows: Sequence[Sequence[int]], z: ComplexPoint) -> ComplexPoint:
    return tuple(
        GaussianRational(
            sum((entry * c.re for entry, c in zip(row, z)), Fraction(0)),
            sum((entry * c.im for entry, c in zip(row, z)), Fraction(0)),
        )
        for row in rows
    )


@lru_cache(maxsize=4096)
def _inverse_rows(chamber: Chamber) -> Tuple[Vector, ...]:
    inverse = phi_of_chamber(chamber).entries.inv()
    return tuple(tuple(int(value) for value in inverse.row(i)) for i in range(inverse.rows))


def _frame_rows(chamber: Chamber) -> Tuple[Vector, ...]:
    return tuple(zip(*chamber.rays))


def _integral(z: ComplexPoint) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Real and imaginary parts scaled by a positive common denominator."""
    denominator = lcm(*(c.re.denominator for c in z), *(c.im.denominator for c in z))
    return (
        tuple(int(c.re * denominator) for c in z),
        tuple(int(c.im * denominator) for c in z),
    )


def _in_piece_integral(real: Sequence[int], imag: Sequence[int], chamber: Chamber) -> bool:
    for row in _inverse_rows(chamber):
        im = sum(entry * value for entry, value in zip(row, imag))
        if im > 0:
            continue
        if im < 0 or sum(entry * value for entry, value in zip(row, real)) >= 0:
            return False
    return True


def in_piece(z: ComplexPoint, chamber: Chamber) -> bool:
    """Whether every coordinate of phi_L^-1 z lies in H."""
    real, imag = _integral(z)
    return _in_piece_integral(real, imag, chamber)


def check_off_hyperplanes(arrangement: Arrangement, z: ComplexPoint) -> None:
    real, imag = _integral(z)
    for index, hyperplane in enumerate(arrangement.hyperplanes):
        normal = hyperplane.normal
        if sum(a * b for a, b in zip(normal, real)) == 0 and sum(
            a * b for a, b in zip(normal, imag)
        ) == 0:
            raise OnHyperplaneError(
                f"Point lies on complexified hyperplane {index} {list(normal)}", hyperplane=index
            )


def locate(graph: SkeletonGraph, z: ComplexPoint, *, exhaustive: bool = True) -> Chamber:
    """The chamber whose piece contains ``z``."""
    if len(z) != graph.rank:
        raise StabCoverValidationError(f"Point must have {graph.rank} coordinates", field="point")
    check_off_hyperplanes(graph.arrangement, z)
    real, imag = _integral(z)
    found: List[Chamber] = []
    for chamber in graph.chambers:
        if _in_piece_integral(real, imag, chamber):
            found.append(chamber)
            if not exhaustive:
                break
    if not found:
        raise CoverageError(
            "Point off every complexified hyperplane lies in no piece",
            {"point": [str(c) for c in z]},
        )
    if len(found) > 1:
        raise DisjointnessError(
            f"Point lies in {len(found)} pieces",
            {"point": [str(c) for c in z], "chambers": [c.id for c in found]},
        )
    return found[0]


# ---------------------------------------------------------------------------
# Stability points and the covering map
# ---------------------------------------------------------------------------


def make_stability_point(
    graph: SkeletonGraph, base: GroupoidWord, charge: Sequence[GaussianRational]
) -> StabilityPoint:
    if base.target != 0:
        raise StabCoverValidationError("Base word must end at C+ (chamber 0)", field="base")
    if len(charge) != graph.rank:
        raise StabCoverValidationError(f"Charge must have {graph.rank} entries", field="charge")
    for index, value in enumerate(charge):
        if not in_H(value):
            raise StabCoverValidationError(
                f"Charge coordinate {index} = {value} is not in the upper half-plane",
                field="charge",
            )
    return StabilityPoint(base, tuple(charge))


def project_p(graph: SkeletonGraph, sigma: StabilityPoint) -> ComplexPoint:
    return apply_matrix(_frame_rows(graph.chamber(sigma.base.source)), sigma.charge)


def deck_act(graph: SkeletonGraph, loop: GroupoidWord, sigma: StabilityPoint) -> StabilityPoint:
    """(Z, alpha) -> (Z, loop o alpha)."""
    if loop.source != 0 or loop.target != 0:
        raise StabCoverValidationError("Deck transformations need a loop at C+", field="loop")
    return StabilityPoint(compose_words(sigma.base, loop), sigma.charge)


def same_fiber(
    graph: SkeletonGraph, first: StabilityPoint, second: StabilityPoint
) -> Optional[GroupoidWord]:
    """The loop gamma with first = gamma . second, when both project to one point."""
    if project_p(graph, first) != project_p(graph, second):
        return None
    return free_reduce(compose_words(second.base.inverse(), first.base))


# ---------------------------------------------------------------------------
# Monodromy of loops in the complement
# ---------------------------------------------------------------------------

_Interval = Tuple[Fraction, bool, Fraction, bool]


def _interpolate(p: ComplexPoint, q: ComplexPoint, t: Fraction) -> ComplexPoint:
    return tuple(a + (b - a).scale(t) for a, b in zip(p, q))


def _meet(first: _Interval | None, second: _Interval | None) -> _Interval | None:
    if first is None or second is None:
        return None
    lo, lo_closed = max((first[0], first[1]), (second[0], second[1]), key=lambda e: (e[0], not e[1]))
    hi, hi_closed = min((first[2], first[3]), (second[2], second[3]), key=lambda e: (e[0], e[1]))
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return (lo, lo_closed, hi, hi_closed)


def _coordinate_interval(start: GaussianRational, end: GaussianRational) -> _Interval | None:
    """Parameters t in [0, 1] with start + t (end - start) in H."""
    unit: _Interval = (Fraction(0), True, Fraction(1), True)
    alpha, beta = start.im, end.im - start.im
    if beta == 0:
        if alpha > 0:
            return unit
        if alpha < 0:
            return None
        rho, kappa = start.re, end.re - start.re
        if kappa == 0:
            return unit if rho < 0 else None
        root = -rho / kappa
        if kappa > 0:
            return _meet(unit, (Fraction(0), True, root, False))
        return _meet(unit, (root, False, Fraction(1), True))
    root = -alpha / beta
    closed = (start + (end - start).scale(root)).re < 0
    if beta > 0:
        return _meet(unit, (root, closed, Fraction(1), True))
    return _meet(unit, (Fraction(0), True, root, closed))


def _piece_interval(chamber: Chamber, p: ComplexPoint, q: ComplexPoint) -> _Interval | None:
    rows = _inverse_rows(chamber)
    wp, wq = apply_matrix(rows, p), apply_matrix(rows, q)
    interval: _Interval | None = (Fraction(0), True, Fraction(1), True)
    for start, end in zip(wp, wq):
        interval = _meet(interval, _coordinate_interval(start, end))
    return interval


def _split_point(arrangement: Arrangement, p: ComplexPoint, q: ComplexPoint) -> ComplexPoint:
    for denominator in range(2, 64):
        for numerator in range(1, denominator):
            if gcd(numerator, denominator) == 1:
                candidate = _interpolate(p, q, Fraction(numerator, denominator))
                try:
                    check_off_hyperplanes(arrangement, candidate)
                except OnHyperplaneError:
                    continue
                return candidate
    raise RefinementNeededError("No admissible split point", segment=(p, q))


def _lift_segment(
    graph: SkeletonGraph,
    p: ComplexPoint,
    q: ComplexPoint,
    source: Chamber,
    target: Chamber,
    depth: int,
    limit: int,
) -> List[Tuple[int, int]]:
    if source.id == target.id:
        return []
    try:
        arrow = graph.arrow_between(source.id, target.id)
    except StabCoverValidationError:
        arrow = None

    if arrow is not None:
        before = _piece_interval(source, p, q)
        after = _piece_interval(target, p, q)
        if (
            before is not None
            and after is not None
            and before[0] == 0
            and after[2] == 1
            and before[2] == after[0]
            and before[3] != after[1]
        ):
            crossing = before[2]
            w = apply_matrix(_inverse_rows(source), _interpolate(p, q, crossing))[arrow.label - 1]
            if w.im == 0 and w.re == 0:
                raise OnHyperplaneError(
                    f"Segment meets complexified hyperplane {arrow.hyperplane}",
                    hyperplane=arrow.hyperplane,
                )
            if w.im == 0:
                if w.re > 0:
                    return [(arrow.id, 1)]
                return [(graph.reverse(arrow.id).id, -1)]

    if depth >= limit:
        raise RefinementNeededError(
            f"Could not resolve segment after {limit} bisections", segment=(p, q)
        )
    middle = _split_point(graph.arrangement, p, q)
    halfway = locate(graph, middle)
    return _lift_segment(graph, p, middle, source, halfway, depth + 1, limit) + _lift_segment(
        graph, middle, q, halfway, target, depth + 1, limit
    )


def monodromy(
    graph: SkeletonGraph,
    polyline: Sequence[ComplexPoint],
    base: int | None = None,
    *,
    refinement_depth: int = DEFAULT_REFINEMENT_DEPTH,
) -> Tuple[GroupoidWord, KMatrix]:
    """Word of piece transitions along a closed polyline and its K-matrix.

    Leaving H through the positive real axis of the crossed coordinate
    records the arrow out of the current chamber; leaving through the
    negative real axis records the opposite arrow walked backwards.
    """
    if not polyline:
        raise StabCoverValidationError("Polyline must have at least one vertex", field="polyline")
    if polyline[0] != polyline[-1]:
        raise StabCoverValidationError("Polyline must be closed", field="polyline")
    chambers = [locate(graph, vertex) for vertex in polyline]
    if base is not None and chambers[0].id != base:
        raise StabCoverValidationError(
            f"Polyline starts in piece {chambers[0].id}, not {base}", field="base"
        )
    letters: List[Tuple[int, int]] = []
    for index in range(len(polyline) - 1):
        letters.extend(
            _lift_segment(
                graph,
                polyline[index],
                polyline[index + 1],
                chambers[index],
                chambers[index + 1],
                0,
                refinement_depth,
            )
        )
    word = make_word(graph, letters, chambers[0].id)
    return word, f_along_path(graph, word)


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------


def weyl_group(arrangement: Arrangement | str, rank: int | None = None) -> WeylGroup:
    """Reflections x -> x - x_i c_i on coweight coordinates, closed under products.

    Takes a Coxeter arrangement, or an ADE type letter together with a rank.
    """
    if isinstance(arrangement, str):
        if rank is None:
            raise StabCoverValidationError("A root type needs a rank", field="rank")
        arrangement = build_coxeter_arrangement(arrangement, rank)
    if arrangement.cartan is None:
        raise StabCoverValidationError(
            "Weyl groups are only defined for Coxeter arrangements", field="arrangement"
        )
    rank = arrangement.rank
    generators = []
    for i, row in enumerate(arrangement.cartan):
        matrix = sympy.eye(rank)
        for j in range(rank):
            matrix[j, i] -= row[j]
        generators.append(sympy.ImmutableMatrix(matrix))

    identity = sympy.ImmutableMatrix(sympy.eye(rank))
    seen: Dict[sympy.ImmutableMatrix, None] = {identity: None}
    queue = deque([identity])
    while queue:
        element = queue.popleft()
        for generator in generators:
            product = sympy.ImmutableMatrix(generator * element)
            if product not in seen:
                seen[product] = None
                queue.append(product)
    return WeylGroup(arrangement.cartan, tuple(generators), tuple(seen))


def weyl_orbit(group: WeylGroup, z: ComplexPoint) -> FrozenSet[ComplexPoint]:
    orbit: Set[ComplexPoint] = set()
    for element in group.elements:
        rows = [[int(value) for value in element.row(i)] for i in range(element.rows)]
        orbit.add(apply_matrix(rows, z))
    return frozenset(orbit)


def quotient_fiber_size(group: WeylGroup, z: ComplexPoint) -> int:
    """Number of points over the image of ``z`` in the quotient by W."""
    return len(weyl_orbit(group, z))

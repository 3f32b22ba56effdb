"""Exact central hyperplane arrangements and their chamber fans.

Every arrangement is stored in base-chamber coordinates: the positive
orthant is a chamber (C+) whose walls are the coordinate hyperplanes, so
every normal is a nonnegative primitive integer vector and each standard
basis vector is a normal. Chambers are reached from C+ by crossing one wall
at a time; each crossing replaces exactly one ray of the ordered frame.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd, lcm
from typing import Dict, List, Sequence, Tuple

import sympy

from stabcover.errors import (
    DegenerateFlatError,
    LabelConsistencyError,
    NonEssentialArrangementError,
    SimplicialityError,
    StabCoverValidationError,
    StructureError,
    UnsupportedRootSystemError,
)

Vector = Tuple[int, ...]

DEFAULT_MAX_RANK = 4
_ADE_RANKS = {"A": lambda n: n >= 1, "D": lambda n: n >= 4, "E": lambda n: n in (6, 7, 8)}
_NAME = re.compile(r"^(?:(?P<ade>[ADE])(?P<rank>\d+)|I2\((?P<m>\d+)\)|(?P<cd4>cd4))$")


def dot(left: Sequence[int | Fraction], right: Sequence[int | Fraction]) -> int | Fraction:
    return sum(a * b for a, b in zip(left, right))


def _to_fraction(value: sympy.Expr) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def primitive(vector: Sequence[int | Fraction]) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    entries = [Fraction(x) for x in vector]
    denominator = lcm(*(entry.denominator for entry in entries))
    integers = [int(entry * denominator) for entry in entries]
    divisor = gcd(*integers)
    if divisor == 0:
        raise StabCoverValidationError("The zero vector has no primitive form", field="normals")
    return tuple(value // divisor for value in integers)


def canonical_normal(vector: Sequence[int | Fraction]) -> Vector:
    """Primitive integer vector whose first nonzero entry is positive."""
    normal = primitive(vector)
    leading = next(value for value in normal if value != 0)
    return normal if leading > 0 else tuple(-value for value in normal)


def _matrix_rank(rows: Sequence[Sequence[int]], width: int) -> int:
    if not rows:
        return 0
    return sympy.Matrix([list(row) for row in rows]).reshape(len(rows), width).rank()


@dataclass(frozen=True)
class Hyperplane:
    """A central hyperplane given by its canonical primitive normal."""

    normal: Vector

    def __post_init__(self) -> None:
        if not any(self.normal):
            raise StabCoverValidationError("Hyperplane normal must be nonzero", field="normals")
        if canonical_normal(self.normal) != self.normal:
            raise StabCoverValidationError(
                f"Normal {list(self.normal)} is not canonical", field="normals"
            )

    @classmethod
    def from_vector(cls, vector: Sequence[int | Fraction]) -> "Hyperplane":
        return cls(canonical_normal(vector))

    def evaluate(self, point: Sequence[int | Fraction]) -> int | Fraction:
        return dot(self.normal, point)


@dataclass(frozen=True)
class Arrangement:
    """A central, essential arrangement in base-chamber coordinates.

    ``basis`` holds the rays of the base chamber in the coordinates the
    arrangement was built from (the change of basis that made C+ the
    positive orthant); ``cartan`` is set for Coxeter arrangements.
    """

    rank: int
    hyperplanes: Tuple[Hyperplane, ...]
    kind: str = "custom"
    name: str = ""
    cartan: Tuple[Vector, ...] | None = None
    basis: Tuple[Vector, ...] | None = None

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise StabCoverValidationError("Rank must be positive", field="rank")
        normals = [hyperplane.normal for hyperplane in self.hyperplanes]
        if any(len(normal) != self.rank for normal in normals):
            raise StabCoverValidationError("Every normal must have length rank", field="normals")
        if len(set(normals)) != len(normals):
            raise StabCoverValidationError("Hyperplanes must be pairwise distinct", field="normals")
        unit = {tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)}
        if not unit <= set(normals) or any(value < 0 for normal in normals for value in normal):
            raise StabCoverValidationError(
                "Normals must be nonnegative and include every coordinate hyperplane; "
                "use custom_arrangement() to rebase",
                field="normals",
            )

    @property
    def normals(self) -> List[Vector]:
        return [hyperplane.normal for hyperplane in self.hyperplanes]

    def index_of(self, normal: Sequence[int]) -> int:
        return self.normals.index(canonical_normal(normal))

    def descriptor(self) -> Dict[str, object]:
        return {"name": self.name, "kind": self.kind, "rank": self.rank}


@dataclass(frozen=True)
class Chamber:
    """A chamber as a sign vector plus its propagated frame of rays.

    ``route`` lists the labels crossed by the breadth-first walk from C+.
    """

    id: int
    signs: str
    rays: Tuple[Vector, ...]
    route: Tuple[int, ...] = ()

    @property
    def sign_vector(self) -> Tuple[int, ...]:
        return tuple(1 if sign == "+" else -1 for sign in self.signs)

    def interior_point(self) -> Vector:
        """Sum of the rays, a point of the open cone."""
        return tuple(sum(column) for column in zip(*self.rays))


@dataclass(frozen=True)
class Crossing:
    """One directed wall crossing found while propagating frames."""

    source: int
    target: int
    label: int
    hyperplane: int


@dataclass(frozen=True)
class Fan:
    arrangement: Arrangement
    chambers: Tuple[Chamber, ...]
    crossings: Tuple[Crossing, ...]

    def chamber_by_signs(self, signs: str) -> Chamber:
        for chamber in self.chambers:
            if chamber.signs == signs:
                return chamber
        raise StabCoverValidationError(f"No chamber with signs {signs}", field="signs")


# ---------------------------------------------------------------------------
# Root systems
# ---------------------------------------------------------------------------


def cartan_matrix(root_type: str, rank: int) -> Tuple[Vector, ...]:
    """Cartan matrix of a simply-laced root system (Bourbaki numbering)."""
    edges: List[Tuple[int, int]]
    if root_type == "A":
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif root_type == "D":
        edges = [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    else:
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, rank - 1)]
    matrix = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        matrix[i][j] = matrix[j][i] = -1
    return tuple(tuple(row) for row in matrix)


def positive_roots(cartan: Sequence[Sequence[int]]) -> List[Vector]:
    """Positive roots in simple-root coordinates, by height then lexicographically."""
    rank = len(cartan)
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        following = set()
        for root in layer:
            for i in range(rank):
                pairing = sum(root[j] * cartan[i][j] for j in range(rank))
                if pairing == -1:
                    raised = tuple(root[j] + (j == i) for j in range(rank))
                    if raised not in roots:
                        following.add(raised)
        roots |= following
        layer = list(following)
    return sorted(roots, key=lambda root: (sum(root), tuple(-value for value in root)))


def build_coxeter_arrangement(
    root_type: str, rank: int, *, max_rank: int = DEFAULT_MAX_RANK
) -> Arrangement:
    """Positive-root hyperplanes of an ADE root system in simple-root coordinates."""
    root_type = root_type.upper()
    if root_type not in _ADE_RANKS or not _ADE_RANKS[root_type](rank):
        raise UnsupportedRootSystemError(
            f"Unsupported root system {root_type}{rank}", field="type"
        )
    if rank > max_rank:
        raise UnsupportedRootSystemError(
            f"Rank {rank} exceeds the configured ceiling {max_rank}", field="rank"
        )
    cartan = cartan_matrix(root_type, rank)
    return Arrangement(
        rank=rank,
        hyperplanes=tuple(Hyperplane(root) for root in positive_roots(cartan)),
        kind="coxeter-ADE",
        name=f"{root_type}{rank}",
        cartan=cartan,
    )


# ---------------------------------------------------------------------------
# Rebasing onto a chamber
# ---------------------------------------------------------------------------


def _generic_point(normals: Sequence[Vector], rank: int) -> Vector:
    candidate = tuple([1] * rank)
    base = 2
    while any(dot(normal, candidate) == 0 for normal in normals):
        candidate = tuple(base**power for power in range(rank))
        base += 1
    return candidate


def _extreme_rays(normals: Sequence[Vector], signs: Sequence[int], rank: int) -> List[Vector]:
    """Extreme rays of the closed cone {x : signs[m] * normals[m].x >= 0}."""
    if rank == 1:
        return [(signs[0],)]
    rays: List[Vector] = []
    for subset in combinations(range(len(normals)), rank - 1):
        block = sympy.Matrix([list(normals[m]) for m in subset])
        kernel = block.nullspace()
        if len(kernel) != 1:
            continue
        direction = primitive([_to_fraction(entry) for entry in kernel[0]])
        for oriented in (direction, tuple(-value for value in direction)):
            if oriented in rays:
                break
            if all(sign * dot(normal, oriented) >= 0 for normal, sign in zip(normals, signs)):
                rays.append(oriented)
                break
    return rays


def _simplicial_chamber_rays(normals: Sequence[Vector], rank: int) -> List[Vector] | None:
    """Rays of the first simplicial chamber found among cones cut out by ``rank`` normals.

    A cone bounded by independent normals is a chamber exactly when no other
    hyperplane takes both signs on its rays.
    """
    for subset in combinations(range(len(normals)), rank):
        block = sympy.Matrix([list(normals[m]) for m in subset])
        if block.det() == 0:
            continue
        inverse = block.inv()
        columns = [
            primitive([_to_fraction(inverse[row, column]) for row in range(rank)])
            for column in range(rank)
        ]
        for orientation in product((1, -1), repeat=rank):
            rays = [tuple(sign * value for value in column) for sign, column in zip(orientation, columns)]
            values = [[dot(normal, ray) for ray in rays] for normal in normals]
            if all(min(row) >= 0 or max(row) <= 0 for row in values):
                return rays
    return None


def _rebase(
    ambient_normals: Sequence[Vector], basis: Sequence[Vector]
) -> Tuple[List[Vector], Tuple[Vector, ...]]:
    """Restrict normals to span(basis) and move a chamber onto the positive orthant.

    Returns the normals in base-chamber coordinates, in first-occurrence
    order with duplicates merged, and the base chamber rays expressed in the
    ambient coordinates.
    """
    rank = len(basis)
    representatives: List[Vector] = []
    reduced: List[Vector] = []
    for normal in ambient_normals:
        image = tuple(dot(normal, column) for column in basis)
        if not any(image):
            continue
        canonical = canonical_normal(image)
        if canonical not in reduced:
            reduced.append(canonical)
            representatives.append(tuple(normal))

    if _matrix_rank(reduced, rank) < rank:
        raise NonEssentialArrangementError(
            "Normals do not span the ambient space", field="normals"
        )

    point = _generic_point(reduced, rank)
    signs = [1 if dot(normal, point) > 0 else -1 for normal in reduced]
    local_rays = _extreme_rays(reduced, signs, rank)
    if len(local_rays) != rank:
        found = _simplicial_chamber_rays(reduced, rank)
        if found is None:
            raise SimplicialityError(
                f"No chamber is simplicial; the chamber at {list(point)} has "
                f"{len(local_rays)} extreme rays, expected {rank}",
                sign_vector="".join("+" if sign > 0 else "-" for sign in signs),
            )
        local_rays = found
    ambient_rays = sorted(
        (
            primitive([sum(ray[k] * basis[k][j] for k in range(rank)) for j in range(len(basis[0]))])
            for ray in local_rays
        ),
        reverse=True,
    )

    rebased: List[Vector] = []
    for normal in representatives:
        image = [dot(normal, ray) for ray in ambient_rays]
        if min(image) < 0:
            image = [-value for value in image]
        candidate = primitive(image)
        if candidate not in rebased:
            rebased.append(candidate)
    return rebased, tuple(ambient_rays)


def _identity(rank: int) -> List[Vector]:
    return [tuple(int(i == j) for j in range(rank)) for i in range(rank)]


def custom_arrangement(
    normals: Sequence[Sequence[int]], *, kind: str = "custom", name: str = ""
) -> Arrangement:
    """Build an arrangement from arbitrary integer normals, rebasing if needed."""
    if not normals:
        raise StabCoverValidationError("At least one normal is required", field="normals")
    rank = len(normals[0])
    if rank < 1 or any(len(normal) != rank for normal in normals):
        raise StabCoverValidationError("All normals must share a positive length", field="normals")
    if any(not any(normal) for normal in normals):
        raise StabCoverValidationError("Normals must be nonzero", field="normals")
    rebased, rays = _rebase([tuple(normal) for normal in normals], _identity(rank))
    return Arrangement(
        rank=rank,
        hyperplanes=tuple(Hyperplane(normal) for normal in rebased),
        kind=kind,
        name=name,
        basis=rays,
    )


def rank2_arrangement(m: int, normals: Sequence[Sequence[int]] | None = None) -> Arrangement:
    """m lines through the origin of the plane.

    The default normals (1,0), (0,1), (1,1), (1,2), ..., (1,m-2) give
    unimodular frames; m = 4 is the two-curve cD4 arrangement.
    """
    if m < 2:
        raise StabCoverValidationError("A rank 2 arrangement needs m >= 2 lines", field="m")
    if normals is None:
        normals = [(1, 0), (0, 1)] + [(1, k) for k in range(1, m - 1)]
    if len(normals) != m or any(len(normal) != 2 for normal in normals):
        raise StabCoverValidationError(f"Expected {m} planar normals", field="normals")
    if len({canonical_normal(normal) for normal in normals}) != m:
        raise StabCoverValidationError("Lines must be distinct", field="normals")
    name = "cd4" if m == 4 and [tuple(n) for n in normals] == [(1, 0), (0, 1), (1, 1), (1, 2)] else f"I2({m})"
    return custom_arrangement(normals, kind="rank2", name=name)


def restrict_to_flat(arrangement: Arrangement, flat: Sequence[int]) -> Arrangement:
    """Restriction of ``arrangement`` to the intersection of the chosen hyperplanes."""
    for index in flat:
        if not 0 <= index < len(arrangement.hyperplanes):
            raise StabCoverValidationError(f"Hyperplane index {index} out of range", field="flat")
    if flat:
        block = sympy.Matrix([list(arrangement.hyperplanes[index].normal) for index in flat])
        kernel = block.nullspace()
        if not kernel:
            raise DegenerateFlatError(
                f"Hyperplanes {sorted(set(flat))} meet only in the origin", field="flat"
            )
        basis = [primitive([_to_fraction(entry) for entry in vector]) for vector in kernel]
    else:
        basis = _identity(arrangement.rank)

    rebased, rays = _rebase(arrangement.normals, basis)
    suffix = ",".join(str(index) for index in flat)
    return Arrangement(
        rank=len(basis),
        hyperplanes=tuple(Hyperplane(normal) for normal in rebased),
        kind="restriction",
        name=f"{arrangement.name}/{suffix}" if suffix else arrangement.name,
        basis=rays,
    )


def named_arrangement(name: str, *, max_rank: int = DEFAULT_MAX_RANK) -> Arrangement:
    """Resolve names such as ``cd4``, ``A3``, ``I2(5)`` or ``D4/0`` (restriction)."""
    base, _, flat_text = name.partition("/")
    match = _NAME.match(base)
    if match is None:
        raise StabCoverValidationError(f"Unknown arrangement name {name!r}", field="arrangement")
    if match.group("cd4"):
        arrangement = rank2_arrangement(4)
    elif match.group("m"):
        arrangement = rank2_arrangement(int(match.group("m")))
    else:
        arrangement = build_coxeter_arrangement(
            match.group("ade"), int(match.group("rank")), max_rank=max_rank
        )
    if flat_text:
        try:
            flat = [int(part) for part in flat_text.split(",")]
        except ValueError as exc:
            raise StabCoverValidationError(
                f"Malformed flat in {name!r}", field="arrangement"
            ) from exc
        arrangement = restrict_to_flat(arrangement, flat)
    return arrangement


# ---------------------------------------------------------------------------
# Chamber enumeration by frame propagation
# ---------------------------------------------------------------------------


def dual_coordinates(arrangement: Arrangement, chamber: Chamber) -> List[Vector]:
    """Row m holds sign_m * (h_m . r_j) over the chamber rays r_j; all entries are >= 0."""
    rows = []
    for sign, hyperplane in zip(chamber.sign_vector, arrangement.hyperplanes):
        row = tuple(sign * dot(hyperplane.normal, ray) for ray in chamber.rays)
        if min(row) < 0:
            raise StructureError(
                f"Ray of chamber {chamber.signs} lies on the wrong side of {list(hyperplane.normal)}",
                {"signs": chamber.signs, "hyperplane": list(hyperplane.normal)},
            )
        rows.append(row)
    return rows


def _wall_at(gvectors: Sequence[Vector], position: int) -> int | None:
    for index, row in enumerate(gvectors):
        if row[position] > 0 and all(value == 0 for j, value in enumerate(row) if j != position):
            return index
    return None


def _crossed_ray(
    gvectors: Sequence[Vector], wall: int, position: int, chamber: Chamber
) -> Vector:
    rank = len(chamber.rays)
    coefficients = [Fraction(0)] * rank
    for index, row in enumerate(gvectors):
        if index == wall or row[position] == 0:
            continue
        support = [j for j in range(rank) if j != position and row[j] != 0]
        if len(support) != 1:
            continue
        other = support[0]
        ratio = Fraction(row[position], row[other])
        if ratio > coefficients[other]:
            coefficients[other] = ratio
    coefficients[position] = Fraction(-1)

    for index, row in enumerate(gvectors):
        if index != wall and dot(row, coefficients) < 0:
            signs = list(chamber.signs)
            signs[wall] = "-" if signs[wall] == "+" else "+"
            raise SimplicialityError(
                f"Chamber {''.join(signs)} is not simplicial", sign_vector="".join(signs)
            )
    return primitive(
        [dot(coefficients, [ray[j] for ray in chamber.rays]) for j in range(rank)]
    )


def propagate_frames(arrangement: Arrangement, label_order: Sequence[int] | None = None) -> Fan:
    """Breadth-first wall-crossing walk from C+ carrying ordered ray frames.

    ``label_order`` changes the order walls are tried at each chamber; the
    frames (and so the labels) must not depend on it.
    """
    rank = arrangement.rank
    order = list(label_order) if label_order is not None else list(range(1, rank + 1))
    if sorted(order) != list(range(1, rank + 1)):
        raise StabCoverValidationError("label_order must permute 1..rank", field="label_order")

    start = Chamber(0, "+" * len(arrangement.hyperplanes), tuple(_identity(rank)))
    chambers: List[Chamber] = [start]
    index: Dict[str, int] = {start.signs: 0}
    crossings: List[Crossing] = []
    queue = deque([0])
    while queue:
        chamber = chambers[queue.popleft()]
        gvectors = dual_coordinates(arrangement, chamber)
        for label in order:
            wall = _wall_at(gvectors, label - 1)
            if wall is None:
                raise SimplicialityError(
                    f"Chamber {chamber.signs} has no wall opposite ray {label}",
                    sign_vector=chamber.signs,
                )
            rays = list(chamber.rays)
            rays[label - 1] = _crossed_ray(gvectors, wall, label - 1, chamber)
            flipped = list(chamber.signs)
            flipped[wall] = "-" if flipped[wall] == "+" else "+"
            signs = "".join(flipped)
            if signs in index:
                known = chambers[index[signs]]
                if known.rays != tuple(rays):
                    raise LabelConsistencyError(
                        f"Frames disagree at chamber {signs}",
                        routes=[list(known.route), list(chamber.route) + [label]],
                        sign_vector=signs,
                    )
                target = known.id
            else:
                target = len(chambers)
                chambers.append(Chamber(target, signs, tuple(rays), chamber.route + (label,)))
                index[signs] = target
                queue.append(target)
            crossings.append(Crossing(chamber.id, target, label, wall))

    crossings.sort(key=lambda crossing: (crossing.source, crossing.label))
    return Fan(arrangement, tuple(chambers), tuple(crossings))


@lru_cache(maxsize=32)
def chamber_fan(arrangement: Arrangement) -> Fan:
    return propagate_frames(arrangement)


def enumerate_chambers(arrangement: Arrangement) -> List[Chamber]:
    """All chambers in breadth-first order; chamber 0 is C+."""
    return list(chamber_fan(arrangement).chambers)


def is_simplicial(arrangement: Arrangement) -> bool:
    try:
        chamber_fan(arrangement)
    except SimplicialityError:
        return False
    return True


def sign_vector_of(arrangement: Arrangement, point: Sequence[int | Fraction]) -> str | None:
    """Sign string of a real point, or None if it lies on a hyperplane."""
    signs = []
    for hyperplane in arrangement.hyperplanes:
        value = hyperplane.evaluate(point)
        if value == 0:
            return None
        signs.append("+" if value > 0 else "-")
    return "".join(signs)

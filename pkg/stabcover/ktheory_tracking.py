"""Exchange numbers, wall-crossing matrices on simples and chamber frames.

Crossing wall i from a chamber C replaces ray i by
``-ray_i + sum_j b_ij ray_j``. The step matrix on frames is the identity
with column i replaced by that combination; the matrix on simple classes
is its transpose. Products follow the functional convention: the earliest
step is the rightmost factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

import sympy

from stabcover.arrangement_core import Chamber
from stabcover.chamber_graph import PositivePath, SkeletonGraph, minimal_galleries
from stabcover.deligne_groupoid import GroupoidWord
from stabcover.errors import StructureError


@dataclass(frozen=True)
class KMatrix:
    """Integer matrix on ordered simple classes; source/target name the chambers
    whose bases it maps between."""

    entries: sympy.ImmutableMatrix
    source: int
    target: int

    def rows(self) -> List[List[int]]:
        return [[int(value) for value in self.entries.row(i)] for i in range(self.entries.rows)]

    def is_identity(self) -> bool:
        return self.entries == sympy.eye(self.entries.rows)


@dataclass(frozen=True)
class PhiMatrix:
    """Columns are the ordered rays (g-vectors) of ``chamber``."""

    entries: sympy.ImmutableMatrix
    chamber: int

    def rows(self) -> List[List[int]]:
        return [[int(value) for value in self.entries.row(i)] for i in range(self.entries.rows)]


@dataclass(frozen=True)
class ExchangeRow:
    wall: int
    coefficients: Dict[int, int] = field(default_factory=dict)


@dataclass
class ConsistencyReport:
    chambers_checked: int = 0
    galleries_checked: int = 0
    arrows_checked: int = 0
    failures: List[Dict[str, object]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def phi_of_chamber(chamber: Chamber) -> PhiMatrix:
    """Frame matrix of a chamber; must be unimodular."""
    entries = sympy.ImmutableMatrix(list(chamber.rays)).T
    if abs(entries.det()) != 1:
        raise StructureError(
            f"Frame of chamber {chamber.id} has determinant {entries.det()}",
            {"chamber": chamber.id, "rays": [list(ray) for ray in chamber.rays]},
        )
    return PhiMatrix(entries, chamber.id)


@lru_cache(maxsize=4096)
def _inverse_frame(chamber: Chamber) -> sympy.ImmutableMatrix:
    return sympy.ImmutableMatrix(phi_of_chamber(chamber).entries.inv())


def crossing_data(graph: SkeletonGraph, arrow_id: int) -> ExchangeRow:
    """Solve the new ray in the source frame and read off b_ij."""
    arrow = graph.arrow(arrow_id)
    source, target = graph.chambers[arrow.source], graph.chambers[arrow.target]
    position = arrow.label - 1
    new_ray = sympy.Matrix(target.rays[position])
    coordinates = _inverse_frame(source) * new_ray

    if coordinates[position] != -1:
        raise StructureError(
            f"Arrow {arrow_id}: replaced ray has coefficient {coordinates[position]}, expected -1",
            {"arrow": arrow_id, "coordinates": [str(c) for c in coordinates]},
        )
    coefficients: Dict[int, int] = {}
    for j, value in enumerate(coordinates):
        if j == position:
            continue
        if not value.is_integer or value < 0:
            raise StructureError(
                f"Arrow {arrow_id}: exchange number b_{arrow.label}{j + 1} = {value} "
                "is not a nonnegative integer",
                {"arrow": arrow_id, "coordinates": [str(c) for c in coordinates]},
            )
        coefficients[j + 1] = int(value)
    return ExchangeRow(arrow.label, coefficients)


def step_phi_matrix(row: ExchangeRow, rank: int) -> sympy.ImmutableMatrix:
    """Identity with column ``wall`` replaced by (b_i1, ..., -1, ..., b_in)."""
    matrix = sympy.eye(rank)
    for j, value in row.coefficients.items():
        matrix[j - 1, row.wall - 1] = value
    matrix[row.wall - 1, row.wall - 1] = -1
    return sympy.ImmutableMatrix(matrix)


def f_matrix(row: ExchangeRow, rank: int, source: int = 0, target: int = 0) -> KMatrix:
    """[S_i] -> -[S_i] and [S_t] -> b_it [S_i] + [S_t] for t != i."""
    matrix = sympy.eye(rank)
    for t, value in row.coefficients.items():
        matrix[row.wall - 1, t - 1] = value
    matrix[row.wall - 1, row.wall - 1] = -1
    return KMatrix(sympy.ImmutableMatrix(matrix), source, target)


@lru_cache(maxsize=None)
def _arrow_matrices(graph: SkeletonGraph) -> Tuple[Tuple[sympy.ImmutableMatrix, sympy.ImmutableMatrix], ...]:
    """(F, step phi) for every arrow, indexed by arrow id."""
    matrices = []
    for arrow in graph.arrows:
        row = crossing_data(graph, arrow.id)
        matrices.append(
            (f_matrix(row, graph.rank).entries, step_phi_matrix(row, graph.rank))
        )
    return tuple(matrices)


def arrow_k_matrix(graph: SkeletonGraph, arrow_id: int) -> KMatrix:
    arrow = graph.arrow(arrow_id)
    return KMatrix(_arrow_matrices(graph)[arrow_id][0], arrow.source, arrow.target)


def arrow_phi_step(graph: SkeletonGraph, arrow_id: int) -> sympy.ImmutableMatrix:
    graph.arrow(arrow_id)
    return _arrow_matrices(graph)[arrow_id][1]


def f_along_path(graph: SkeletonGraph, path: PositivePath | GroupoidWord) -> KMatrix:
    """F_{a_t} ... F_{a_1}; letters walked backwards use the same matrix."""
    if isinstance(path, GroupoidWord):
        arrows = [arrow for arrow, _ in path.letters]
    else:
        arrows = list(path.arrows)
    matrices = _arrow_matrices(graph)
    product = sympy.eye(graph.rank)
    for arrow in arrows:
        product = matrices[arrow][0] * product
    return KMatrix(sympy.ImmutableMatrix(product), path.source, path.target)


def phi_along_gallery(graph: SkeletonGraph, path: PositivePath) -> sympy.ImmutableMatrix:
    """Product of step frame matrices along a gallery ending at C+, latest step leftmost."""
    matrices = _arrow_matrices(graph)
    product = sympy.eye(graph.rank)
    for arrow in path.arrows:
        product = matrices[arrow][1] * product
    return sympy.ImmutableMatrix(product)


def phi_consistency_check(graph: SkeletonGraph, gallery_cap: int = 64) -> ConsistencyReport:
    """Frames agree with step products along galleries to C+ and across every arrow."""
    report = ConsistencyReport()
    frames = {chamber.id: phi_of_chamber(chamber).entries for chamber in graph.chambers}
    for arrow in graph.arrows:
        report.arrows_checked += 1
        expected = frames[arrow.source] * arrow_phi_step(graph, arrow.id)
        if expected != frames[arrow.target]:
            report.failures.append(
                {"kind": "arrow", "arrow": arrow.id, "expected": expected.tolist()}
            )
    for chamber in graph.chambers:
        report.chambers_checked += 1
        for gallery in minimal_galleries(graph, chamber.id, 0, limit=gallery_cap):
            report.galleries_checked += 1
            product = phi_along_gallery(graph, gallery)
            if product != frames[chamber.id]:
                report.failures.append(
                    {
                        "kind": "gallery",
                        "chamber": chamber.id,
                        "gallery": list(gallery.arrows),
                        "product": [[int(v) for v in row] for row in product.tolist()],
                    }
                )
    return report

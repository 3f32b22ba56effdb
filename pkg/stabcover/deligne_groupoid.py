"""Positive paths, the Deligne groupoid and its vertex group at C+.

Relations identify the two minimal galleries around each rank 2
localization. Positive paths are compared by closure under these
rewrites; groupoid words are first refuted by their abelian image and
otherwise brought to the fraction form ``N^-1 P`` (N a stack of
longest galleries) so that only positive paths are ever compared. Positive
paths embed in the groupoid, so an exhausted closure separates two words.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Set, Tuple

import sympy
from sympy.matrices.normalforms import invariant_factors

from stabcover.arrangement_core import dual_coordinates
from stabcover.chamber_graph import PositivePath, SkeletonGraph, minimal_galleries
from stabcover.errors import (
    BudgetExceededError,
    EndpointMismatchError,
    StabCoverValidationError,
    StructureError,
)

Letter = Tuple[int, int]


@dataclass(frozen=True)
class GroupoidWord:
    """Letters (arrow id, +1 | -1) in traversal order; -1 walks the arrow backwards."""

    letters: Tuple[Letter, ...]
    source: int
    target: int

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_positive(self) -> bool:
        return all(exponent == 1 for _, exponent in self.letters)

    def inverse(self) -> "GroupoidWord":
        return GroupoidWord(
            tuple((arrow, -exponent) for arrow, exponent in reversed(self.letters)),
            self.target,
            self.source,
        )


class Verdict(str, Enum):
    EQUAL = "equal"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class WordVerdict:
    verdict: Verdict
    reason: str


@dataclass(frozen=True)
class Relation:
    """Two minimal galleries from ``chamber`` around the localization at walls ``labels``."""

    chamber: int
    labels: Tuple[int, int]
    left: PositivePath
    right: PositivePath


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    generator_arrows: Tuple[int, ...]
    relations: Tuple[Tuple[int, ...], ...]
    tree: Tuple[int, ...]


@dataclass(frozen=True)
class Abelianization:
    free_rank: int
    torsion: Tuple[int, ...]


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


def make_word(
    graph: SkeletonGraph, letters: Sequence[Sequence[int]], source: int | None = None
) -> GroupoidWord:
    """Validate endpoints of a letter sequence and build the word."""
    if not letters:
        if source is None:
            raise StabCoverValidationError("An empty word needs a source", field="word")
        graph.chamber(source)
        return GroupoidWord((), source, source)

    normalized: List[Letter] = []
    current = source
    for position, letter in enumerate(letters):
        arrow_id, exponent = int(letter[0]), int(letter[1])
        if exponent not in (1, -1):
            raise StabCoverValidationError(
                f"Exponent at position {position} must be +1 or -1", field="word"
            )
        arrow = graph.arrow(arrow_id)
        start, end = (arrow.source, arrow.target) if exponent == 1 else (arrow.target, arrow.source)
        if current is not None and start != current:
            raise EndpointMismatchError(
                f"Letter {position} starts at chamber {start}, expected {current}", field="word"
            )
        if position == 0:
            source = start
        normalized.append((arrow_id, exponent))
        current = end
    assert source is not None and current is not None
    return GroupoidWord(tuple(normalized), source, current)


def word_from_path(path: PositivePath) -> GroupoidWord:
    return GroupoidWord(tuple((arrow, 1) for arrow in path.arrows), path.source, path.target)


def compose_words(first: GroupoidWord, second: GroupoidWord) -> GroupoidWord:
    """``first`` followed by ``second``."""
    if first.target != second.source:
        raise EndpointMismatchError(
            f"Word ending at {first.target} cannot be followed by one starting at {second.source}",
            field="word",
        )
    return GroupoidWord(first.letters + second.letters, first.source, second.target)


def free_reduce(word: GroupoidWord) -> GroupoidWord:
    """Cancel adjacent letter/inverse-letter pairs of the same arrow."""
    stack: List[Letter] = []
    for arrow, exponent in word.letters:
        if stack and stack[-1] == (arrow, -exponent):
            stack.pop()
        else:
            stack.append((arrow, exponent))
    return GroupoidWord(tuple(stack), word.source, word.target)


def abelian_image(graph: SkeletonGraph, word: GroupoidWord) -> Tuple[int, ...]:
    """Signed count of crossings per hyperplane; constant on morphisms of the groupoid."""
    image = [0] * len(graph.arrangement.hyperplanes)
    for arrow, exponent in word.letters:
        image[graph.arrows[arrow].hyperplane] += exponent
    return tuple(image)


# ---------------------------------------------------------------------------
# Relations and the positive closure
# ---------------------------------------------------------------------------


def rank2_flip(graph: SkeletonGraph, chamber_id: int, labels: Tuple[int, int]) -> int:
    """Chamber opposite ``chamber_id`` in the localization at the two given walls."""
    chamber = graph.chamber(chamber_id)
    positions = {labels[0] - 1, labels[1] - 1}
    gvectors = dual_coordinates(graph.arrangement, chamber)
    signs = list(chamber.signs)
    for index, row in enumerate(gvectors):
        if all(value == 0 for j, value in enumerate(row) if j not in positions):
            signs[index] = "-" if signs[index] == "+" else "+"
    return graph.by_signs("".join(signs)).id


@lru_cache(maxsize=32)
def positive_relations(graph: SkeletonGraph) -> Tuple[Relation, ...]:
    relations: List[Relation] = []
    for chamber in graph.chambers:
        for i in range(1, graph.rank + 1):
            for j in range(i + 1, graph.rank + 1):
                opposite = rank2_flip(graph, chamber.id, (i, j))
                galleries = minimal_galleries(graph, chamber.id, opposite)
                if len(galleries) != 2:
                    raise StructureError(
                        f"Expected two galleries around walls {i},{j} at chamber {chamber.id}, "
                        f"found {len(galleries)}",
                        {"chamber": chamber.id, "labels": [i, j]},
                    )
                left, right = sorted(
                    galleries, key=lambda path: graph.arrows[path.arrows[0]].label != i
                )
                relations.append(Relation(chamber.id, (i, j), left, right))
    return tuple(relations)


@lru_cache(maxsize=32)
def _relation_index(graph: SkeletonGraph) -> Dict[int, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]]:
    index: Dict[int, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = {}
    for relation in positive_relations(graph):
        sides = index.setdefault(relation.chamber, [])
        sides.append((relation.left.arrows, relation.right.arrows))
        sides.append((relation.right.arrows, relation.left.arrows))
    return index


def _rewrites(graph: SkeletonGraph, state: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    index = _relation_index(graph)
    for position, arrow in enumerate(state):
        for side, replacement in index.get(graph.arrows[arrow].source, ()):
            end = position + len(side)
            if state[position:end] == side:
                yield state[:position] + replacement + state[end:]


def _closure_meets(
    graph: SkeletonGraph, left: Tuple[int, ...], right: Tuple[int, ...], budget: int | None
) -> bool | None:
    """Bidirectional search over rewrites: True if the classes meet, False if one
    class is exhausted without meeting, None if the state budget runs out."""
    if left == right:
        return True
    seen = [{left}, {right}]
    frontier: List[List[Tuple[int, ...]]] = [[left], [right]]
    visited = 2
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        following: List[Tuple[int, ...]] = []
        for state in frontier[side]:
            for neighbour in _rewrites(graph, state):
                if neighbour in seen[1 - side]:
                    return True
                if neighbour not in seen[side]:
                    seen[side].add(neighbour)
                    following.append(neighbour)
                    visited += 1
                    if budget is not None and visited > budget:
                        return None
        frontier[side] = following
    return False


def positive_path_equal(
    graph: SkeletonGraph, first: PositivePath, second: PositivePath, budget: int | None = None
) -> bool:
    """Whether two positive paths are identified in the category of positive paths."""
    if (first.source, first.target) != (second.source, second.target):
        raise EndpointMismatchError("Positive paths must share source and target", field="path")
    if first.length != second.length:
        return False
    result = _closure_meets(graph, first.arrows, second.arrows, budget)
    if result is None:
        raise BudgetExceededError(f"Closure exceeded {budget} states", field="budget")
    return result


# ---------------------------------------------------------------------------
# Word problem in the groupoid
# ---------------------------------------------------------------------------


def _chamber_after(graph: SkeletonGraph, word: GroupoidWord, count: int) -> int:
    current = word.source
    for arrow_id, exponent in word.letters[:count]:
        arrow = graph.arrows[arrow_id]
        current = arrow.target if exponent == 1 else arrow.source
    return current


def _longest_gallery(graph: SkeletonGraph, chamber_id: int) -> Tuple[int, ...]:
    return minimal_galleries(graph, chamber_id, graph.antipode(chamber_id), limit=1)[0].arrows


def _antipodal_arrows(graph: SkeletonGraph, arrows: Sequence[int]) -> Tuple[int, ...]:
    return tuple(graph.antipodal_arrow(arrow).id for arrow in arrows)


def fraction_form(graph: SkeletonGraph, word: GroupoidWord) -> Tuple[int, Tuple[int, ...], int]:
    """Rewrite ``word`` as N_k^-1 P.

    Returns (k, P, Z) where P is a positive path from Z to the word's
    target, and N_k is the stack of k longest galleries ending at the
    word's source that starts at Z. A run of backward letters crossing
    distinct hyperplanes is the inverse of one minimal gallery and costs a
    single longest gallery in the denominator.
    """
    start = word.source
    positive: Tuple[int, ...] = ()
    inversions = 0
    letters = word.letters
    index = 0
    while index < len(letters):
        arrow_id, exponent = letters[index]
        if exponent == 1:
            positive += (arrow_id,)
            index += 1
            continue
        run: List[int] = []
        crossed: Set[int] = set()
        while (
            index < len(letters)
            and letters[index][1] == -1
            and graph.arrows[letters[index][0]].hyperplane not in crossed
        ):
            crossed.add(graph.arrows[letters[index][0]].hyperplane)
            run.append(letters[index][0])
            index += 1
        # The run walks a minimal gallery w: Y -> X backwards; w followed by rest is longest from Y.
        gallery_start = graph.arrows[run[-1]].source
        current = graph.arrows[run[0]].target
        rest = minimal_galleries(graph, current, graph.antipode(gallery_start), limit=1)[0]
        positive = _antipodal_arrows(graph, positive + rest.arrows)
        start = graph.antipode(start)
        inversions += 1
    return inversions, positive, start


def _delta_stack(graph: SkeletonGraph, top: int, count: int) -> Tuple[int, ...]:
    """``count`` consecutive longest galleries starting at chamber ``top``."""
    arrows: Tuple[int, ...] = ()
    current = top
    for _ in range(count):
        arrows += _longest_gallery(graph, current)
        current = graph.antipode(current)
    return arrows


def _strip_common(
    graph: SkeletonGraph, first: GroupoidWord, second: GroupoidWord
) -> Tuple[GroupoidWord, GroupoidWord]:
    """Cancel a shared prefix and a shared suffix; morphisms of a groupoid cancel."""
    shorter = min(first.length, second.length)
    prefix = 0
    while prefix < shorter and first.letters[prefix] == second.letters[prefix]:
        prefix += 1
    suffix = 0
    while (
        suffix < shorter - prefix
        and first.letters[-1 - suffix] == second.letters[-1 - suffix]
    ):
        suffix += 1
    start = _chamber_after(graph, first, prefix)
    return (
        make_word(graph, first.letters[prefix : first.length - suffix], start),
        make_word(graph, second.letters[prefix : second.length - suffix], start),
    )


def groupoid_word_equal(
    graph: SkeletonGraph, first: GroupoidWord, second: GroupoidWord, budget: int
) -> WordVerdict:
    """Semi-decide equality of two morphisms of the Deligne groupoid."""
    if (first.source, first.target) != (second.source, second.target):
        raise EndpointMismatchError("Words must share source and target", field="word")
    if budget < 0:
        raise StabCoverValidationError("Budget must be nonnegative", field="budget")

    first, second = _strip_common(graph, first, second)
    first, second = _strip_common(graph, free_reduce(first), free_reduce(second))
    if first.letters == second.letters:
        return WordVerdict(Verdict.EQUAL, "identical after free reduction")
    if abelian_image(graph, first) != abelian_image(graph, second):
        return WordVerdict(Verdict.DISTINCT, "abelian images differ")

    if first.is_positive and second.is_positive:
        return _compare_positive(
            graph,
            tuple(a for a, _ in first.letters),
            tuple(a for a, _ in second.letters),
            budget,
            "positive paths",
        )

    k_first, positive_first, top_first = fraction_form(graph, first)
    k_second, positive_second, top_second = fraction_form(graph, second)
    if k_first < k_second:
        positive_first = _delta_stack(graph, top_second, k_second - k_first) + positive_first
    elif k_second < k_first:
        positive_second = _delta_stack(graph, top_first, k_first - k_second) + positive_second
    return _compare_positive(graph, positive_first, positive_second, budget, "fraction numerators")


def _compare_positive(
    graph: SkeletonGraph,
    left: Tuple[int, ...],
    right: Tuple[int, ...],
    budget: int,
    what: str,
) -> WordVerdict:
    """Compare positive paths with common endpoints after cancelling a shared prefix and suffix.

    Positive paths cancel on both sides and embed in the groupoid, so an
    exhausted closure separates the two morphisms.
    """
    shorter = min(len(left), len(right))
    prefix = 0
    while prefix < shorter and left[prefix] == right[prefix]:
        prefix += 1
    suffix = 0
    while suffix < shorter - prefix and left[-1 - suffix] == right[-1 - suffix]:
        suffix += 1
    left, right = left[prefix : len(left) - suffix], right[prefix : len(right) - suffix]
    if len(left) != len(right):
        return WordVerdict(Verdict.DISTINCT, f"{what} have different lengths")
    met = _closure_meets(graph, left, right, budget)
    if met:
        return WordVerdict(Verdict.EQUAL, f"{what} related by rewriting")
    if met is None:
        return WordVerdict(Verdict.UNKNOWN, f"closure exceeded budget {budget}")
    return WordVerdict(Verdict.DISTINCT, f"{what} not related by rewriting")


# ---------------------------------------------------------------------------
# Presentation of the vertex group at C+
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def tree_words(graph: SkeletonGraph) -> Dict[int, GroupoidWord]:
    """Positive word from C+ to every chamber along the spanning tree."""
    words = {0: GroupoidWord((), 0, 0)}
    for arrow in graph.spanning_tree():
        parent = words[arrow.source]
        words[arrow.target] = GroupoidWord(
            parent.letters + ((arrow.id, 1),), 0, arrow.target
        )
    return words


def generator_word(graph: SkeletonGraph, arrow_id: int) -> GroupoidWord:
    """The loop at C+ that walks the tree, crosses ``arrow_id`` and walks back."""
    words = tree_words(graph)
    arrow = graph.arrow(arrow_id)
    return free_reduce(
        compose_words(
            compose_words(words[arrow.source], GroupoidWord(((arrow_id, 1),), arrow.source, arrow.target)),
            words[arrow.target].inverse(),
        )
    )


def conjugated_relation(graph: SkeletonGraph, relation: Relation) -> Tuple[GroupoidWord, GroupoidWord]:
    """Both sides of a relation moved to loops at C+ through the spanning tree."""
    words = tree_words(graph)
    back = words[relation.left.target].inverse()
    return (
        compose_words(compose_words(words[relation.chamber], word_from_path(relation.left)), back),
        compose_words(compose_words(words[relation.chamber], word_from_path(relation.right)), back),
    )


def vertex_presentation(graph: SkeletonGraph) -> Presentation:
    """Generators are the arrows outside the spanning tree; relations come from
    the rank 2 galleries, written left side then inverted right side."""
    tree = graph.spanning_tree()
    tree_ids = {arrow.id for arrow in tree}
    generator_arrows = tuple(arrow.id for arrow in graph.arrows if arrow.id not in tree_ids)
    position = {arrow: index + 1 for index, arrow in enumerate(generator_arrows)}

    relations: List[Tuple[int, ...]] = []
    for relation in positive_relations(graph):
        forward = [position[a] for a in relation.left.arrows if a in position]
        backward = [-position[a] for a in reversed(relation.right.arrows) if a in position]
        relations.append(tuple(forward + backward))

    return Presentation(
        generators=tuple(f"g{arrow}" for arrow in generator_arrows),
        generator_arrows=generator_arrows,
        relations=tuple(relations),
        tree=tuple(sorted(tree_ids)),
    )


def expand_relator(graph: SkeletonGraph, presentation: Presentation, relator: Sequence[int]) -> GroupoidWord:
    """Arrow-level loop at C+ spelled by a signed generator sequence."""
    word = GroupoidWord((), 0, 0)
    for signed in relator:
        loop = generator_word(graph, presentation.generator_arrows[abs(signed) - 1])
        word = compose_words(word, loop if signed > 0 else loop.inverse())
    return free_reduce(word)


def abelianization(presentation: Presentation) -> Abelianization:
    """Abelian invariants of the presented group.

    Unit pivots are eliminated first (each removes one generator and one
    relation); the remaining integer matrix goes through Smith normal form.
    """
    rows: Dict[int, Dict[int, int]] = {}
    column_rows: Dict[int, set] = {}
    for row_id, relator in enumerate(presentation.relations):
        row: Dict[int, int] = {}
        for signed in relator:
            column = abs(signed) - 1
            row[column] = row.get(column, 0) + (1 if signed > 0 else -1)
        row = {column: value for column, value in row.items() if value}
        if row:
            rows[row_id] = row
            for column in row:
                column_rows.setdefault(column, set()).add(row_id)

    columns = set(range(len(presentation.generators)))
    while True:
        pivot = None
        for row_id in sorted(rows, key=lambda r: (len(rows[r]), r)):
            unit = next((c for c in sorted(rows[row_id]) if abs(rows[row_id][c]) == 1), None)
            if unit is not None:
                pivot = (row_id, unit)
                break
        if pivot is None:
            break
        row_id, column = pivot
        pivot_row = rows.pop(row_id)
        unit_value = pivot_row[column]
        for other_column in pivot_row:
            column_rows[other_column].discard(row_id)
        for other_id in list(column_rows.get(column, ())):
            other = rows[other_id]
            factor = other[column] * unit_value
            for c, value in pivot_row.items():
                updated = other.get(c, 0) - factor * value
                if updated:
                    if c not in other:
                        column_rows.setdefault(c, set()).add(other_id)
                    other[c] = updated
                else:
                    other.pop(c, None)
                    column_rows[c].discard(other_id)
            if not other:
                rows.pop(other_id)
        column_rows.pop(column, None)
        columns.discard(column)

    remaining = sorted(columns)
    if not rows or not remaining:
        return Abelianization(len(remaining), ())
    matrix = sympy.Matrix(
        [[row.get(column, 0) for column in remaining] for row in rows.values()]
    )
    factors = [int(f) for f in invariant_factors(matrix, domain=sympy.ZZ) if f != 0]
    return Abelianization(
        len(remaining) - len(factors), tuple(abs(f) for f in factors if abs(f) != 1)
    )

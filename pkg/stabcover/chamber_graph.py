"""The labelled skeleton graph of an arrangement and its galleries."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple

import networkx as nx

from stabcover.arrangement_core import Arrangement, Chamber, Fan, chamber_fan, propagate_frames
from stabcover.errors import EndpointMismatchError, StabCoverValidationError


@dataclass(frozen=True)
class Arrow:
    """Directed crossing of one wall; ``label`` is the replaced frame position."""

    id: int
    source: int
    target: int
    label: int
    hyperplane: int


@dataclass(frozen=True)
class PositivePath:
    arrows: Tuple[int, ...]
    source: int
    target: int

    @property
    def length(self) -> int:
        return len(self.arrows)


@dataclass(eq=False)
class SkeletonGraph:
    """Chambers as vertices, one arrow per (chamber, wall)."""

    arrangement: Arrangement
    chambers: Tuple[Chamber, ...]
    arrows: Tuple[Arrow, ...]
    _outgoing: Dict[int, Dict[int, int]] = field(default_factory=dict, repr=False)
    _between: Dict[Tuple[int, int], int] = field(default_factory=dict, repr=False)
    _by_signs: Dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for arrow in self.arrows:
            self._outgoing.setdefault(arrow.source, {})[arrow.label] = arrow.id
            self._between[(arrow.source, arrow.target)] = arrow.id
        self._by_signs = {chamber.signs: chamber.id for chamber in self.chambers}

    @property
    def rank(self) -> int:
        return self.arrangement.rank

    def chamber(self, chamber_id: int) -> Chamber:
        if not 0 <= chamber_id < len(self.chambers):
            raise StabCoverValidationError(f"Unknown chamber id {chamber_id}", field="chamber")
        return self.chambers[chamber_id]

    def arrow(self, arrow_id: int) -> Arrow:
        if not 0 <= arrow_id < len(self.arrows):
            raise StabCoverValidationError(f"Unknown arrow id {arrow_id}", field="arrow")
        return self.arrows[arrow_id]

    def arrow_from(self, chamber_id: int, label: int) -> Arrow:
        return self.arrows[self._outgoing[chamber_id][label]]

    def outgoing(self, chamber_id: int) -> List[Arrow]:
        """Outgoing arrows in label order."""
        table = self._outgoing[chamber_id]
        return [self.arrows[table[label]] for label in sorted(table)]

    def arrow_between(self, source: int, target: int) -> Arrow:
        try:
            return self.arrows[self._between[(source, target)]]
        except KeyError as exc:
            raise StabCoverValidationError(
                f"Chambers {source} and {target} are not adjacent", field="arrow"
            ) from exc

    def reverse(self, arrow_id: int) -> Arrow:
        arrow = self.arrow(arrow_id)
        return self.arrow_between(arrow.target, arrow.source)

    def by_signs(self, signs: str) -> Chamber:
        if signs not in self._by_signs:
            raise StabCoverValidationError(f"No chamber with signs {signs}", field="signs")
        return self.chambers[self._by_signs[signs]]

    def antipode(self, chamber_id: int) -> int:
        """The chamber with every sign flipped."""
        signs = self.chamber(chamber_id).signs
        return self._by_signs["".join("-" if sign == "+" else "+" for sign in signs)]

    def antipodal_arrow(self, arrow_id: int) -> Arrow:
        arrow = self.arrow(arrow_id)
        return self.arrow_between(self.antipode(arrow.source), self.antipode(arrow.target))

    def path(self, arrow_ids: Sequence[int], source: int | None = None) -> PositivePath:
        """Validate composability and wrap arrow ids as a positive path."""
        if not arrow_ids:
            if source is None:
                raise StabCoverValidationError("An empty path needs a source", field="path")
            self.chamber(source)
            return PositivePath((), source, source)
        arrows = [self.arrow(arrow_id) for arrow_id in arrow_ids]
        if source is not None and arrows[0].source != source:
            raise EndpointMismatchError(
                f"Path starts at {arrows[0].source}, expected {source}", field="path"
            )
        for previous, current in zip(arrows, arrows[1:]):
            if previous.target != current.source:
                raise EndpointMismatchError(
                    f"Arrow {current.id} does not start where arrow {previous.id} ends",
                    field="path",
                )
        return PositivePath(tuple(arrow_ids), arrows[0].source, arrows[-1].target)

    def compose(self, first: PositivePath, second: PositivePath) -> PositivePath:
        """``first`` followed by ``second``."""
        if first.target != second.source:
            raise EndpointMismatchError("Paths are not composable", field="path")
        return PositivePath(first.arrows + second.arrows, first.source, second.target)

    def digraph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(chamber.id for chamber in self.chambers)
        for arrow in self.arrows:
            graph.add_edge(
                arrow.source, arrow.target, key=arrow.id, label=arrow.label, hyperplane=arrow.hyperplane
            )
        return graph

    def spanning_tree(self) -> List[Arrow]:
        """Breadth-first tree from C+, neighbours visited in label order."""
        return [self.arrow_between(u, v) for u, v in nx.bfs_edges(self.digraph(), 0)]

    def to_dot(self) -> str:
        lines = [f'digraph "{self.arrangement.name or "skeleton"}" {{']
        for chamber in self.chambers:
            lines.append(f'  {chamber.id} [label="{chamber.id} {chamber.signs}"];')
        for arrow in self.arrows:
            lines.append(f'  {arrow.source} -> {arrow.target} [label="s{arrow.label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _skeleton_from_fan(fan: Fan) -> SkeletonGraph:
    arrows = tuple(
        Arrow(index, crossing.source, crossing.target, crossing.label, crossing.hyperplane)
        for index, crossing in enumerate(fan.crossings)
    )
    return SkeletonGraph(fan.arrangement, fan.chambers, arrows)


@lru_cache(maxsize=32)
def build_skeleton(arrangement: Arrangement) -> SkeletonGraph:
    """Skeleton graph with labels propagated from C+."""
    return _skeleton_from_fan(chamber_fan(arrangement))


def labels_by_signs(fan: Fan) -> Dict[Tuple[str, str], int]:
    """Arrow labels keyed by (source signs, target signs), independent of chamber ids."""
    signs = {chamber.id: chamber.signs for chamber in fan.chambers}
    return {
        (signs[crossing.source], signs[crossing.target]): crossing.label
        for crossing in fan.crossings
    }


def label_mismatches(arrangement: Arrangement, label_order: Sequence[int]) -> List[Tuple[str, str]]:
    """Arrows whose label changes when walls are tried in ``label_order``."""
    reference = labels_by_signs(chamber_fan(arrangement))
    shuffled = labels_by_signs(propagate_frames(arrangement, label_order))
    return sorted(key for key in reference if shuffled.get(key) != reference[key])


def separation_set(graph: SkeletonGraph, first: int, second: int) -> FrozenSet[int]:
    """Hyperplanes on which the two chambers' signs differ."""
    left, right = graph.chamber(first).signs, graph.chamber(second).signs
    return frozenset(index for index, (a, b) in enumerate(zip(left, right)) if a != b)


def iter_minimal_galleries(graph: SkeletonGraph, first: int, second: int) -> Iterator[PositivePath]:
    """Depth-first over walls that separate the current chamber from ``second``."""
    goal = graph.chamber(second).signs
    graph.chamber(first)

    def walk(current: int, trail: Tuple[int, ...]) -> Iterator[PositivePath]:
        if current == second:
            yield PositivePath(trail, first, second)
            return
        signs = graph.chambers[current].signs
        for arrow in graph.outgoing(current):
            if signs[arrow.hyperplane] != goal[arrow.hyperplane]:
                yield from walk(arrow.target, trail + (arrow.id,))

    yield from walk(first, ())


def minimal_galleries(
    graph: SkeletonGraph, first: int, second: int, limit: int | None = None
) -> List[PositivePath]:
    return list(islice(iter_minimal_galleries(graph, first, second), limit))


def random_minimal_gallery(
    graph: SkeletonGraph, first: int, second: int, rng: random.Random
) -> PositivePath:
    goal = graph.chamber(second).signs
    current, trail = first, []
    while current != second:
        signs = graph.chambers[current].signs
        choices = [a for a in graph.outgoing(current) if signs[a.hyperplane] != goal[a.hyperplane]]
        arrow = rng.choice(choices)
        trail.append(arrow.id)
        current = arrow.target
    return PositivePath(tuple(trail), first, second)


def random_positive_path(
    graph: SkeletonGraph, rng: random.Random, max_length: int, source: int | None = None
) -> PositivePath:
    """Random walk of length 0..max_length along arrows."""
    current = rng.randrange(len(graph.chambers)) if source is None else source
    start, trail = current, []
    for _ in range(rng.randint(0, max_length)):
        arrow = rng.choice(graph.outgoing(current))
        trail.append(arrow.id)
        current = arrow.target
    return PositivePath(tuple(trail), start, current)


def random_positive_loop(
    graph: SkeletonGraph, rng: random.Random, max_length: int, source: int | None = None
) -> PositivePath:
    """A random walk closed by a random minimal gallery back to its start."""
    walk = random_positive_path(graph, rng, max_length, source)
    closing = random_minimal_gallery(graph, walk.target, walk.source, rng)
    return graph.compose(walk, closing)

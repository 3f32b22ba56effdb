"""Groupoid suite - presentation at C+, relation evaluation and the word problem."""

from __future__ import annotations

import time
from typing import Any, Dict, Tuple

from stabcover.chamber_graph import (
    PositivePath,
    SkeletonGraph,
    build_skeleton,
    minimal_galleries,
    random_minimal_gallery,
    random_positive_path,
)
from stabcover.cli_io.reports import Failures, ReportBuilder, suite_inputs
from stabcover.cli_io.sampling import rng_for
from stabcover.config import Config
from stabcover.deligne_groupoid import (
    GroupoidWord,
    Verdict,
    abelianization,
    compose_words,
    conjugated_relation,
    expand_relator,
    free_reduce,
    groupoid_word_equal,
    positive_path_equal,
    positive_relations,
    vertex_presentation,
    word_from_path,
)
from stabcover.errors import BudgetExceededError
from stabcover.ktheory_tracking import f_along_path
from stabcover.observability.logger import ObservabilityLogger

SUITE = "groupoid"

# Closure searches between antipodal chambers stay small up to rank 3.
ANTIPODAL_RANK_LIMIT = 3


def run(payload: Dict[str, Any], context: Dict[str, Any]) -> Dict[str, Any]:
    """Verify the groupoid presentation and word-problem procedures."""
    run_id = context.get("run_id", "suite-unknown")
    logger = ObservabilityLogger(run_id, "GroupoidSuite")
    start_time = time.time()

    arrangement, config = suite_inputs(payload)
    logger.log("start", {"arrangement": arrangement.name, "seed": config.seed})
    report = ReportBuilder(SUITE, arrangement, config, logger)
    graph = build_skeleton(arrangement)

    report.run("generator-count", lambda: _generator_count(graph))
    report.run("abelianization", lambda: _abelianization(graph))
    report.run("relator-expansion", lambda: _relator_expansion(graph))
    report.run("relations-evaluate", lambda: _relations_evaluate(graph, config.budget))
    if graph.rank <= ANTIPODAL_RANK_LIMIT:
        report.run("antipodal-galleries", lambda: _antipodal_galleries(graph, config.budget))
    report.run("length-separation", lambda: _length_separation(graph, config))
    report.run("inverse-pairs-distinct", lambda: _inverse_pairs(graph, config.budget))
    if graph.rank == 2:
        report.run("full-turns-equal", lambda: _full_turns(graph, config.budget))

    result = report.build()
    logger.log(
        "end",
        {"status": result["status"], "duration_ms": (time.time() - start_time) * 1000},
    )
    return result


def _generator_count(graph: SkeletonGraph) -> Tuple[Failures, int]:
    presentation = vertex_presentation(graph)
    expected = len(graph.arrows) - (len(graph.chambers) - 1)
    if len(presentation.generators) != expected:
        return [{"generators": len(presentation.generators), "expected": expected}], 1
    return [], 1


def _abelianization(graph: SkeletonGraph) -> Tuple[Failures, int]:
    invariants = abelianization(vertex_presentation(graph))
    hyperplanes = len(graph.arrangement.hyperplanes)
    if invariants.free_rank != hyperplanes or invariants.torsion:
        return [
            {
                "free_rank": invariants.free_rank,
                "torsion": list(invariants.torsion),
                "hyperplanes": hyperplanes,
            }
        ], 1
    return [], 1


def _relator_expansion(graph: SkeletonGraph) -> Tuple[Failures, int]:
    """Each relator spells the tree-conjugated relation loop."""
    presentation = vertex_presentation(graph)
    failures: Failures = []
    for relation, relator in zip(positive_relations(graph), presentation.relations):
        left, right = conjugated_relation(graph, relation)
        expected = free_reduce(compose_words(left, right.inverse()))
        if expand_relator(graph, presentation, relator).letters != expected.letters:
            failures.append(
                {"chamber": relation.chamber, "labels": list(relation.labels), "relator": list(relator)}
            )
    return failures, len(presentation.relations)


def _relations_evaluate(graph: SkeletonGraph, budget: int) -> Tuple[Failures, int]:
    relations = positive_relations(graph)
    failures: Failures = []
    for relation in relations:
        left, right = conjugated_relation(graph, relation)
        verdict = groupoid_word_equal(graph, left, right, budget)
        if verdict.verdict is not Verdict.EQUAL:
            failures.append(
                {
                    "chamber": relation.chamber,
                    "labels": list(relation.labels),
                    "left": list(relation.left.arrows),
                    "right": list(relation.right.arrows),
                    "verdict": verdict.verdict.value,
                }
            )
    return failures, len(relations)


def _antipodal_galleries(graph: SkeletonGraph, budget: int) -> Tuple[Failures, int]:
    failures: Failures = []
    for chamber in graph.chambers:
        galleries = minimal_galleries(graph, chamber.id, graph.antipode(chamber.id), limit=2)
        if len(galleries) < 2:
            continue
        first, second = galleries
        try:
            equal = positive_path_equal(graph, first, second, budget)
        except BudgetExceededError:
            equal = False
        if not equal:
            failures.append(
                {"chamber": chamber.id, "first": list(first.arrows), "second": list(second.arrows)}
            )
    return failures, len(graph.chambers)


def _paired_path(graph: SkeletonGraph, config: Config, index: int) -> Tuple[PositivePath, PositivePath]:
    rng = rng_for(config.seed, f"{SUITE}:pair", index)
    first = random_positive_path(graph, rng, config.max_path_length)
    walk = random_positive_path(graph, rng, config.max_path_length, source=first.source)
    closing = random_minimal_gallery(graph, walk.target, first.target, rng)
    return first, graph.compose(walk, closing)


def _length_separation(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    """Different lengths are never identified; identified pairs share K-matrices."""
    failures: Failures = []
    for index in range(config.pair_samples):
        first, second = _paired_path(graph, config, index)
        try:
            equal = positive_path_equal(graph, first, second, config.budget)
        except BudgetExceededError:
            continue
        if not equal:
            continue
        same_matrix = f_along_path(graph, first).entries == f_along_path(graph, second).entries
        if first.length != second.length or not same_matrix:
            failures.append(
                {"index": index, "first": list(first.arrows), "second": list(second.arrows)}
            )
    return failures, config.pair_samples


def _inverse_pairs(graph: SkeletonGraph, budget: int) -> Tuple[Failures, int]:
    """An arrow followed by its opposite arrow is not the identity."""
    failures: Failures = []
    for arrow in graph.outgoing(0):
        back = graph.reverse(arrow.id)
        loop = GroupoidWord(((arrow.id, 1), (back.id, 1)), 0, 0)
        verdict = groupoid_word_equal(graph, loop, GroupoidWord((), 0, 0), budget)
        if verdict.verdict is not Verdict.DISTINCT:
            failures.append({"arrow": arrow.id, "verdict": verdict.verdict.value})
    return failures, graph.rank


def _full_turns(graph: SkeletonGraph, budget: int) -> Tuple[Failures, int]:
    """The clockwise and anticlockwise full turns around the origin agree."""
    turns = []
    for gallery in minimal_galleries(graph, 0, graph.antipode(0)):
        continuation = [graph.antipodal_arrow(arrow).id for arrow in gallery.arrows]
        turns.append(word_from_path(graph.compose(gallery, graph.path(continuation))))
    clockwise, anticlockwise = turns
    verdict = groupoid_word_equal(graph, clockwise, anticlockwise, budget)
    if verdict.verdict is not Verdict.EQUAL:
        return [
            {
                "clockwise": [list(letter) for letter in clockwise.letters],
                "anticlockwise": [list(letter) for letter in anticlockwise.letters],
                "verdict": verdict.verdict.value,
            }
        ], 1
    return [], 1

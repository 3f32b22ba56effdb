"""Monodromy suite - lifting closed polylines in the complement to groupoid words."""

from __future__ import annotations

import time
from typing import Any, Dict, List, Tuple

from stabcover.chamber_graph import SkeletonGraph, build_skeleton
from stabcover.cli_io.formats import point_to_json
from stabcover.cli_io.reports import Failures, ReportBuilder, suite_inputs
from stabcover.cli_io.sampling import (
    random_charge,
    random_generic_point,
    random_rectangle,
    rng_for,
)
from stabcover.config import Config
from stabcover.cover_geometry import ComplexPoint, apply_matrix, monodromy
from stabcover.errors import OnHyperplaneError, RefinementNeededError
from stabcover.observability.logger import ObservabilityLogger

SUITE = "monodromy"

CROSSING_CONVENTION = (
    "positive arrow when the crossed coordinate leaves H through the positive real axis, "
    "opposite arrow walked backwards otherwise"
)


def run(payload: Dict[str, Any], context: Dict[str, Any]) -> Dict[str, Any]:
    """Lift seeded loops and check their K-matrices."""
    run_id = context.get("run_id", "suite-unknown")
    logger = ObservabilityLogger(run_id, "MonodromySuite")
    start_time = time.time()

    arrangement, config = suite_inputs(payload)
    logger.log("start", {"arrangement": arrangement.name, "seed": config.seed})
    report = ReportBuilder(SUITE, arrangement, config, logger)
    graph = build_skeleton(arrangement)

    report.run(
        "rectangular-loops",
        lambda: _rectangles(graph, config),
        detail=CROSSING_CONVENTION,
    )
    report.run("constant-loops", lambda: _constant_loops(graph, config))
    report.run("loops-inside-a-piece", lambda: _piece_loops(graph, config))

    result = report.build()
    logger.log(
        "end",
        {"status": result["status"], "duration_ms": (time.time() - start_time) * 1000},
    )
    return result


def _lift(
    graph: SkeletonGraph, polyline: List[ComplexPoint], config: Config
) -> Tuple[Dict[str, Any] | None, Any]:
    """Run the lift; return (failure, (word, matrix))."""
    try:
        word, matrix = monodromy(graph, polyline, refinement_depth=config.refinement_depth)
    except (OnHyperplaneError, RefinementNeededError) as exc:
        return {"polyline": [point_to_json(z) for z in polyline], **exc.to_dict()}, None
    return None, (word, matrix)


def _rectangles(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int, int]:
    """Seeded rectangles; a segment that stays unresolved is inconclusive, not a failure."""
    failures: Failures = []
    inconclusive = 0
    for index in range(config.monodromy_samples):
        rng = rng_for(config.seed, f"{SUITE}:rectangle", index)
        polyline = random_rectangle(rng, graph.arrangement, config.sample_window)
        failure, lifted = _lift(graph, polyline, config)
        if failure is not None and failure.get("error_type") == RefinementNeededError.__name__:
            inconclusive += 1
            continue
        if failure is None:
            word, matrix = lifted
            if word.source != word.target or not matrix.is_identity():
                failure = {
                    "polyline": [point_to_json(z) for z in polyline],
                    "word": [list(letter) for letter in word.letters],
                    "matrix": matrix.rows(),
                }
        if failure is not None:
            failures.append({"index": index, **failure})
    return failures, config.monodromy_samples - inconclusive, inconclusive


def _constant_loops(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    failures: Failures = []
    samples = min(config.monodromy_samples, 10)
    for index in range(samples):
        rng = rng_for(config.seed, f"{SUITE}:constant", index)
        z = random_generic_point(rng, graph.arrangement, config.sample_window)
        failure, lifted = _lift(graph, [z, z], config)
        if failure is None and (lifted[0].letters or not lifted[1].is_identity()):
            failure = {"point": point_to_json(z), "word": [list(x) for x in lifted[0].letters]}
        if failure is not None:
            failures.append({"index": index, **failure})
    return failures, samples


def _piece_loops(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    """Triangles pushed through one frame never leave that piece."""
    failures: Failures = []
    for index in range(config.monodromy_samples):
        rng = rng_for(config.seed, f"{SUITE}:piece", index)
        chamber = graph.chambers[rng.randrange(len(graph.chambers))]
        frame = [list(row) for row in zip(*chamber.rays)]
        corners = [
            apply_matrix(frame, random_charge(rng, graph.rank, config.sample_window))
            for _ in range(3)
        ]
        failure, lifted = _lift(graph, corners + corners[:1], config)
        if failure is None and lifted[0].letters:
            failure = {
                "chamber": chamber.id,
                "word": [list(letter) for letter in lifted[0].letters],
            }
        if failure is not None:
            failures.append({"index": index, **failure})
    return failures, config.monodromy_samples

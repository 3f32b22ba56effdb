"""K-theory suite - exchange numbers, involution law, path invariance and frames."""

from __future__ import annotations

import time
from typing import Any, Dict, Tuple

import sympy

from stabcover.chamber_graph import (
    SkeletonGraph,
    build_skeleton,
    minimal_galleries,
    random_positive_loop,
    random_positive_path,
)
from stabcover.cli_io.reports import Failures, ReportBuilder, suite_inputs
from stabcover.cli_io.sampling import rng_for
from stabcover.config import Config
from stabcover.ktheory_tracking import (
    arrow_k_matrix,
    arrow_phi_step,
    crossing_data,
    f_along_path,
    phi_consistency_check,
)
from stabcover.observability.logger import ObservabilityLogger

SUITE = "ktheory"


def run(payload: Dict[str, Any], context: Dict[str, Any]) -> Dict[str, Any]:
    """Verify the wall-crossing matrices of one arrangement."""
    run_id = context.get("run_id", "suite-unknown")
    logger = ObservabilityLogger(run_id, "KTheorySuite")
    start_time = time.time()

    arrangement, config = suite_inputs(payload)
    logger.log("start", {"arrangement": arrangement.name, "seed": config.seed})
    report = ReportBuilder(SUITE, arrangement, config, logger)
    graph = build_skeleton(arrangement)

    report.run("exchange-numbers", lambda: _exchange_numbers(graph))
    report.run("involution", lambda: _involution(graph))
    report.run("reverse-arrow", lambda: _reverse_arrow(graph))
    report.run("transpose-duality", lambda: _transpose_duality(graph))
    report.run(
        "frame-coherence",
        lambda: _frame_coherence(graph, config.gallery_cap),
        detail=f"at most {config.gallery_cap} galleries per chamber",
    )
    report.run("path-invariance", lambda: _path_invariance(graph, config))
    report.run("loop-triviality", lambda: _loop_triviality(graph, config))

    result = report.build()
    logger.log(
        "end",
        {"status": result["status"], "duration_ms": (time.time() - start_time) * 1000},
    )
    return result


def _exchange_numbers(graph: SkeletonGraph) -> Tuple[Failures, int]:
    for arrow in graph.arrows:
        crossing_data(graph, arrow.id)
    return [], len(graph.arrows)


def _involution(graph: SkeletonGraph) -> Tuple[Failures, int]:
    identity = sympy.eye(graph.rank)
    failures: Failures = []
    for arrow in graph.arrows:
        matrix = arrow_k_matrix(graph, arrow.id)
        if matrix.entries * matrix.entries != identity:
            failures.append({"arrow": arrow.id, "matrix": matrix.rows()})
    return failures, len(graph.arrows)


def _reverse_arrow(graph: SkeletonGraph) -> Tuple[Failures, int]:
    failures: Failures = []
    for arrow in graph.arrows:
        forward = arrow_k_matrix(graph, arrow.id)
        backward = arrow_k_matrix(graph, graph.reverse(arrow.id).id)
        if forward.entries != backward.entries:
            failures.append(
                {"arrow": arrow.id, "forward": forward.rows(), "backward": backward.rows()}
            )
    return failures, len(graph.arrows)


def _transpose_duality(graph: SkeletonGraph) -> Tuple[Failures, int]:
    failures: Failures = []
    for arrow in graph.arrows:
        if arrow_phi_step(graph, arrow.id) != arrow_k_matrix(graph, arrow.id).entries.T:
            failures.append({"arrow": arrow.id})
    return failures, len(graph.arrows)


def _frame_coherence(graph: SkeletonGraph, gallery_cap: int) -> Tuple[Failures, int]:
    result = phi_consistency_check(graph, gallery_cap)
    return result.failures, result.arrows_checked + result.galleries_checked


def _path_invariance(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    failures: Failures = []
    for index in range(config.path_samples):
        rng = rng_for(config.seed, f"{SUITE}:path", index)
        path = random_positive_path(graph, rng, config.max_path_length)
        gallery = minimal_galleries(graph, path.source, path.target, limit=1)[0]
        if f_along_path(graph, path).entries != f_along_path(graph, gallery).entries:
            failures.append(
                {
                    "index": index,
                    "path": list(path.arrows),
                    "source": path.source,
                    "gallery": list(gallery.arrows),
                }
            )
    return failures, config.path_samples


def _loop_triviality(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    failures: Failures = []
    for index in range(config.loop_samples):
        rng = rng_for(config.seed, f"{SUITE}:loop", index)
        loop = random_positive_loop(graph, rng, config.max_path_length)
        matrix = f_along_path(graph, loop)
        if not matrix.is_identity():
            failures.append(
                {"index": index, "loop": list(loop.arrows), "source": loop.source, "matrix": matrix.rows()}
            )
    return failures, config.loop_samples

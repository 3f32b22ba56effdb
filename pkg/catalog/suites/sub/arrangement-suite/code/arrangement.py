"""Arrangement suite - chamber enumeration, simpliciality and wall labels."""

from __future__ import annotations

import time
from typing import Any, Dict, List, Tuple

import networkx as nx

from stabcover.arrangement_core import Arrangement, is_simplicial, sign_vector_of
from stabcover.chamber_graph import SkeletonGraph, build_skeleton, label_mismatches
from stabcover.cli_io.reports import Failures, ReportBuilder, suite_inputs
from stabcover.cli_io.sampling import rng_for
from stabcover.cover_geometry import weyl_group
from stabcover.errors import SimplicialityError
from stabcover.ktheory_tracking import phi_of_chamber
from stabcover.observability.logger import ObservabilityLogger

SUITE = "arrangement"

# Rays of the two neighbours of C+ in the cD4 figure, keyed by crossed label.
CD4_NEIGHBOUR_RAYS = {1: ((-1, 1), (0, 1)), 2: ((1, 0), (2, -1))}


def run(payload: Dict[str, Any], context: Dict[str, Any]) -> Dict[str, Any]:
    """Check enumeration and labelling of one arrangement."""
    run_id = context.get("run_id", "suite-unknown")
    logger = ObservabilityLogger(run_id, "ArrangementSuite")
    start_time = time.time()

    arrangement, config = suite_inputs(payload)
    logger.log("start", {"arrangement": arrangement.name, "seed": config.seed})
    report = ReportBuilder(SUITE, arrangement, config, logger)

    if not is_simplicial(arrangement):
        report.run("simplicial", lambda: _simpliciality_failure(arrangement))
    else:
        graph = build_skeleton(arrangement)
        report.run("simplicial", lambda: _frames_unimodular(graph))
        report.run("chamber-signs", lambda: _interior_points(graph))
        report.run("distinct-labels", lambda: _labels_per_chamber(graph))
        report.run("opposite-labels", lambda: _opposite_labels(graph))
        report.run(
            "label-well-defined", lambda: _shuffled_orders(arrangement, config.seed)
        )
        if arrangement.cartan is not None:
            report.run("weyl-chamber-count", lambda: _weyl_count(graph))
        if arrangement.name == "cd4":
            report.run("cd4-figure", lambda: _cd4_figure(graph))
        elif arrangement.kind == "rank2":
            report.run("dihedral-chamber-count", lambda: _dihedral_count(graph))

    result = report.build()
    logger.log(
        "end",
        {"status": result["status"], "duration_ms": (time.time() - start_time) * 1000},
    )
    return result


def _simpliciality_failure(arrangement: Arrangement) -> Tuple[Failures, int]:
    try:
        build_skeleton(arrangement)
    except SimplicialityError as exc:
        return [exc.to_dict()], 1
    return [], 1


def _frames_unimodular(graph: SkeletonGraph) -> Tuple[Failures, int]:
    for chamber in graph.chambers:
        phi_of_chamber(chamber)
    return [], len(graph.chambers)


def _interior_points(graph: SkeletonGraph) -> Tuple[Failures, int]:
    failures: Failures = []
    seen = set()
    for chamber in graph.chambers:
        signs = sign_vector_of(graph.arrangement, chamber.interior_point())
        if signs != chamber.signs or chamber.signs in seen:
            failures.append(
                {"chamber": chamber.id, "signs": chamber.signs, "interior_signs": signs}
            )
        seen.add(chamber.signs)
    return failures, len(graph.chambers)


def _labels_per_chamber(graph: SkeletonGraph) -> Tuple[Failures, int]:
    failures: Failures = []
    expected = list(range(1, graph.rank + 1))
    for chamber in graph.chambers:
        labels = sorted(arrow.label for arrow in graph.outgoing(chamber.id))
        if labels != expected:
            failures.append({"chamber": chamber.id, "labels": labels})
    return failures, len(graph.chambers)


def _opposite_labels(graph: SkeletonGraph) -> Tuple[Failures, int]:
    failures: Failures = []
    for arrow in graph.arrows:
        opposite = graph.reverse(arrow.id)
        if opposite.label != arrow.label or opposite.hyperplane != arrow.hyperplane:
            failures.append(
                {"arrow": arrow.id, "label": arrow.label, "opposite_label": opposite.label}
            )
    return failures, len(graph.arrows)


def _shuffled_orders(arrangement: Arrangement, seed: int) -> Tuple[Failures, int]:
    rank = arrangement.rank
    orders: List[List[int]] = [list(range(rank, 0, -1))]
    for index in range(3):
        order = list(range(1, rank + 1))
        rng_for(seed, SUITE, index).shuffle(order)
        orders.append(order)
    failures: Failures = []
    for order in orders:
        mismatches = label_mismatches(arrangement, order)
        if mismatches:
            failures.append({"label_order": order, "arrows": [list(m) for m in mismatches[:5]]})
    return failures, len(orders)


def _weyl_count(graph: SkeletonGraph) -> Tuple[Failures, int]:
    order = weyl_group(graph.arrangement).order
    if order != len(graph.chambers):
        return [{"weyl_order": order, "chambers": len(graph.chambers)}], 1
    return [], 1


def _dihedral_count(graph: SkeletonGraph) -> Tuple[Failures, int]:
    expected = 2 * len(graph.arrangement.hyperplanes)
    if len(graph.chambers) != expected:
        return [{"expected": expected, "chambers": len(graph.chambers)}], 1
    return [], 1


def _cd4_figure(graph: SkeletonGraph) -> Tuple[Failures, int]:
    """Eight chambers on a cycle, labels alternating, and the figure's neighbour frames."""
    failures: Failures = []
    undirected = nx.Graph(graph.digraph().to_undirected())
    if len(graph.chambers) != 8 or not nx.is_isomorphic(undirected, nx.cycle_graph(8)):
        failures.append({"chambers": len(graph.chambers), "edges": undirected.number_of_edges()})
    for chamber in graph.chambers:
        labels = {
            graph.arrow_between(chamber.id, neighbour).label
            for neighbour in undirected.neighbors(chamber.id)
        }
        if labels != {1, 2}:
            failures.append({"chamber": chamber.id, "labels": sorted(labels)})
    for label, rays in CD4_NEIGHBOUR_RAYS.items():
        neighbour = graph.chamber(graph.arrow_from(0, label).target)
        if neighbour.rays != rays:
            failures.append(
                {"label": label, "rays": [list(ray) for ray in neighbour.rays]}
            )
    return failures, len(graph.chambers) + len(CD4_NEIGHBOUR_RAYS)

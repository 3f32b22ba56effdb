"""Cover suite - piece decomposition, deck transformations and Weyl orbits."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Any, Dict, Tuple

from stabcover.chamber_graph import SkeletonGraph, build_skeleton
from stabcover.cli_io.formats import point_to_json
from stabcover.cli_io.reports import Failures, ReportBuilder, suite_inputs
from stabcover.cli_io.sampling import (
    random_charge,
    random_generic_point,
    random_loop_word,
    random_word,
    rng_for,
)
from stabcover.config import Config
from stabcover.cover_geometry import (
    ComplexPoint,
    GaussianRational,
    StabilityPoint,
    apply_matrix,
    deck_act,
    in_H,
    in_piece,
    locate,
    make_stability_point,
    project_p,
    quotient_fiber_size,
    same_fiber,
    weyl_group,
    weyl_orbit,
)
from stabcover.deligne_groupoid import (
    GroupoidWord,
    Verdict,
    abelian_image,
    compose_words,
    groupoid_word_equal,
    make_word,
)
from stabcover.errors import CoverageError, DisjointnessError
from stabcover.ktheory_tracking import f_along_path
from stabcover.observability.logger import ObservabilityLogger

SUITE = "cover"


def run(payload: Dict[str, Any], context: Dict[str, Any]) -> Dict[str, Any]:
    """Verify the piece decomposition and the covering-map shadow."""
    run_id = context.get("run_id", "suite-unknown")
    logger = ObservabilityLogger(run_id, "CoverSuite")
    start_time = time.time()

    arrangement, config = suite_inputs(payload)
    logger.log("start", {"arrangement": arrangement.name, "seed": config.seed})
    report = ReportBuilder(SUITE, arrangement, config, logger)
    graph = build_skeleton(arrangement)

    report.run("coverage", lambda: _coverage(graph, config))
    report.run("disjointness", lambda: _disjointness(graph, config))
    report.run(
        "deck-transformations",
        lambda: _deck_transformations(graph, config),
        detail="sampled loops followed by a meridian, charges shifted by at most 1/100",
    )
    report.run("distinct-pieces-distinct-images", lambda: _distinct_sources(graph, config))
    if arrangement.cartan is not None:
        report.run("weyl-orbits", lambda: _weyl_orbits(graph, config))

    result = report.build()
    logger.log(
        "end",
        {"status": result["status"], "duration_ms": (time.time() - start_time) * 1000},
    )
    return result


def _sample_stability_point(graph: SkeletonGraph, config: Config, index: int) -> StabilityPoint:
    rng = rng_for(config.seed, f"{SUITE}:sigma", index)
    base = random_word(graph, rng, config.max_path_length).inverse()
    return make_stability_point(graph, base, random_charge(rng, graph.rank, config.sample_window))


def _coverage(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    failures: Failures = []
    for index in range(config.point_samples):
        rng = rng_for(config.seed, f"{SUITE}:point", index)
        z = random_generic_point(rng, graph.arrangement, config.sample_window)
        try:
            locate(graph, z)
        except (CoverageError, DisjointnessError) as exc:
            failures.append({"index": index, "point": point_to_json(z), **exc.counterexample})
    return failures, config.point_samples


def _disjointness(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    """Points pushed through one frame lie in no other piece."""
    failures: Failures = []
    for chamber in graph.chambers:
        frame = [list(row) for row in zip(*chamber.rays)]
        for index in range(config.piece_samples):
            rng = rng_for(config.seed, f"{SUITE}:piece:{chamber.id}", index)
            z = apply_matrix(frame, random_charge(rng, graph.rank, config.sample_window))
            owners = [other.id for other in graph.chambers if in_piece(z, other)]
            if owners != [chamber.id]:
                failures.append(
                    {"chamber": chamber.id, "index": index, "point": point_to_json(z), "pieces": owners}
                )
    return failures, len(graph.chambers) * config.piece_samples


def _nontrivial_loop(graph: SkeletonGraph, config: Config, index: int) -> GroupoidWord:
    """A sampled loop at C+ followed by a meridian of one wall of C+.

    The meridian is walked in the direction that keeps the abelian image
    of that wall away from zero, so the loop is never the identity.
    """
    rng = rng_for(config.seed, f"{SUITE}:loop", index)
    walk = random_loop_word(graph, rng, config.max_path_length)
    arrow = graph.arrow_from(0, rng.randint(1, graph.rank))
    meridian = make_word(graph, [(arrow.id, 1), (graph.reverse(arrow.id).id, 1)])
    if abelian_image(graph, walk)[arrow.hyperplane] < 0:
        meridian = meridian.inverse()
    return compose_words(walk, meridian)


def _perturb(rng: random.Random, charge: ComplexPoint) -> ComplexPoint:
    """Shift every coordinate by at most 1/100, keeping it in H."""
    shifted = []
    for value in charge:
        moved = value + GaussianRational(
            Fraction(rng.randint(-10, 10), 1000), Fraction(rng.randint(0, 10), 1000)
        )
        shifted.append(moved if in_H(moved) else value)
    return tuple(shifted)


def _deck_transformations(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    """Loops with a meridian move sigma within its fiber, freely and invisibly to K-theory.

    Both points are perturbed by the same small charge shift; their
    projections must still agree and stay in the piece of the base chamber.
    """
    failures: Failures = []
    for index in range(config.stability_samples):
        sigma = _sample_stability_point(graph, config, index)
        loop = _nontrivial_loop(graph, config, index)
        moved = deck_act(graph, loop, sigma)
        charge = _perturb(rng_for(config.seed, f"{SUITE}:nudge", index), sigma.charge)
        sigma, moved = StabilityPoint(sigma.base, charge), StabilityPoint(moved.base, charge)
        letters = [list(letter) for letter in loop.letters]

        image = project_p(graph, sigma)
        if project_p(graph, moved) != image or locate(graph, image).id != sigma.base.source:
            failures.append({"index": index, "loop": letters, "reason": "projection moved"})
            continue
        gamma = same_fiber(graph, moved, sigma)
        if gamma is None or abelian_image(graph, gamma) != abelian_image(graph, loop):
            failures.append({"index": index, "loop": letters, "reason": "loop not recovered"})
            continue
        verdict = groupoid_word_equal(graph, moved.base, sigma.base, config.budget)
        if verdict.verdict is not Verdict.DISTINCT:
            failures.append(
                {"index": index, "loop": letters, "reason": f"deck action fixed sigma: {verdict.reason}"}
            )
            continue
        if f_along_path(graph, moved.base).entries != f_along_path(graph, sigma.base).entries:
            failures.append({"index": index, "loop": letters, "reason": "K-matrix changed"})
    return failures, config.stability_samples


def _distinct_sources(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    """Equal charges based at different chambers never share a fiber."""
    failures: Failures = []
    checked = 0
    for index in range(config.stability_samples):
        first = _sample_stability_point(graph, config, index)
        rng = rng_for(config.seed, f"{SUITE}:other", index)
        other = random_word(graph, rng, config.max_path_length).inverse()
        if other.source == first.base.source:
            continue
        checked += 1
        second = StabilityPoint(other, first.charge)
        if same_fiber(graph, first, second) is not None:
            failures.append(
                {"index": index, "sources": [first.base.source, other.source]}
            )
    return failures, checked


def _weyl_orbits(graph: SkeletonGraph, config: Config) -> Tuple[Failures, int]:
    """|W| equals the chamber count, generic orbits are free and one real orbit meets every chamber."""
    group = weyl_group(graph.arrangement)
    failures: Failures = []
    if group.order != len(graph.chambers):
        failures.append({"weyl_order": group.order, "chambers": len(graph.chambers)})

    seeds = min(config.stability_samples, 10)
    for index in range(seeds):
        z = random_generic_point(
            rng_for(config.seed, f"{SUITE}:weyl", index), graph.arrangement, config.sample_window
        )
        size = quotient_fiber_size(group, z)
        if size != group.order:
            failures.append({"index": index, "point": point_to_json(z), "orbit": size})

    interior = tuple(
        GaussianRational(Fraction(value), Fraction(0)) for value in graph.chamber(0).interior_point()
    )
    hit = sorted(
        graph.by_signs(_real_signs(graph, point)).id for point in weyl_orbit(group, interior)
    )
    if hit != list(range(len(graph.chambers))):
        failures.append({"chambers_hit": len(set(hit)), "orbit": len(hit)})
    return failures, seeds + 2


def _real_signs(graph: SkeletonGraph, z: Tuple[GaussianRational, ...]) -> str:
    real = [value.re for value in z]
    return "".join(
        "+" if hyperplane.evaluate(real) > 0 else "-"
        for hyperplane in graph.arrangement.hyperplanes
    )
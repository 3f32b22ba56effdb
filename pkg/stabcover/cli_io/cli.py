"""``stabcover`` command line.

Every subcommand prints one JSON document on stdout (``graph --dot`` prints
DOT). Exit codes: 0 success, 1 rejected input, 2 a property of the
arrangement model failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

from pydantic import ValidationError

from stabcover.arrangement_core import (
    Arrangement,
    build_coxeter_arrangement,
    custom_arrangement,
    is_simplicial,
    named_arrangement,
    rank2_arrangement,
    restrict_to_flat,
)
from stabcover.chamber_graph import SkeletonGraph, build_skeleton, minimal_galleries
from stabcover.cli_io.formats import (
    SCHEMA_VERSION,
    ArrangementModel,
    ArrowModel,
    ChamberModel,
    MatrixModel,
    PathModel,
    PresentationModel,
    StabilityPointModel,
    WordModel,
    dumps,
    point_from_json,
    point_to_json,
    stability_point_to_model,
)
from stabcover.config import Config, load_config
from stabcover.cover_geometry import (
    StabilityPoint,
    deck_act,
    locate,
    make_stability_point,
    monodromy,
    project_p,
)
from stabcover.deligne_groupoid import (
    abelianization,
    groupoid_word_equal,
    make_word,
    vertex_presentation,
    word_from_path,
)
from stabcover.errors import PropertyFalsifiedError, StabCoverValidationError
from stabcover.ktheory_tracking import f_along_path
from stabcover.runners.suite_runner import invoke_suite

SAMPLE_FIELDS = (
    "path_samples",
    "loop_samples",
    "point_samples",
    "piece_samples",
    "pair_samples",
    "stability_samples",
    "monodromy_samples",
)

Command = Callable[[argparse.Namespace, Config], int]


def _emit(payload: Any) -> None:
    sys.stdout.write(dumps(payload) + "\n")


def _load_json(text: str) -> Any:
    """Inline JSON, or the contents of a file when ``text`` names one."""
    if text == "-":
        return json.load(sys.stdin)
    if text.lstrip()[:1] in ("[", "{"):
        return json.loads(text)
    with open(Path(text), "r", encoding="utf-8") as handle:
        return json.load(handle)


def _arrangement(args: argparse.Namespace, config: Config) -> Arrangement:
    """Resolve the last ``--arrangement`` as a name, a JSON file or inline JSON."""
    target = (args.arrangement or ["cd4"])[-1]
    if target == "-" or target.lstrip().startswith("{") or Path(target).suffix == ".json":
        return ArrangementModel.model_validate(_load_json(target)).to_arrangement(config.max_rank)
    return named_arrangement(target, max_rank=config.max_rank)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace, config: Config) -> int:
    if args.paper_cd4:
        arrangement = rank2_arrangement(4)
    elif args.coxeter:
        root_type, rank = args.coxeter
        arrangement = build_coxeter_arrangement(root_type, int(rank), max_rank=config.max_rank)
    elif args.rank2 is not None:
        normals = _load_json(args.normals) if args.normals else None
        arrangement = rank2_arrangement(args.rank2, normals)
    elif args.normals:
        arrangement = custom_arrangement(_load_json(args.normals), name=args.name or "")
    else:
        raise StabCoverValidationError(
            "gen needs --paper-cd4, --rank2 M, --coxeter TYPE N or --normals", field="gen"
        )
    if args.restrict:
        try:
            flat = [int(part) for part in args.restrict.split(",")]
        except ValueError as exc:
            raise StabCoverValidationError("--restrict takes indices like 0,2", field="flat") from exc
        arrangement = restrict_to_flat(arrangement, flat)
    _emit(ArrangementModel.from_arrangement(arrangement))
    return 0


def cmd_chambers(args: argparse.Namespace, config: Config) -> int:
    arrangement = _arrangement(args, config)
    graph = build_skeleton(arrangement)
    _emit(
        {
            "arrangement": arrangement.descriptor(),
            "simplicial": is_simplicial(arrangement),
            "count": len(graph.chambers),
            "chambers": [ChamberModel.from_chamber(c).model_dump() for c in graph.chambers],
        }
    )
    return 0


def cmd_graph(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    if args.dot:
        sys.stdout.write(graph.to_dot())
        return 0
    _emit(
        {
            "chambers": [ChamberModel.from_chamber(c).model_dump() for c in graph.chambers],
            "arrows": [ArrowModel.from_arrow(a).model_dump() for a in graph.arrows],
        }
    )
    return 0


def cmd_galleries(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    galleries = minimal_galleries(graph, args.first, args.second, limit=args.limit)
    _emit({"count": len(galleries), "galleries": [PathModel.from_path(g).model_dump() for g in galleries]})
    return 0


def cmd_word_eq(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    words = []
    for text in (args.first, args.second):
        model = WordModel.model_validate(_load_json(text))
        words.append(make_word(graph, model.letters, model.source))
    result = groupoid_word_equal(graph, words[0], words[1], config.budget)
    _emit(
        {
            "verdict": result.verdict.value,
            "reason": result.reason,
            "kmatrices": [MatrixModel.from_kmatrix(f_along_path(graph, w)).model_dump() for w in words],
        }
    )
    return 0


def cmd_kmatrix(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    data = _load_json(args.path)
    if isinstance(data, dict):
        model = WordModel.model_validate(data)
        word = make_word(graph, model.letters, model.source if model.source is not None else args.source)
    else:
        word = word_from_path(graph.path([int(arrow) for arrow in data], args.source))
    _emit(MatrixModel.from_kmatrix(f_along_path(graph, word)))
    return 0


def cmd_locate(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    chamber = locate(graph, point_from_json(_load_json(args.point)))
    _emit({"chamber": chamber.id, "signs": chamber.signs})
    return 0


def _stability_point(graph: SkeletonGraph, text: str) -> StabilityPoint:
    model = StabilityPointModel.model_validate(_load_json(text))
    base = make_word(graph, model.base.letters, model.base.source)
    return make_stability_point(graph, base, point_from_json(model.charge))


def cmd_project(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    sigma = _stability_point(graph, args.point)
    image = project_p(graph, sigma)
    _emit({"point": point_to_json(image), "chamber": sigma.base.source})
    return 0


def cmd_deck(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    sigma = _stability_point(graph, args.point)
    model = WordModel.model_validate(_load_json(args.loop))
    loop = make_word(graph, model.letters, model.source if model.source is not None else 0)
    _emit(stability_point_to_model(deck_act(graph, loop, sigma)))
    return 0


def cmd_monodromy(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    polyline = [point_from_json(vertex) for vertex in _load_json(args.polyline)]
    word, matrix = monodromy(
        graph, polyline, args.base, refinement_depth=config.refinement_depth
    )
    _emit({"word": WordModel.from_word(word).model_dump(), "matrix": MatrixModel.from_kmatrix(matrix).model_dump()})
    return 0


def cmd_presentation(args: argparse.Namespace, config: Config) -> int:
    graph = build_skeleton(_arrangement(args, config))
    presentation = vertex_presentation(graph)
    _emit(PresentationModel.from_presentation(presentation, abelianization(presentation)))
    return 0


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    payload: Dict[str, Any] = {"suite": args.suite, "config": config.model_dump()}
    if args.arrangement:
        payload["arrangements"] = list(args.arrangement)
    if args.include_slow:
        payload["include_slow"] = True
    result = invoke_suite("verify-harness", payload, {"run_id": f"verify-{config.seed}"})
    output: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "status": result["status"],
        "reports": result["reports"],
    }
    if config.include_timing:
        output["metadata"] = result.get("metadata", {})
    _emit(output)
    return 0 if result["status"] == "passed" else 2


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arrangement", action="append", help="Name (cd4, A3, I2(5), D4/0) or JSON file")
    common.add_argument("--config", help="YAML config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int, help="Override every sample count")
    common.add_argument("--budget", type=int, help="Word-problem closure budget")
    common.add_argument("--max-rank", dest="max_rank", type=int)
    common.add_argument("--include-timing", dest="include_timing", action="store_true", default=None)
    common.add_argument("--verbose", action="store_true", help="Mirror events to stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="stabcover")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add(name: str, func: Command, help_text: str) -> argparse.ArgumentParser:
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.set_defaults(func=func)
        return command

    gen = add("gen", cmd_gen, "Emit arrangement JSON")
    gen.add_argument("--rank2", type=int, nargs="?", const=4, metavar="M", help="m lines in the plane")
    gen.add_argument("--cd4", "--paper-cd4", dest="paper_cd4", action="store_true", help="Lines x, y, x+y, x+2y")
    gen.add_argument("--coxeter", nargs=2, metavar=("TYPE", "RANK"))
    gen.add_argument("--normals", help="JSON list of integer normals")
    gen.add_argument("--name", default="")
    gen.add_argument("--restrict", help="Comma separated hyperplane indices of the flat")

    add("chambers", cmd_chambers, "List chambers with sign vectors and frames")

    graph = add("graph", cmd_graph, "Skeleton graph as JSON or DOT")
    graph.add_argument("--dot", action="store_true")

    galleries = add("galleries", cmd_galleries, "Minimal galleries between two chambers")
    galleries.add_argument("first", type=int)
    galleries.add_argument("second", type=int)
    galleries.add_argument("--limit", type=int)

    word_eq = add("word-eq", cmd_word_eq, "Compare two groupoid words")
    word_eq.add_argument("first", help="Word JSON or file")
    word_eq.add_argument("second", help="Word JSON or file")

    kmatrix = add("kmatrix", cmd_kmatrix, "K-matrix of a path or word")
    kmatrix.add_argument("path", help="JSON arrow list or word")
    kmatrix.add_argument("--source", type=int, default=0)

    locate_cmd = add("locate", cmd_locate, "Piece containing a complex point")
    locate_cmd.add_argument("point", help="Complex point JSON or file")

    project = add("project", cmd_project, "Image of a stability point")
    project.add_argument("point", help="Stability point JSON or file")

    deck = add("deck", cmd_deck, "Act on a stability point by a loop at C+")
    deck.add_argument("loop", help="Word JSON or file")
    deck.add_argument("point", help="Stability point JSON or file")

    mono = add("monodromy", cmd_monodromy, "Lift a closed polyline")
    mono.add_argument("polyline", help="JSON list of complex points or file")
    mono.add_argument("--base", type=int)

    add("presentation", cmd_presentation, "Presentation and abelianization at C+")

    verify = add("verify", cmd_verify, "Run verification suites")
    verify.add_argument(
        "--suite",
        default="all",
        choices=["all", "arrangement", "ktheory", "groupoid", "cover", "monodromy"],
    )
    verify.add_argument(
        "--include-slow", dest="include_slow", action="store_true", help="Add D4 to the default arrangements"
    )
    return parser


def _resolve_config(args: argparse.Namespace) -> Config:
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "budget": args.budget,
        "max_rank": args.max_rank,
        "include_timing": args.include_timing,
    }
    if args.samples is not None:
        overrides.update({name: args.samples for name in SAMPLE_FIELDS})
    return load_config(args.config, overrides=overrides)


def _validation_diagnostic(exc: ValidationError) -> Dict[str, Any]:
    errors: List[Dict[str, Any]] = [
        {"field": ".".join(str(part) for part in error["loc"]), "message": error["msg"]}
        for error in exc.errors()
    ]
    return {
        "error_type": "ValidationError",
        "error_message": str(exc.errors()[0]["msg"]) if errors else str(exc),
        "field": errors[0]["field"] if errors else None,
        "errors": errors,
    }


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        os.environ["STABCOVER_LOG"] = "1"
    try:
        config = _resolve_config(args)
        return args.func(args, config)
    except ValidationError as exc:
        _emit(_validation_diagnostic(exc))
        return 1
    except json.JSONDecodeError as exc:
        _emit({"error_type": "JSONDecodeError", "error_message": str(exc), "field": "json"})
        return 1
    except StabCoverValidationError as exc:
        _emit(exc.to_dict())
        return 1
    except PropertyFalsifiedError as exc:
        _emit(exc.to_dict())
        return 2
    except (ValueError, OSError) as exc:
        _emit({"error_type": type(exc).__name__, "error_message": str(exc)})
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

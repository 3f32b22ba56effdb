"""Shared plumbing for verification suites: inputs, checks and report assembly."""

from __future__ import annotations

import time
from typing import Any, Callable, Dict, List, Sequence, Tuple, Union

from stabcover.arrangement_core import Arrangement, named_arrangement
from stabcover.cli_io.formats import ArrangementModel, CheckModel, VerifyReportModel
from stabcover.config import Config
from stabcover.errors import PropertyFalsifiedError
from stabcover.observability.logger import ObservabilityLogger

Failures = List[Dict[str, Any]]
Outcome = Union[Tuple[Failures, int], Tuple[Failures, int, int]]


def suite_inputs(payload: Dict[str, Any]) -> Tuple[Arrangement, Config]:
    """Resolve the arrangement (by name or JSON) and the config of a suite payload."""
    config = Config.model_validate(payload.get("config") or {})
    target = payload.get("arrangement")
    if isinstance(target, dict):
        arrangement = ArrangementModel.model_validate(target).to_arrangement(config.max_rank)
    elif isinstance(target, str):
        arrangement = named_arrangement(target, max_rank=config.max_rank)
    else:
        raise ValueError("Suite payload needs an 'arrangement' name or object")
    return arrangement, config


class ReportBuilder:
    """Collects check outcomes for one (suite, arrangement) run."""

    def __init__(
        self,
        suite: str,
        arrangement: Arrangement,
        config: Config,
        logger: ObservabilityLogger,
    ) -> None:
        self.suite = suite
        self.arrangement = arrangement
        self.config = config
        self.logger = logger
        self.checks: List[CheckModel] = []
        self._started = time.time()

    def add(
        self,
        prop: str,
        failures: Sequence[Dict[str, Any]],
        *,
        checked: int | None = None,
        detail: str | None = None,
        inconclusive: int = 0,
    ) -> None:
        status = "failed" if failures else "passed"
        if checked is not None:
            summary = f"{checked - len(failures)}/{checked} passed"
            if inconclusive:
                summary = f"{summary}, {inconclusive} inconclusive"
            detail = f"{summary}; {detail}" if detail else summary
        self.checks.append(
            CheckModel(
                property=prop,
                status=status,
                detail=detail,
                counterexample=dict(failures[0]) if failures else None,
            )
        )
        self.logger.log("check_complete", {"property": prop, "status": status})

    def run(self, prop: str, check: Callable[[], Outcome], detail: str | None = None) -> None:
        """Run a check returning (failures, cases checked[, inconclusive cases]).

        Falsified properties become failures. Inconclusive cases are not
        counted as checked.
        """
        try:
            outcome = check()
        except PropertyFalsifiedError as exc:
            outcome = ([exc.to_dict()], 1)
        failures, checked = outcome[0], outcome[1]
        inconclusive = outcome[2] if len(outcome) > 2 else 0  # type: ignore[misc]
        self.add(prop, failures, checked=checked, detail=detail, inconclusive=inconclusive)

    @property
    def passed(self) -> bool:
        return all(check.status == "passed" for check in self.checks)

    def build(self) -> Dict[str, Any]:
        report = VerifyReportModel(
            suite=self.suite,
            arrangement={
                **self.arrangement.descriptor(),
                "hyperplanes": len(self.arrangement.hyperplanes),
            },
            seed=self.config.seed,
            status="passed" if self.passed else "failed",
            checks=self.checks,
            timing=(
                {"duration_ms": (time.time() - self._started) * 1000}
                if self.config.include_timing
                else None
            ),
        )
        return report.model_dump(mode="json", exclude_none=True)

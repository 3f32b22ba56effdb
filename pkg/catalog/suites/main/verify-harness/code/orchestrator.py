"""Verify Harness - routes verification requests to the sub suites."""

from __future__ import annotations

import asyncio
import time
from datetime import datetime, timezone
from typing import Any, Dict, List, Sequence, Tuple

from stabcover.observability.logger import ObservabilityLogger
from stabcover.runners.suite_runner import invoke_suite

# Canonical report order.
SUITES: Dict[str, str] = {
    "arrangement": "arrangement-suite",
    "ktheory": "ktheory-suite",
    "groupoid": "groupoid-suite",
    "cover": "cover-suite",
    "monodromy": "monodromy-suite",
}

DEFAULT_ARRANGEMENTS: Tuple[str, ...] = (
    "cd4",
    "A1",
    "A2",
    "A3",
    "I2(3)",
    "I2(4)",
    "I2(5)",
    "I2(6)",
    "I2(8)",
)
SLOW_ARRANGEMENTS: Tuple[str, ...] = ("D4",)

Job = Tuple[str, str, Any]


def _select_suites(name: str) -> List[str]:
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise ValueError(f"Unknown suite: {name}")
    return [name]


def _jobs(payload: Dict[str, Any]) -> List[Job]:
    suites = _select_suites(payload.get("suite", "all"))
    arrangements: Sequence[Any] = payload.get("arrangements") or (
        DEFAULT_ARRANGEMENTS + SLOW_ARRANGEMENTS if payload.get("include_slow") else DEFAULT_ARRANGEMENTS
    )
    return [(suite, SUITES[suite], arrangement) for suite in suites for arrangement in arrangements]


async def _run_jobs(
    jobs: Sequence[Job],
    config: Dict[str, Any],
    context: Dict[str, Any],
    logger: ObservabilityLogger,
) -> List[Dict[str, Any]]:
    """Run every (suite, arrangement) job in a worker thread; results keep job order."""

    async def one(suite: str, slug: str, arrangement: Any) -> Dict[str, Any]:
        logger.log("delegation_start", {"suite": slug, "arrangement": arrangement})
        report = await asyncio.to_thread(
            invoke_suite,
            slug,
            {"arrangement": arrangement, "config": config},
            {"run_id": context.get("run_id", "verify-unknown"), "parent": "verify-harness"},
        )
        logger.log(
            "delegation_complete",
            {"suite": slug, "arrangement": arrangement, "status": report["status"]},
        )
        return report

    return list(await asyncio.gather(*(one(*job) for job in jobs)))


def run(payload: Dict[str, Any], context: Dict[str, Any]) -> Dict[str, Any]:
    """Main entry point for the verify harness."""
    run_id = context.get("run_id", "verify-unknown")
    logger = ObservabilityLogger(run_id, "VerifyHarness")

    start_time = time.time()
    logger.log("start", {"suite": payload.get("suite", "all")})

    try:
        jobs = _jobs(payload)
        reports = asyncio.run(_run_jobs(jobs, payload.get("config") or {}, context, logger))
        status = "passed" if all(report["status"] == "passed" for report in reports) else "failed"
        result: Dict[str, Any] = {
            "response_type": "verify_result",
            "status": status,
            "reports": reports,
        }

        duration_ms = (time.time() - start_time) * 1000
        logger.log("end", {"status": status, "duration_ms": duration_ms, "reports": len(reports)})
        context["suites_invoked"] = sorted({slug for _, slug, _ in jobs})
        timestamp = (
            datetime.now(timezone.utc)
            .isoformat(timespec="milliseconds")
            .replace("+00:00", "Z")
        )
        result["metadata"] = {
            "run_id": run_id,
            "timestamp": timestamp,
            "suites_invoked": context["suites_invoked"],
            "duration_ms": duration_ms,
        }
        return result

    except Exception as exc:
        duration_ms = (time.time() - start_time) * 1000
        logger.log(
            "error",
            {
                "error_type": type(exc).__name__,
                "error_message": str(exc),
                "duration_ms": duration_ms,
            },
        )
        raise

"""
Tests for VerifyHarness
"""

from __future__ import annotations

from typing import Any, Dict

import pytest
import pytest_mock

from catalog.suites.main.verify_harness.code.orchestrator import (
    DEFAULT_ARRANGEMENTS,
    SLOW_ARRANGEMENTS,
    _jobs,
    _run_jobs,
    run,
)
from stabcover.observability.logger import ObservabilityLogger
from stabcover.runners.suite_runner import invoke_suite, registered_suites

PATCH_TARGET = "catalog.suites.main.verify_harness.code.orchestrator.invoke_suite"


def _report(slug: str, payload: Dict[str, Any], status: str = "passed") -> Dict[str, Any]:
    return {
        "schema_version": 1,
        "suite": slug.removesuffix("-suite"),
        "arrangement": {"name": payload["arrangement"]},
        "seed": 0,
        "status": status,
        "checks": [],
    }


class TestVerifyHarness:
    """Test suite for VerifyHarness"""

    def test_all_suites_on_defaults(self, mocker: pytest_mock.plugin.MockerFixture) -> None:
        """Every suite runs on every default arrangement"""
        mock_invoke_suite = mocker.patch(PATCH_TARGET)
        mock_invoke_suite.side_effect = lambda slug, payload, context: _report(slug, payload)

        context: Dict[str, Any] = {"run_id": "test-verify-001"}
        result = run({"suite": "all", "config": {"seed": 0}}, context)

        assert result["response_type"] == "verify_result"
        assert result["status"] == "passed"
        assert len(result["reports"]) == 5 * len(DEFAULT_ARRANGEMENTS)
        assert mock_invoke_suite.call_count == 5 * len(DEFAULT_ARRANGEMENTS)
        assert result["metadata"]["run_id"] == "test-verify-001"
        assert result["metadata"]["timestamp"].endswith("Z")
        assert result["metadata"]["suites_invoked"] == [
            "arrangement-suite",
            "cover-suite",
            "groupoid-suite",
            "ktheory-suite",
            "monodromy-suite",
        ]

    def test_reports_keep_job_order(self, mocker: pytest_mock.plugin.MockerFixture) -> None:
        """Reports follow suite order, then arrangement order"""
        mock_invoke_suite = mocker.patch(PATCH_TARGET)
        mock_invoke_suite.side_effect = lambda slug, payload, context: _report(slug, payload)

        result = run(
            {"suite": "all", "arrangements": ["A2", "cd4"]},
            {"run_id": "test-verify-002"},
        )

        pairs = [(r["suite"], r["arrangement"]["name"]) for r in result["reports"]]
        assert pairs[:4] == [
            ("arrangement", "A2"),
            ("arrangement", "cd4"),
            ("ktheory", "A2"),
            ("ktheory", "cd4"),
        ]

    def test_single_failure_fails_the_run(self, mocker: pytest_mock.plugin.MockerFixture) -> None:
        """One failed report makes the result fail"""
        mock_invoke_suite = mocker.patch(PATCH_TARGET)
        mock_invoke_suite.side_effect = lambda slug, payload, context: _report(
            slug, payload, "failed" if payload["arrangement"] == "A3" else "passed"
        )

        result = run({"suite": "groupoid"}, {"run_id": "test-verify-003"})

        assert result["status"] == "failed"
        assert [r["status"] for r in result["reports"]].count("failed") == 1

    def test_config_forwarded(self, mocker: pytest_mock.plugin.MockerFixture) -> None:
        """Sub suites receive the arrangement and the config"""
        mock_invoke_suite = mocker.patch(PATCH_TARGET)
        mock_invoke_suite.side_effect = lambda slug, payload, context: _report(slug, payload)

        run(
            {"suite": "cover", "arrangements": ["cd4"], "config": {"seed": 9}},
            {"run_id": "test-verify-004"},
        )

        slug, payload, context = mock_invoke_suite.call_args.args
        assert slug == "cover-suite"
        assert payload == {"arrangement": "cd4", "config": {"seed": 9}}
        assert context == {"run_id": "test-verify-004", "parent": "verify-harness"}

    def test_error_is_reraised(self, mocker: pytest_mock.plugin.MockerFixture) -> None:
        """Suite errors propagate after being logged"""
        mock_invoke_suite = mocker.patch(PATCH_TARGET)
        mock_invoke_suite.side_effect = RuntimeError("suite crashed")

        with pytest.raises(RuntimeError, match="suite crashed"):
            run({"suite": "ktheory", "arrangements": ["cd4"]}, {"run_id": "test-verify-005"})

    def test_unknown_suite(self) -> None:
        """Unknown suite names are rejected"""
        with pytest.raises(ValueError, match="Unknown suite"):
            run({"suite": "homology"}, {"run_id": "test-verify-006"})

    def test_slow_tier_is_opt_in(self) -> None:
        """D4 is added only when asked for"""
        default = {arrangement for _, _, arrangement in _jobs({"suite": "arrangement"})}
        slow = {
            arrangement
            for _, _, arrangement in _jobs({"suite": "arrangement", "include_slow": True})
        }
        assert "D4" not in default
        assert slow == default | set(SLOW_ARRANGEMENTS)

    @pytest.mark.asyncio
    async def test_run_jobs_logs_delegations(self, mocker: pytest_mock.plugin.MockerFixture) -> None:
        """Each job logs a start and a completion event"""
        mock_invoke_suite = mocker.patch(PATCH_TARGET)
        mock_invoke_suite.side_effect = lambda slug, payload, context: _report(slug, payload)
        logger = ObservabilityLogger("test-verify-007", "VerifyHarness", mirror=False)

        jobs = [("ktheory", "ktheory-suite", "cd4"), ("cover", "cover-suite", "A2")]
        reports = await _run_jobs(jobs, {}, {"run_id": "test-verify-007"}, logger)

        assert [r["suite"] for r in reports] == ["ktheory", "cover"]
        assert len(logger.named("delegation_start")) == 2
        assert {e["suite"] for e in logger.named("delegation_complete")} == {
            "ktheory-suite",
            "cover-suite",
        }


class TestRegistry:
    """Suite discovery through the catalog registry"""

    def test_registered_suites(self) -> None:
        """One main orchestrator and five sub suites"""
        assert registered_suites("main") == ["verify-harness"]
        assert set(registered_suites("sub")) == {
            "arrangement-suite",
            "ktheory-suite",
            "groupoid-suite",
            "cover-suite",
            "monodromy-suite",
        }

    def test_unknown_slug(self) -> None:
        """invoke_suite rejects unregistered slugs"""
        with pytest.raises(ValueError, match="Unknown suite slug"):
            invoke_suite("homology-suite", {}, {})

    @pytest.mark.integration
    def test_end_to_end_single_suite(self, small_config: Dict[str, Any]) -> None:
        """The orchestrator loads a real sub suite through the registry"""
        result = invoke_suite(
            "verify-harness",
            {"suite": "arrangement", "arrangements": ["I2(5)"], "config": small_config},
            {"run_id": "test-verify-008"},
        )
        assert result["status"] == "passed"
        assert result["reports"][0]["arrangement"]["name"] == "I2(5)"

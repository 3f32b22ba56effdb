"""
Tests for KTheorySuite
"""

from __future__ import annotations

from typing import Any, Dict

import pytest_mock

from catalog.suites.sub.ktheory_suite.code.ktheory import run
from stabcover.errors import StructureError


class TestKTheorySuite:
    """Test suite for KTheorySuite"""

    def test_cd4_passes(self, small_config: Dict[str, Any]) -> None:
        """Every wall-crossing property holds on cd4"""
        result = run({"arrangement": "cd4", "config": small_config}, {"run_id": "test-kt-001"})

        assert result["status"] == "passed", result["checks"]
        assert [check["property"] for check in result["checks"]] == [
            "exchange-numbers",
            "involution",
            "reverse-arrow",
            "transpose-duality",
            "frame-coherence",
            "path-invariance",
            "loop-triviality",
        ]
        path_check = result["checks"][5]
        assert path_check["detail"] == "10/10 passed"

    def test_a3_passes(self, small_config: Dict[str, Any]) -> None:
        """A3 passes with sampled paths"""
        result = run({"arrangement": "A3", "config": small_config}, {"run_id": "test-kt-002"})
        assert result["status"] == "passed", result["checks"]

    def test_structure_error_becomes_failure(
        self, small_config: Dict[str, Any], mocker: pytest_mock.plugin.MockerFixture
    ) -> None:
        """A falsified frame is reported, not raised"""
        mocker.patch(
            "catalog.suites.sub.ktheory_suite.code.ktheory.phi_consistency_check",
            side_effect=StructureError("frame mismatch", {"chamber": 2}),
        )
        result = run({"arrangement": "cd4", "config": small_config}, {"run_id": "test-kt-003"})

        assert result["status"] == "failed"
        check = next(c for c in result["checks"] if c["property"] == "frame-coherence")
        assert check["counterexample"]["error_type"] == "StructureError"
        assert check["counterexample"]["counterexample"] == {"chamber": 2}

    def test_timing_is_optional(self, small_config: Dict[str, Any]) -> None:
        """include_timing adds a timing block"""
        config = {**small_config, "include_timing": True}
        result = run({"arrangement": "A1", "config": config}, {"run_id": "test-kt-004"})
        assert "duration_ms" in result["timing"]

"""
Tests for ObservabilityLogger
"""

from __future__ import annotations

import pytest

from stabcover.observability.logger import ObservabilityLogger


class TestObservabilityLogger:
    """Event recording and stderr mirroring"""

    def test_records_events(self) -> None:
        """Events are kept in order and filtered by name"""
        logger = ObservabilityLogger("run-1", "Test", mirror=False)
        logger.log("start", {"arrangement": "cd4"})
        logger.log("check_complete", {"property": "coverage"})
        logger.log("check_complete", {"property": "disjointness"})

        assert [name for name, _ in logger.events] == ["start", "check_complete", "check_complete"]
        assert [p["property"] for p in logger.named("check_complete")] == ["coverage", "disjointness"]
        assert logger.named("end") == []

    def test_mirror_follows_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """STABCOVER_LOG switches mirroring on"""
        monkeypatch.setenv("STABCOVER_LOG", "1")
        assert ObservabilityLogger("run-2").mirror is True
        monkeypatch.delenv("STABCOVER_LOG")
        assert ObservabilityLogger("run-2").mirror is False

    def test_mirror_never_touches_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Mirrored events go to stderr only"""
        logger = ObservabilityLogger("run-3", "Test", mirror=True)
        logger.log("end", {"status": "passed"})
        captured = capsys.readouterr()
        assert captured.out == ""

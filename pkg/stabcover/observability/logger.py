"""Event logger shared by the engine, the suites and the CLI."""

from __future__ import annotations

import os
from typing import Any, Dict, List, Tuple

from rich.console import Console
from rich.markup import escape

_STDERR = Console(stderr=True, highlight=False)


def _mirror_enabled() -> bool:
    return os.getenv("STABCOVER_LOG", "").lower() in ("1", "true", "yes")


class ObservabilityLogger:
    """Records events for inspection and optionally mirrors them to stderr."""

    def __init__(
        self,
        run_id: str,
        component: str | None = None,
        *,
        mirror: bool | None = None,
    ) -> None:
        self.run_id = run_id
        self.component = component or ""
        self.mirror = _mirror_enabled() if mirror is None else mirror
        self.events: List[Tuple[str, Dict[str, Any]]] = []

    def log(self, event: str, payload: Dict[str, Any] | None = None) -> None:
        """Record an event; stdout is never touched."""
        record = payload or {}
        self.events.append((event, record))
        if self.mirror:
            details = " ".join(f"{key}={value}" for key, value in record.items())
            _STDERR.print(
                f"[dim]{self.run_id}[/dim] [bold]{self.component}[/bold] "
                f"{escape(event)} {escape(details)}".rstrip(),
                markup=True,
            )

    def named(self, event: str) -> List[Dict[str, Any]]:
        """Return the payloads of every recorded event with the given name."""
        return [payload for name, payload in self.events if name == event]

"""Observability utilities for StabCover."""

from .logger import ObservabilityLogger

__all__ = ["ObservabilityLogger"]

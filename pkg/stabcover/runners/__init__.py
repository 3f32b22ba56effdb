"""Runner utilities for StabCover verification suites."""

from .suite_runner import invoke_suite, registered_suites

__all__ = ["invoke_suite", "registered_suites"]

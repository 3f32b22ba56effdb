"""Command line, JSON formats, seeded samplers and report assembly."""

from stabcover.cli_io.cli import main

__all__ = ["main"]

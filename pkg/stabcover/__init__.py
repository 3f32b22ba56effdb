"""StabCover: exact arrangement, groupoid and stability-cover computations."""

__all__ = ["cli_io", "observability", "runners"]

__version__ = "0.1.0"

"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """An edge-list stream could not be parsed; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class CountOverflowError(OverflowError):
    """An accumulated count exceeded the 128-bit ceiling."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (e.g. a per-vertex halving was not exact)."""


class ConfigError(ValueError):
    """A runtime configuration is invalid or violates a resource requirement."""


class GuardError(ValueError):
    """A brute-force oracle was asked to run beyond its size guard."""

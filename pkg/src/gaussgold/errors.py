"""Shared exception types.

The CLI maps these onto exit codes: ConfigError -> 2, everything else
that signals a failed verification -> 1.
"""

from __future__ import annotations

__all__ = ["CapacityError", "ResolutionError", "InvariantViolation", "ConfigError"]


class CapacityError(Exception):
    """A requested table or grid would exceed the configured memory budget."""

    def __init__(self, message: str, required_bytes: int | None = None):
        super().__init__(message)
        self.required_bytes = required_bytes


class ResolutionError(Exception):
    """A frequency grid is too coarse to resolve the requested windows."""

    def __init__(self, message: str, required_m: int | None = None):
        super().__init__(message)
        self.required_m = required_m


class InvariantViolation(Exception):
    """A named internal identity failed an exact or toleranced check."""

    def __init__(self, name: str, detail: str = ""):
        super().__init__(f"{name}: {detail}" if detail else name)
        self.name = name


class ConfigError(Exception):
    """Invalid configuration file, flag value, or parameter combination."""

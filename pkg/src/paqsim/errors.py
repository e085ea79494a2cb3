"""Exception hierarchy shared across the package.

Exit codes used by the CLI: 2 for parse errors, 3 for configuration
errors, 4 for numeric failures.
"""

from __future__ import annotations


class PaqsimError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(PaqsimError):
    """Invalid parameter, range, or program configuration."""

    exit_code = 3


class ParseError(PaqsimError):
    """Malformed .qc/.qtl source. Always carries line and column (1-based)."""

    exit_code = 2

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class NumericError(PaqsimError):
    """Numeric failure, e.g. post-selecting on a zero-norm branch."""

    exit_code = 4


class MemoryCapacityError(ConfigError):
    """Attempt to store a third photon in one ensemble."""


class EmptyMemoryError(ConfigError):
    """Attempt to read a memory holding no g2 excitation."""


class GatePlacementError(ConfigError):
    """CP pair farther apart than the blockade reach."""


class PostSelectionError(NumericError):
    """All amplitude was lost; conditioning on success is impossible."""

"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class ArdlKitError(Exception):
    """Base class for every error raised by ardlkit."""


class SchemaError(ArdlKitError):
    """A required column, variable or config key is absent or unknown."""


class ParseError(ArdlKitError):
    """A cell could not be parsed as a number."""


class IntegrityError(ArdlKitError):
    """Duplicate or non-consecutive years, or internal gaps."""


class DomainError(ArdlKitError):
    """A transform was applied outside its mathematical domain."""


class DegreesOfFreedomError(ArdlKitError):
    """The effective sample is too short for the requested specification."""


class CollinearityError(ArdlKitError):
    """The design matrix is numerically rank deficient."""

    def __init__(self, message: str, columns: list[str] | None = None) -> None:
        super().__init__(message)
        self.columns = list(columns or [])


class IncompatibleFitsError(ArdlKitError):
    """Two fits cannot be compared (different samples or dependent variables)."""


class ParameterError(ArdlKitError):
    """An argument is outside its admissible range."""


class SelectionError(ArdlKitError):
    """No candidate in a lag grid could be estimated."""


class NearUnitRootError(ArdlKitError):
    """The long-run multiplier 1 - sum(a_i) is numerically zero."""

    def __init__(self, message: str, ar_sum: float) -> None:
        super().__init__(message)
        self.ar_sum = ar_sum


class StabilityError(ArdlKitError):
    """The recursive regression became singular."""

    def __init__(self, message: str, index: int) -> None:
        super().__init__(message)
        self.index = index


class DegenerateInputError(ArdlKitError):
    """Input has no variation (e.g. a constant residual vector)."""


class ConfigError(ArdlKitError):
    """Run configuration is malformed."""

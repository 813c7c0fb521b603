"""Exception types raised across the package.

Validation-style failures subclass :class:`TricolorValidationError` so the CLI
can map them to a single exit code; search exhaustion has its own branch.
"""

from __future__ import annotations


class TricolorError(Exception):
    """Base class for every error raised by tricolor."""


class TricolorValidationError(TricolorError, ValueError):
    """Bad input: wrong parameters, malformed lattice, mismatched lengths."""


# lattice
class DimensionNotDivisibleBy3(TricolorValidationError):
    pass


class InvalidDistanceParameter(TricolorValidationError):
    pass


class NotASphere(TricolorValidationError):
    pass


class UnknownSite(TricolorValidationError, KeyError):
    pass


class InvalidLattice(TricolorValidationError):
    pass


# pauli
class LengthMismatch(TricolorValidationError):
    pass


class UnknownPlaquette(TricolorValidationError, KeyError):
    pass


class SearchBudgetExceeded(TricolorError):
    """An exhaustive search would visit more nodes than the configured budget."""


# code
class ColorMismatch(TricolorValidationError):
    pass


class OpenPathOnClosedSurface(TricolorValidationError):
    pass


class WrongBorderColor(TricolorValidationError):
    pass


class NotATorus(TricolorValidationError):
    pass


class NotATriangle(TricolorValidationError):
    pass


class BadJunction(TricolorValidationError):
    pass


# tableau
class IndexOutOfRange(TricolorValidationError, IndexError):
    pass


class PhaseNotRepresentable(TricolorError):
    """A conjugated word picked up a factor of +-i, which a signed word cannot carry."""


# decode
class TableTooLarge(TricolorValidationError):
    pass

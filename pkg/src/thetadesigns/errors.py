"""Exception hierarchy shared by every engine.

Everything raised on purpose derives from :class:`DomainError`, which the
command line maps to exit status 1.
"""

from __future__ import annotations


class DomainError(Exception):
    """Input is well formed but outside the domain of an operation."""


class CutoffError(DomainError):
    """An exponent beyond a series cutoff was requested."""


class UnsupportedShadowError(DomainError):
    """Shadow of a word whose theta_2 exponent is not a multiple of 4."""


class ParseError(DomainError):
    """A form expression or a norm list failed to parse."""


class ValidationError(DomainError):
    """A lattice failed its integrality or definiteness checks."""


class ResourceLimitError(DomainError):
    """A predicted shell size exceeds the configured ceiling."""


class DataError(DomainError):
    """Catalog data is missing or inconsistent."""

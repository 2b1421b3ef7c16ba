"""Exception types shared across the package.

Every error that can escape the public API is one of these, so callers (and
the CLI) can map failures to exit codes without string matching.
"""

from __future__ import annotations


class GentypeError(Exception):
    """Base class for all package errors."""


class InputInvalid(GentypeError):
    """Malformed user input (bad JSON, non-even gram matrix, bad descriptor)."""


class CapExceeded(GentypeError):
    """An enumeration (group elements, subgroups, automorphisms) passed its cap."""


class NotIsotropic(GentypeError):
    """A subgroup or vector required to be isotropic is not."""


class NormClassMismatch(GentypeError):
    """A discriminant class does not carry the norm required by the construction."""


class SignatureMismatch(GentypeError):
    """Finite form signature and lattice rank disagree mod 8."""


class NonIntegralDimension(GentypeError):
    """An exact dimension formula returned a non-integer (internal inconsistency)."""


class NotQuasiCyclicWhenRequired(GentypeError):
    """The discriminant form fails the quasi-cyclic hypothesis of an exact step."""


class ParityViolation(GentypeError):
    """Weight/character parity constraint violated (no such modular forms exist)."""


class NonRationalVolume(GentypeError):
    """The closed volume formula did not reduce to a rational number."""


class PreconditionUnverified(GentypeError):
    """A hypothesis (e.g. a hyperbolic-plane witness) is absent and not implied."""

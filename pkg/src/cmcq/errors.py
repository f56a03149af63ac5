"""Exception types raised across the package."""

from __future__ import annotations


class CMCError(ValueError):
    """Base class for input and validation errors."""


class DimensionMismatch(CMCError):
    pass


class StateValidationError(CMCError):
    """A matrix failed density-matrix validation.

    ``violations`` lists every violated invariant as ``(name, magnitude)``.
    """

    def __init__(self, violations: list[tuple[str, float]]):
        self.violations = list(violations)
        msg = "; ".join(f"{name} (magnitude {mag:.3e})" for name, mag in self.violations)
        super().__init__(msg)


class NotHermitian(StateValidationError):
    pass


class TraceNotOne(StateValidationError):
    pass


class NotPSD(StateValidationError):
    pass


class NotPure(CMCError):
    pass


class ZeroProbability(CMCError):
    pass


class NotSubnormalized(CMCError):
    pass


class UnsupportedDimension(CMCError):
    pass


class BadSchmidt(CMCError):
    pass

"""Exception hierarchy shared by every kvacert module."""

from __future__ import annotations


class KvacertError(Exception):
    """Base class for all package errors."""


class DomainError(KvacertError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedComparison(KvacertError, ValueError):
    """A surd comparison would need more than two distinct irrational radicals."""


class PellError(KvacertError, ValueError):
    """The Pell equation is degenerate (perfect-square coefficient)."""


class LatticeError(KvacertError, ValueError):
    """Intersection of classes living on different blow-ups or models."""


class HypothesisError(KvacertError, ValueError):
    """A gate or bound was invoked on inputs violating its hypotheses."""


class CapError(KvacertError, RuntimeError):
    """A search cap is too small, or none can be derived, for an exhaustive run."""

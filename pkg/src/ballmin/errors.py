"""Shared exception taxonomy.

Every error raised on purpose by this package derives from BallminError so the
command line layer can map failures to exit codes without guessing.
"""

from __future__ import annotations


class BallminError(Exception):
    """Base class for all deliberate failures."""


class UsageError(BallminError):
    """Bad input or configuration supplied by the caller."""


class CheckFailure(BallminError):
    """A verification check ran to completion and failed."""


class InternalError(BallminError):
    """An invariant of the package itself was violated."""


class MalformedComplex(UsageError):
    """Triangle soup is not a surface complex; message names the offending simplex."""


class InvalidCurve(UsageError):
    """Curve fails the preconditions of the requested surgery move."""


class UnknownComponent(UsageError):
    """Component index outside the classified range."""


class BudgetExceeded(UsageError):
    """Enumeration or iteration exceeded its configured budget."""


class NotAnAction(UsageError):
    """Supplied permutation is not a rigid simplicial action of the stated order."""


class WildFixedSet(UsageError):
    """Some nontrivial power of the action fixes more than isolated vertices."""


class DomainError(UsageError):
    """Numeric argument outside the callable's domain."""


class ConfigError(UsageError):
    """Configuration value missing, unknown, or out of range."""


class QuadratureNonConvergence(BallminError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class RegimeError(UsageError):
    """Parameters violate the guard rails of the selected regime."""


class DegenerateTriangle(BallminError):
    """Triangle below the area floor during gradient evaluation."""


class TopologyDrift(BallminError):
    """Mesh topology changed where it was required to be conserved."""


class NonConvergence(BallminError):
    """Iterative solve exhausted its budget before reaching tolerance."""


class CollapseDetected(BallminError):
    """Neck girth fell below the collapse floor."""


class NoBracket(BallminError):
    """Root bracketing failed within the allowed expansion budget."""


class ClosedComponentPresent(UsageError):
    """Operation requires every component to have nonempty boundary."""

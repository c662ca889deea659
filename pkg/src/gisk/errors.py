"""Exception hierarchy shared across the package."""


class GiskError(Exception):
    """Base class for all domain errors raised by gisk."""


class NoRealRoot(GiskError):
    """The polynomial has no real root."""


class DimensionMismatch(GiskError):
    """Coefficient vector and eigenvalue vector sizes disagree."""


class IndexOutOfRange(GiskError):
    """An exclusion/partial-derivative index is invalid."""


class NonpositiveEigenvalue(GiskError):
    """An operation requiring all eigenvalues > 0 received one that is not."""


class DegenerateDenominator(GiskError):
    """Level-set completion denominator is too close to zero."""


class NotStrictlyStable(GiskError):
    """Operation requires a strictly stable coefficient vector."""


class NotStable(GiskError):
    """Operation requires a coefficient vector in the stability closure."""


class InvalidRootTuple(GiskError):
    """Root tuple violates the ordering constraints of the root polyhedron."""


class NotSubsolution(GiskError):
    """The supplied eigenvalue vector is not a pointwise C-subsolution."""


class IntegrabilityViolation(GiskError):
    """Topological (integrability) constraint residual is too large."""


class DegeneratePhase(GiskError):
    """Phase angle makes the top symmetric-function coefficient vanish."""

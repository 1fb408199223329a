"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of the function."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a non-removable singularity."""


class OutOfRegimeError(DomainError):
    """Input valid in general but outside the regime this routine covers."""


class SupportError(DomainError):
    """Spacetime point outside the support of the requested kernel."""


class SingularLocusError(SupportError):
    """Pointwise kernel evaluation on or past its singular locus."""


class UnsupportedDimensionError(DomainError):
    """Spatial dimension not covered by this solver."""


class GridError(ValueError):
    """Finite-difference grid cannot safely contain the problem."""


class CoverageError(ValueError):
    """Sampled field does not cover the support needed for a norm."""


class AccuracyError(RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best available estimate so callers can degrade gracefully.
    """

    def __init__(self, message, best=None, est_err=None):
        super().__init__(message)
        self.best = best
        self.est_err = est_err

"""Exception and warning classes raised by :mod:`wavecoh`."""


class WavecohError(Exception):
    """Base class for all errors raised by this package."""


class NonConvergence(WavecohError):
    """Root refinement did not reach the residual target at this precision."""


class IllConditioned(WavecohError):
    """Two distinct poles (or roots) are closer than the zero tolerance."""


class InconsistentEigenvalue(WavecohError):
    """The leftover row of the coefficient recurrence does not vanish."""


class ResidueObstruction(WavecohError):
    """A simple-pole coefficient survived reduction: the input is not in R."""


class SingularBasis(WavecohError):
    """The classes of 1/p^2 and f/p^2 are numerically dependent."""


class QuadratureFailure(WavecohError):
    """Contour quadrature could not reach its error target."""


class ReconstructionMismatch(WavecohError):
    """Taylor data of the dual solution is not proportional to p."""


class ConditionWarning(UserWarning):
    """An eigenvalue is nearly degenerate (small derivative of det(A + lambda))."""

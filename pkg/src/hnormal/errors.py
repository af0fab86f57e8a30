"""Exception and warning classes raised across the package."""

from numpy.linalg import LinAlgError


class HNormalError(LinAlgError):
    pass


class SingularInput(HNormalError):
    pass


class SchurConvergenceError(HNormalError):
    """The QR algorithm failed to converge.

    ``info`` is the LAPACK index of the first eigenvalue that failed to
    converge.
    """

    def __init__(self, message, info=None):
        super().__init__(message)
        self.info = info


class NegativeRealEigenvalue(HNormalError):
    def __init__(self, eigenvalues):
        self.eigenvalues = list(eigenvalues)
        super().__init__(
            "matrix has negative real eigenvalues: %s"
            % ", ".join("%.6g%+.6gj" % (z.real, z.imag) for z in self.eigenvalues))


class InternalClassificationConflict(NegativeRealEigenvalue):
    pass


class SpectraOverlap(HNormalError):
    def __init__(self, separation):
        self.separation = separation
        super().__init__("spectra are not separated (min distance %.3e)" % separation)


class RankDeficient(HNormalError):
    pass


class ResidualError(HNormalError):
    """Base for certification failures; carries the violated residual."""

    def __init__(self, message, residual):
        super().__init__("%s (residual %.3e)" % (message, residual))
        self.residual = residual


class NotInvolutory(ResidualError):
    pass


class NotHNormal(ResidualError):
    pass


class NotHNeutral(ResidualError):
    pass


class NotHSelfadjoint(ResidualError):
    pass


class PhiMismatch(ResidualError):
    pass


class NotHyperbolic(HNormalError):
    pass


class NegSpaceNotHyperbolic(NotHyperbolic):
    pass


class DegenerateGram(HNormalError):
    pass


class NoSimilarity(HNormalError):
    pass


class IndexTooLarge(ValueError):
    pass


class UnsupportedInstance(ValueError):
    pass


class HyperbolicityBreakdown(RuntimeWarning):
    """A negative eigenspace that must be hyperbolic was not found to be."""

"""Exception and warning types raised across the package."""


class SymplecticError(ValueError):
    """Base class for input validation failures."""


class DimensionError(SymplecticError):
    """Array has the wrong shape (odd phase-space dimension, mismatched n, ...)."""


class NotSymplecticError(SymplecticError):
    """Matrix fails S beta S^T = beta within tolerance."""


class ValidationError(SymplecticError):
    """Input violates a structural requirement (symmetry, unitarity, definiteness)."""


class SingularityError(SymplecticError):
    """Matrix is singular or too ill-conditioned to invert safely."""


class DomainError(SymplecticError):
    """Parameter outside its allowed domain."""


class MobiusSingularityError(SingularityError):
    """C Lambda + D is singular: the transformed state leaves the (u, v) chart."""


class DegenerateKernelError(SingularityError):
    """det B vanishes, so the position-space kernel is distribution valued."""


class ConsistencyError(RuntimeError):
    """A decomposition failed its own reconstruction check."""


class PrecisionWarning(UserWarning):
    """Quadrature grid is estimated to be too coarse for the requested accuracy."""


class UnphysicalWarning(UserWarning):
    """Variance matrix violates the uncertainty condition where a physical one is expected."""

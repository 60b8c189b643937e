"""Numerical toolkit for the real symplectic group and Gaussian states.

The main entry points are re-exported here; submodules hold the rest.
"""

from .core import (
    DEFAULT_TOL,
    SymplecticMatrix,
    as_symplectic,
    beta,
    eigenvalue_symmetry_report,
    embed_free_propagation,
    embed_gl,
    embed_lens,
    embed_scaling,
    embed_unitary,
    from_complex_form,
    is_symplectic,
    omega,
    to_complex_form,
)
from .decompositions import (
    decompose,
    euler_decompose,
    iwasawa_decompose,
    polar_decompose,
    pre_iwasawa_decompose,
)
from .errors import (
    ConsistencyError,
    DegenerateKernelError,
    DimensionError,
    DomainError,
    MobiusSingularityError,
    NotSymplecticError,
    PrecisionWarning,
    SingularityError,
    SymplecticError,
    UnphysicalWarning,
    ValidationError,
)
from .gaussian import (
    GaussianPureState,
    GaussianWigner,
    mobius_transform,
    state_symplectic,
    variance_of_state,
    wigner_of_state,
)
from .geometry import Subspace, classify, symplectic_complement, symplectic_rank
from .lie import LieAlgebraElement, exponentiate
from .variance import (
    VarianceMatrix,
    family_membership,
    is_physical,
    squeezing_report,
    transform,
    williamson,
)

__version__ = "0.1.0"

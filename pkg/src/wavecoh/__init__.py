"""Wave polynomials and twisted cohomology for the cubic weight ``exp(x^3/3 + a x)``."""

from .errors import (ConditionWarning, IllConditioned, InconsistentEigenvalue, NonConvergence,
                     QuadratureFailure, ReconstructionMismatch, ResidueObstruction,
                     SingularBasis, WavecohError)
from .poly import CubicWeight, Polynomial
from .pfrac import PoleExpansion, apply_D, partial_fractions
from .scalars import DEFAULT_CONTEXT, GaussianRational, PrecisionContext
from .spectra import (SpectralDatum, WaveOperator, char_poly, spectral_data, spectral_datum,
                      spectrum, wave_polynomial)
from .cohomology import (CohomologyClass, check_in_R, reduce_to_linear, verify_certificate,
                         wave_basis_coordinates)

__version__ = "0.1.0"

__all__ = [
    "ConditionWarning", "IllConditioned", "InconsistentEigenvalue", "NonConvergence",
    "QuadratureFailure", "ReconstructionMismatch", "ResidueObstruction", "SingularBasis",
    "WavecohError", "CubicWeight", "Polynomial", "PoleExpansion", "apply_D", "partial_fractions",
    "DEFAULT_CONTEXT", "GaussianRational", "PrecisionContext", "SpectralDatum", "WaveOperator",
    "char_poly", "spectral_data", "spectral_datum", "spectrum", "wave_polynomial",
    "CohomologyClass", "check_in_R", "reduce_to_linear", "verify_certificate",
    "wave_basis_coordinates",
]

"""solvext: rationally extended harmonic-oscillator and Morse potentials.

The ``models`` layer builds the closed forms (nodeless deforming polynomials,
potentials, eigenpolynomials, exact spectra); ``spectral`` certifies them with
finite-difference diagonalization and adaptive quadrature; ``polycore`` is the
shared polynomial engine; ``cli`` exposes everything as a command-line tool.
"""

from .polycore import (
    MAX_FAMILY_DEGREE,
    Polynomial,
    compose_neg_square,
    hermite,
    hermite_imag_even,
    laguerre,
    laguerre_identity_residuals,
    laguerre_reflect,
    poly_diff,
    poly_eval,
    poly_mul,
    relative_residual,
)
from .models import (
    AdmissibilityError,
    DeformingFunction,
    Eigenstate,
    ModelFamily,
    ModelSpec,
    MorseWeights,
    bound_levels,
    construction_residuals,
    continuum_threshold,
    deforming_function,
    eigenstate,
    energy,
    p_polynomial,
    p_polynomial_closed,
    potential,
    prepotential_w0,
    validate_spec,
    wavefunction_raw,
    weight_function,
    xi_ode_residual,
)
from .spectral import (
    Grid,
    QuadratureError,
    TridiagonalOperator,
    VerificationReport,
    compare_spectrum,
    default_grid,
    default_residual_grid,
    discretize,
    eigen_lowest,
    gram_matrix,
    normalization,
    quadrature,
    schrodinger_residual,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_FAMILY_DEGREE",
    "Polynomial",
    "compose_neg_square",
    "hermite",
    "hermite_imag_even",
    "laguerre",
    "laguerre_identity_residuals",
    "laguerre_reflect",
    "poly_diff",
    "poly_eval",
    "poly_mul",
    "relative_residual",
    "AdmissibilityError",
    "DeformingFunction",
    "Eigenstate",
    "ModelFamily",
    "ModelSpec",
    "MorseWeights",
    "bound_levels",
    "construction_residuals",
    "continuum_threshold",
    "deforming_function",
    "eigenstate",
    "energy",
    "p_polynomial",
    "p_polynomial_closed",
    "potential",
    "prepotential_w0",
    "validate_spec",
    "wavefunction_raw",
    "weight_function",
    "xi_ode_residual",
    "Grid",
    "QuadratureError",
    "TridiagonalOperator",
    "VerificationReport",
    "compare_spectrum",
    "default_grid",
    "default_residual_grid",
    "discretize",
    "eigen_lowest",
    "gram_matrix",
    "normalization",
    "quadrature",
    "schrodinger_residual",
    "__version__",
]

"""Exact polarization formulas for multilinear maps and multipolynomials."""
from .core import (
    ArityError,
    BoundsError,
    ContractError,
    MultipolarError,
    ShapeError,
    enumerate_row_sum_matrices,
    enumerate_sign_vectors,
    epsilon_block,
    matrix_sets_M_and_D,
    signed_power_sum,
)
from .multilinear import (
    HomogeneousPolynomial,
    MultilinearMap,
    hat,
    polarization_formula,
    polarize,
    power_eval,
    symmetrize,
    verify_leibniz,
)
from .multipoly import (
    Multipolynomial,
    PsiWitness,
    basis_coefficients,
    diag_eval,
    diagonal_embed,
    entire_polarization_rhs,
    expand_combination,
    in_image_psi,
    multipolarize,
    psi,
    remainder,
    slot_polynomial,
)

__version__ = "0.1.0"

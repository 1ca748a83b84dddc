"""Exact computation of Legendre-symbol determinants and the odd integers c_p."""

from legdet.exactla import (
    DetResult,
    IntMatrix,
    adjugate_full,
    adjugate_quadratic_form,
    det,
    det_bareiss,
    det_multimodular,
    pfaffian,
    rank1_update_det,
)
from legdet.families import (
    CpRecord,
    LinearPoly,
    TheoremViolation,
    D_poly,
    build_A,
    build_ST_matrix,
    build_u,
    compute_cp,
    liwu_poly,
)
from legdet.numtheory import (
    PrimeContext,
    class_number_from_sum,
    class_number_oracle,
    derangement_count,
    half_range_character_sum,
    integer_sqrt_exact,
    jacobi_symbol,
    jacobsthal_sum,
    legendre_symbol,
    prime_context,
    primes_in_range,
    two_squares_decomposition,
)
from legdet.verify import ScanRow, VerificationReport, scan_conjecture

__version__ = "0.1.0"

"""Density operators, their density factors, and the co-isometries relating them."""

from .density_model import (
    DensityFactor,
    DensityOperator,
    Ensemble,
    density_from_ensemble,
    density_from_factor,
    ensemble_from_factor,
    factor_from_ensemble,
    gram,
    is_orthonormal_factor,
    random_ensemble,
    rank_of,
)
from .equivalence import (
    CoIsometry,
    dft_coisometry,
    expand_factor,
    random_coisometry,
    relate_to_minimum,
    same_density,
    spectral_data_of_minimum,
    verify_coisometry,
)
from .factorization import assert_same_minimum, minimum_df_from_eid, minimum_df_from_svd
from .linalg_core import (
    DEFAULT_TOL,
    SpectralData,
    adjoint,
    hermitian_eid,
    matmul,
    numeric_rank,
    qr_orthonormal_rows,
    svd,
)

__version__ = "0.1.0"

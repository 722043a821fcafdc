"""Decay-exponent spectra of block-tridiagonal operators with twisted
boundary conditions: Anderson-model builders, transfer-matrix exponents,
determinant duality checks and Jensen-average counting curves."""

from ._core import (
    BlockModel,
    BoundaryFactor,
    NumericalError,
    build_anderson,
    counting_curve,
    dense_eigenvalues,
    disorder_values,
    duality_residual,
    extract_breakpoints,
    hatano_exponent,
    hatano_p,
    jensen_average,
    log_abs_det_shifted,
    lyapunov_oracle,
    q_matrix,
    realize_h,
    realize_h_balanced,
    sum_positive_exponents,
    transfer_exponents,
    transfer_matrix,
    zero_disorder_spectrum,
    __version__,
)

__all__ = [
    "BlockModel",
    "BoundaryFactor",
    "NumericalError",
    "build_anderson",
    "counting_curve",
    "dense_eigenvalues",
    "disorder_values",
    "duality_residual",
    "extract_breakpoints",
    "hatano_exponent",
    "hatano_p",
    "jensen_average",
    "log_abs_det_shifted",
    "lyapunov_oracle",
    "q_matrix",
    "realize_h",
    "realize_h_balanced",
    "sum_positive_exponents",
    "transfer_exponents",
    "transfer_matrix",
    "zero_disorder_spectrum",
    "__version__",
]

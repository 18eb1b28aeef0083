"""Quadratic stochastic processes: cubic stochastic matrices, the process
families built on Maksimov products, verification sweeps, and simplex
dynamics. Thin wrapper over the compiled _qsp module."""

from ._qsp import (  # noqa: F401
    ConfigError,
    ConstructionError,
    CubicMatrix,
    CubicProcessFamily,
    EvalError,
    ParseError,
    SquareMatrix,
    SquareProcessFamily,
    TimeFunction,
    TwinFamily,
    basis,
    contract_second,
    is_square_stochastic,
    is_stochastic,
    kce_residual_cubic,
    kce_residual_square,
    list_families,
    make_family,
    mul_maksimov0,
    mul_maksimov_a,
    slice_first,
    slice_second,
    step_linear_12,
    step_quadratic,
    trajectory,
    twin_report,
    verify_nine_equations,
)

__all__ = [
    "ConfigError",
    "ConstructionError",
    "CubicMatrix",
    "CubicProcessFamily",
    "EvalError",
    "ParseError",
    "SquareMatrix",
    "SquareProcessFamily",
    "TimeFunction",
    "TwinFamily",
    "basis",
    "contract_second",
    "is_square_stochastic",
    "is_stochastic",
    "kce_residual_cubic",
    "kce_residual_square",
    "list_families",
    "make_family",
    "mul_maksimov0",
    "mul_maksimov_a",
    "slice_first",
    "slice_second",
    "step_linear_12",
    "step_quadratic",
    "trajectory",
    "twin_report",
    "verify_nine_equations",
]

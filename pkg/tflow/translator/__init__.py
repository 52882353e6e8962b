from tflow.translator.continuation import (
    TRACE_COLUMNS,
    TranslatorResult,
    continuation,
    continuation_from_config,
    extrapolate_to_zero,
    is_monotone,
)
from tflow.translator.eps_solver import EpsSolution, solve_eps_bvp
from tflow.translator.integral import lambda_integral
from tflow.translator.radial_oracle import RadialOracleResult, radial_oracle

__all__ = [
    'EpsSolution',
    'RadialOracleResult',
    'TRACE_COLUMNS',
    'TranslatorResult',
    'continuation',
    'continuation_from_config',
    'extrapolate_to_zero',
    'is_monotone',
    'lambda_integral',
    'radial_oracle',
    'solve_eps_bvp',
]

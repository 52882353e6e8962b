from tflow.diagnostics.checks import (
    barrier_function,
    boundary_geodesic_curvature,
    check_compatibility,
    check_drift_bounded,
    check_gradient_bound,
    check_hypotheses,
    check_lambda_odd,
    check_lambda_sign,
    check_osc_contraction,
    check_translator_convergence,
    check_uniqueness,
    check_ut_max_principle,
    running_max_growth,
    shared_snapshots,
    ut_max_principle,
)
from tflow.diagnostics.convergence import estimate_order
from tflow.diagnostics.report import CHECK_NAMES, DiagnosticsReport, build_report

__all__ = [
    'CHECK_NAMES',
    'DiagnosticsReport',
    'barrier_function',
    'boundary_geodesic_curvature',
    'build_report',
    'check_compatibility',
    'check_drift_bounded',
    'check_gradient_bound',
    'check_hypotheses',
    'check_lambda_odd',
    'check_lambda_sign',
    'check_osc_contraction',
    'check_translator_convergence',
    'check_uniqueness',
    'check_ut_max_principle',
    'estimate_order',
    'running_max_growth',
    'shared_snapshots',
    'ut_max_principle',
]

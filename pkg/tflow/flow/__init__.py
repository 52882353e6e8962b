from tflow.flow.flow_service import FlowResult, FlowService, MonitorSeries, Snapshot, lambda_from_mean_fit, run_flow
from tflow.flow.operators import divergence_curvature, enforce_neumann, mean_curvature, rhs
from tflow.flow.stepper import FlowState, RK2Stepper, dt_max, local_dt, step

__all__ = [
    'FlowResult',
    'FlowService',
    'FlowState',
    'MonitorSeries',
    'RK2Stepper',
    'Snapshot',
    'divergence_curvature',
    'dt_max',
    'enforce_neumann',
    'lambda_from_mean_fit',
    'local_dt',
    'mean_curvature',
    'rhs',
    'run_flow',
    'step',
]

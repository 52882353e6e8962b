from tflow.geometry.descriptor import MetricDescriptor, make_descriptor
from tflow.geometry.tensors import (
    PolarMetricFields,
    christoffel_at,
    christoffel_from,
    flow_coeffs,
    gauss_curvature_at,
    grad_norm_sq,
    inverse_metric_at,
    metric_at,
    metric_derivatives_at,
    polar_metric_fields,
)

__all__ = [
    'MetricDescriptor',
    'PolarMetricFields',
    'christoffel_at',
    'christoffel_from',
    'flow_coeffs',
    'gauss_curvature_at',
    'grad_norm_sq',
    'inverse_metric_at',
    'make_descriptor',
    'metric_at',
    'metric_derivatives_at',
    'polar_metric_fields',
]

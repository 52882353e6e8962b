from tflow.mesh.calculus import (
    covariant_hessian,
    domain_mean,
    grad_norm,
    integrate_boundary,
    integrate_domain,
    normal_derivative,
    oscillation_of_difference,
    partials,
    weighted_mean,
)
from tflow.mesh.disk_mesh import DiskMesh, build_mesh
from tflow.mesh.fields import ScalarField, require_same_mesh

__all__ = [
    'DiskMesh',
    'ScalarField',
    'build_mesh',
    'covariant_hessian',
    'domain_mean',
    'grad_norm',
    'integrate_boundary',
    'integrate_domain',
    'normal_derivative',
    'oscillation_of_difference',
    'partials',
    'require_same_mesh',
    'weighted_mean',
]

from typing import Union

import numpy as np

from tflow.exceptions import MeshMismatchError
from tflow.mesh import stencils
from tflow.mesh.disk_mesh import DiskMesh
from tflow.mesh.fields import ScalarField, require_same_mesh


def partials(f: ScalarField) -> np.ndarray:
    "(d_r f, d_theta f) at every node, shape (n_r + 1, n_theta, 2)"
    return stencils.gradient(f.values, f.mesh)


def covariant_hessian(f: ScalarField) -> np.ndarray:
    "D_i D_j f at interior nodes, shape (n_r, n_theta, 2, 2)"
    return stencils.hessian(f.values, f.mesh)


def normal_derivative(f: ScalarField) -> np.ndarray:
    "D_nu f along the boundary ring (nu points inward)"
    return stencils.normal_derivative(f.values, f.mesh)


def grad_norm(f: ScalarField) -> np.ndarray:
    "|Df| at every node"
    grad = partials(f)
    sigma_inv = f.mesh.metric.sigma_inv
    norm_sq = np.einsum('rti,rij,rtj->rt', grad, sigma_inv, grad)
    return np.sqrt(np.maximum(norm_sq, 0.0))


def _boundary_values(mesh: DiskMesh, f: Union[ScalarField, np.ndarray]) -> np.ndarray:
    if isinstance(f, ScalarField):
        if f.mesh is not mesh and f.tag != mesh.tag:
            raise MeshMismatchError(f'field on {f.tag} integrated over {mesh.tag}')
        return f.boundary
    values = np.asarray(f, dtype=float)
    if values.shape != (mesh.n_theta,):
        raise MeshMismatchError(f'boundary array of shape {values.shape} does not fit {mesh.tag}')
    return values


def integrate_domain(f: ScalarField) -> float:
    "Sum of f times the area weight over interior nodes"
    return float(np.sum(f.interior * f.mesh.area_weights))


def integrate_boundary(f: Union[ScalarField, np.ndarray], mesh: DiskMesh = None) -> float:
    "Sum of f times the length weight over boundary nodes; plain boundary arrays need their mesh"
    if mesh is None:
        if not isinstance(f, ScalarField):
            raise MeshMismatchError('a boundary array needs its mesh')
        mesh = f.mesh
    return float(np.sum(_boundary_values(mesh, f) * mesh.boundary_weights))


def domain_mean(f: ScalarField) -> float:
    return integrate_domain(f) / f.mesh.area


def weighted_mean(values: np.ndarray, mesh: DiskMesh) -> float:
    "Area-weighted mean of interior-node values"
    return float(np.sum(values[: mesh.n_r] * mesh.area_weights) / mesh.area)


def oscillation_of_difference(first: ScalarField, second: ScalarField) -> float:
    require_same_mesh(first, second)
    diff = first.values - second.values
    return float(diff.max() - diff.min())

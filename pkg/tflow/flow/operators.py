from typing import Tuple

import numpy as np

from tflow.exceptions import NonFiniteFieldError
from tflow.mesh import ScalarField, require_same_mesh, stencils
from tflow.mesh.disk_mesh import DiskMesh


def _flow_parts(U: np.ndarray, mesh: DiskMesh) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = mesh.n_r
    c = mesh.coefficients
    u_r = stencils.radial_first(U, mesh)
    u_t = stencils.angular_first(U, mesh)
    p, q = u_r[:n], u_t[:n]

    h_rr = stencils.radial_second(U, mesh) - c.gamma_r_rr * p - c.gamma_t_rr * q
    h_rt = stencils.angular_first(p, mesh) - c.gamma_r_rt * p - c.gamma_t_rt * q
    h_tt = stencils.angular_second(U[:n], mesh) - c.gamma_r_tt * p - c.gamma_t_tt * q

    # Du raised by sigma
    a = c.s_rr * p + c.s_rt * q
    b = c.s_rt * p + c.s_tt * q
    norm_sq = p * a + q * b
    trace = c.s_rr * h_rr + 2.0 * c.s_rt * h_rt + c.s_tt * h_tt
    along = a * a * h_rr + 2.0 * a * b * h_rt + b * b * h_tt
    values = trace - along / (1.0 + norm_sq)
    if not np.all(np.isfinite(values)):
        raise NonFiniteFieldError(f'flow operator produced non-finite values on {mesh.tag}')
    return values, u_r, u_t


def flow_rate_values(U: np.ndarray, mesh: DiskMesh) -> np.ndarray:
    "g^ij(Du) D_i D_j u at interior nodes, shape (n_r, n_theta)"
    return _flow_parts(U, mesh)[0]


def flow_rhs_values(U: np.ndarray, mesh: DiskMesh) -> Tuple[np.ndarray, np.ndarray]:
    """
    g^ij(Du) D_i D_j u at interior nodes, g^ij = sigma^ij - D^i u D^j u / (1 + |Du|^2).

    Returns the interior values (n_r, n_theta) and the node gradient (n_r + 1, n_theta, 2).
    """
    values, u_r, u_t = _flow_parts(U, mesh)
    return values, np.stack([u_r, u_t], axis=-1)


def with_boundary(interior: np.ndarray, mesh: DiskMesh) -> np.ndarray:
    "Appends the boundary ring extrapolated from the interior (for monitors only)"
    return np.vstack([interior, stencils.extrapolate_to_boundary(interior, mesh)[None, :]])


def rhs(u: ScalarField) -> ScalarField:
    "The right-hand side of the flow; boundary ring extrapolated from the interior"
    values, _ = flow_rhs_values(u.values, u.mesh)
    return u.with_values(with_boundary(values, u.mesh))


def _v(grad: np.ndarray, mesh: DiskMesh) -> np.ndarray:
    norm_sq = np.einsum('rti,rij,rtj->rt', grad, mesh.metric.sigma_inv, grad)
    return np.sqrt(1.0 + np.maximum(norm_sq, 0.0))


def mean_curvature(u: ScalarField) -> ScalarField:
    """
    H = rhs(u) / v with v = sqrt(1 + |Du|^2), oriented so that g^ij D_i D_j u = H v
    (H = div(Du / v), positive for graphs curving upward).
    """
    values, grad = flow_rhs_values(u.values, u.mesh)
    full = with_boundary(values, u.mesh)
    return u.with_values(full / _v(grad, u.mesh))


def divergence_curvature(u: ScalarField) -> ScalarField:
    """
    div(Du / v) = (1 / sqrt(sigma)) d_i (sqrt(sigma) sigma^ij d_j u / v) evaluated in divergence form.

    Agrees with mean_curvature up to discretization error.
    """
    mesh = u.mesh
    n = mesh.n_r
    grad = stencils.gradient(u.values, mesh)
    v = _v(grad, mesh)
    f = mesh.metric.f[:, None]
    flux_r = f * mesh.metric.sigma_inv[:, 0, 0][:, None] * grad[..., 0] / v
    flux_theta = f * mesh.metric.sigma_inv[:, 1, 1][:, None] * grad[..., 1] / v
    div = (stencils.radial_first(flux_r, mesh)[:n] + stencils.angular_first(flux_theta[:n], mesh)) / f[:n]
    if not np.all(np.isfinite(div)):
        raise NonFiniteFieldError(f'divergence form produced non-finite values on {mesh.tag}')
    return u.with_values(with_boundary(div, mesh))


def enforce_neumann_values(U: np.ndarray, mesh: DiskMesh, phi_boundary: np.ndarray) -> np.ndarray:
    "Overwrites the boundary ring of U in place so that D_nu U = phi"
    U[mesh.n_r] = stencils.boundary_value_for(U, mesh, phi_boundary)
    return U


def enforce_neumann(u: ScalarField, phi: ScalarField) -> ScalarField:
    require_same_mesh(u, phi)
    values = u.copy_values()
    enforce_neumann_values(values, u.mesh, phi.boundary)
    return u.with_values(values)

"""
Finite-difference kernels on raw node arrays of shape (n_r + 1, n_theta).

Interior rows use central differences; the innermost ring pairs (r_0, theta) with (r_0, theta + pi),
the last interior ring and the boundary ring use one-sided second-order formulas that reach the
boundary node half a cell away.
"""

import numpy as np

from tflow.exceptions import DegenerateStencilError


def _opposite(row: np.ndarray) -> np.ndarray:
    return np.roll(row, -(row.shape[-1] // 2), axis=-1)


def radial_first(U: np.ndarray, mesh) -> np.ndarray:
    "d_r on every row, boundary ring included"
    n, dr = mesh.n_r, mesh.dr
    out = np.empty_like(U)
    out[1 : n - 1] = (U[2:n] - U[0 : n - 2]) / (2.0 * dr)
    out[0] = (U[1] - _opposite(U[0])) / (2.0 * dr)
    # nodes at -dr, 0, +dr/2; differences keep constants exact
    out[n - 1] = (4.0 * (U[n] - U[n - 1]) - (U[n - 2] - U[n - 1])) / (3.0 * dr)
    out[n] = boundary_radial(U, mesh)
    return out


def boundary_radial(U: np.ndarray, mesh) -> np.ndarray:
    "d_r at r = R from the boundary node and the two innermost neighbours (at -dr/2 and -3dr/2)"
    n = mesh.n_r
    return (8.0 * (U[n] - U[n - 1]) + (U[n - 2] - U[n - 1])) / (3.0 * mesh.dr)


def radial_second(U: np.ndarray, mesh) -> np.ndarray:
    n, dr = mesh.n_r, mesh.dr
    out = np.empty((n, U.shape[1]))
    out[1 : n - 1] = ((U[2:n] - U[1 : n - 1]) - (U[1 : n - 1] - U[0 : n - 2])) / dr**2
    out[0] = ((U[1] - U[0]) - (U[0] - _opposite(U[0]))) / dr**2
    # nodes at -2dr, -dr, 0, +dr/2
    out[n - 1] = (
        16.0 * (U[n] - U[n - 1]) + 10.0 * (U[n - 2] - U[n - 1]) - (U[n - 3] - U[n - 1])
    ) / (5.0 * dr**2)
    return out


def angular_first(U: np.ndarray, mesh) -> np.ndarray:
    return (np.roll(U, -1, axis=-1) - np.roll(U, 1, axis=-1)) / (2.0 * mesh.dtheta)


def angular_second(U: np.ndarray, mesh) -> np.ndarray:
    return ((np.roll(U, -1, axis=-1) - U) + (np.roll(U, 1, axis=-1) - U)) / mesh.dtheta**2


def gradient(U: np.ndarray, mesh) -> np.ndarray:
    "(d_r U, d_theta U) on every node, shape (n_r + 1, n_theta, 2)"
    return np.stack([radial_first(U, mesh), angular_first(U, mesh)], axis=-1)


def second_partials(U: np.ndarray, mesh, grad: np.ndarray = None) -> np.ndarray:
    "d_i d_j U on interior nodes, shape (n_r, n_theta, 2, 2)"
    n = mesh.n_r
    if grad is None:
        grad = gradient(U, mesh)
    out = np.empty((n, U.shape[1], 2, 2))
    out[..., 0, 0] = radial_second(U, mesh)
    out[..., 1, 1] = angular_second(U[:n], mesh)
    mixed = angular_first(grad[:n, :, 0], mesh)
    out[..., 0, 1] = mixed
    out[..., 1, 0] = mixed
    return out


def hessian(U: np.ndarray, mesh, grad: np.ndarray = None) -> np.ndarray:
    "Covariant Hessian D_i D_j U = d_i d_j U - Gamma^k_ij d_k U on interior nodes"
    n = mesh.n_r
    if grad is None:
        grad = gradient(U, mesh)
    second = second_partials(U, mesh, grad)
    gamma = mesh.metric.gamma[:n]
    return second - np.einsum('rkij,rtk->rtij', gamma, grad[:n])


def normal_derivative(U: np.ndarray, mesh) -> np.ndarray:
    "D_nu U = nu^i d_i U on the boundary ring"
    n = mesh.n_r
    d_theta = angular_first(U[n], mesh)
    return mesh.normal[:, 0] * boundary_radial(U, mesh) + mesh.normal[:, 1] * d_theta


def boundary_value_for(U: np.ndarray, mesh, phi_boundary: np.ndarray) -> np.ndarray:
    """
    Solves the one-sided boundary stencil for the boundary values that make D_nu U = phi.
    """
    n = mesh.n_r
    nu_r = mesh.normal[:, 0]
    if np.any(nu_r == 0.0):
        raise DegenerateStencilError('inward normal has no radial component')
    tangential = mesh.normal[:, 1] * angular_first(U[n], mesh)
    return U[n - 1] + (3.0 * mesh.dr * (phi_boundary - tangential) / nu_r - (U[n - 2] - U[n - 1])) / 8.0


def extrapolate_to_boundary(V: np.ndarray, mesh) -> np.ndarray:
    "Quadratic extrapolation of interior rows n-3, n-2, n-1 to r = R"
    n = mesh.n_r
    return 1.875 * V[n - 1] - 1.25 * V[n - 2] + 0.375 * V[n - 3]

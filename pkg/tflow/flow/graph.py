"""
Geometry of the graph {(x, u(x))} in M x R with the product metric, evaluated at interior nodes.

Vectors in M x R are written in the frame (d_1, d_2, d_s) of the chart plus the vertical coordinate.
"""

import numpy as np

from tflow.mesh import ScalarField, stencils


def _pieces(u: ScalarField):
    mesh = u.mesh
    n = mesh.n_r
    grad = stencils.gradient(u.values, mesh)[:n]
    sigma = mesh.metric.sigma[:n]
    sigma_inv = mesh.metric.sigma_inv[:n]
    raised = np.einsum('rij,rtj->rti', sigma_inv, grad)
    norm_sq = np.maximum(np.einsum('rti,rti->rt', grad, raised), 0.0)
    return grad, sigma, sigma_inv, raised, norm_sq


def induced_metric(u: ScalarField) -> np.ndarray:
    "g_ij = sigma_ij + D_i u D_j u"
    grad, sigma, _, _, _ = _pieces(u)
    return sigma[:, None] + np.einsum('rti,rtj->rtij', grad, grad)


def induced_inverse(u: ScalarField) -> np.ndarray:
    "g^ij = sigma^ij - D^i u D^j u / (1 + |Du|^2)"
    _, _, sigma_inv, raised, norm_sq = _pieces(u)
    return sigma_inv[:, None] - np.einsum('rti,rtj->rtij', raised, raised) / (1.0 + norm_sq)[..., None, None]


def tangent_frame(u: ScalarField) -> np.ndarray:
    "e_i = d_i + D_i u d_s, shape (n_r, n_theta, 2, 3)"
    grad, _, _, _, _ = _pieces(u)
    frame = np.zeros(grad.shape[:2] + (2, 3))
    frame[..., 0, 0] = 1.0
    frame[..., 1, 1] = 1.0
    frame[..., :, 2] = grad
    return frame


def unit_normal(u: ScalarField) -> np.ndarray:
    "Upward unit normal -(D^i u d_i - d_s) / v, shape (n_r, n_theta, 3)"
    _, _, _, raised, norm_sq = _pieces(u)
    v = np.sqrt(1.0 + norm_sq)
    return np.concatenate([-raised / v[..., None], (1.0 / v)[..., None]], axis=-1)


def product_norm_sq(u: ScalarField, vectors: np.ndarray) -> np.ndarray:
    "Squared length of (n_r, n_theta, 3) vectors in sigma + ds^2"
    sigma = u.mesh.metric.sigma[: u.mesh.n_r]
    horizontal = np.einsum('rti,rij,rtj->rt', vectors[..., :2], sigma, vectors[..., :2])
    return horizontal + vectors[..., 2] ** 2


def second_fundamental_form(u: ScalarField) -> np.ndarray:
    "h_ij = -D_i D_j u / v with respect to the upward normal"
    grad, _, _, _, norm_sq = _pieces(u)
    hess = stencils.hessian(u.values, u.mesh)
    return -hess / np.sqrt(1.0 + norm_sq)[..., None, None]


def graph_mean_curvature(u: ScalarField) -> np.ndarray:
    """
    H = g^ij h_ij, the trace of the second fundamental form. With this orientation a graph bending upward
    has H < 0, the opposite sign of `tflow.flow.operators.mean_curvature`.
    """
    return np.einsum('rtij,rtij->rt', induced_inverse(u), second_fundamental_form(u))

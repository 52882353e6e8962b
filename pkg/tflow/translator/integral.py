import numpy as np

from tflow.mesh import ScalarField, grad_norm, integrate_boundary, require_same_mesh


def lambda_integral(w: ScalarField, phi: ScalarField) -> float:
    """
    lambda = -(boundary integral of phi / v) / (domain integral of 1 / v),  v = sqrt(1 + |Dw|^2).

    Follows from integrating div(Dw / v) = lambda / v over the domain.
    """
    require_same_mesh(w, phi)
    mesh = w.mesh
    inverse_v = 1.0 / np.sqrt(1.0 + grad_norm(w) ** 2)
    numerator = integrate_boundary(phi.boundary * inverse_v[-1], mesh)
    denominator = float(np.sum(inverse_v[: mesh.n_r] * mesh.area_weights))
    return -numerator / denominator

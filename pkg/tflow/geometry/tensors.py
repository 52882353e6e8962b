from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from tflow.exceptions import InvalidMetricError, PointOutsideChartError
from tflow.geometry.descriptor import MetricDescriptor
from tflow.types import ChartKind, ChartPoint, ChristoffelSymbols, MetricTensor

SPD_FLOOR = 1e-12
# normal-chart derivatives switch to their Taylor expansion below this radius
SERIES_RADIUS = 1e-4

TensorLike = Union[MetricTensor, np.ndarray]


def _entries(tensor: TensorLike) -> np.ndarray:
    if isinstance(tensor, MetricTensor):
        return tensor.entries
    return np.asarray(tensor, dtype=float)


def christoffel_from(sigma_inv: np.ndarray, dsigma: np.ndarray) -> np.ndarray:
    """
    Gamma^k_ij = 1/2 sigma^kl (d_i sigma_jl + d_j sigma_il - d_l sigma_ij)

    Works on stacks: sigma_inv has shape (..., 2, 2), dsigma (..., 2, 2, 2) with dsigma[..., k, i, j] = d_k sigma_ij.
    The result gamma[..., k, i, j] is symmetric in (i, j) bit for bit.
    """
    first = dsigma  # [i, j, l] -> d_i sigma_jl
    second = np.swapaxes(dsigma, -3, -2)  # [i, j, l] -> d_j sigma_il
    third = np.moveaxis(dsigma, -3, -1)  # [i, j, l] -> d_l sigma_ij
    lowered = first + second - third
    lowered = 0.5 * (lowered + np.swapaxes(lowered, -3, -2))
    return 0.5 * np.einsum('...kl,...ijl->...kij', sigma_inv, lowered)


def _chart_radius_of(descriptor: MetricDescriptor, p: ChartPoint) -> float:
    r = p.radius
    if p.chart is ChartKind.POLAR and r <= 0.0:
        raise PointOutsideChartError(f'polar chart needs r > 0, got r = {r}')
    if not descriptor.contains_radius(r):
        raise PointOutsideChartError(
            f'point at radius {r:g} lies outside the {descriptor.tag} chart (radius {descriptor.chart_radius:g})'
        )
    return r


def _polar_components(descriptor: MetricDescriptor, r: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    f = float(descriptor.f(r))
    df = float(descriptor.df(r))
    sigma = np.array([[1.0, 0.0], [0.0, f * f]])
    sigma_inv = np.array([[1.0, 0.0], [0.0, 1.0 / (f * f)]])
    dsigma = np.zeros((2, 2, 2))
    dsigma[0, 1, 1] = 2.0 * f * df
    return sigma, sigma_inv, dsigma


def _normal_components(descriptor: MetricDescriptor, x: float, y: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Normal coordinates w = r (cos theta, sin theta):
    sigma = q I + (1 - q) n n^T with q = (f / r)^2 and n = w / r.
    """
    r = float(np.hypot(x, y))
    eye = np.eye(2)
    if r == 0.0:
        return eye.copy(), eye.copy(), np.zeros((2, 2, 2))

    n = np.array([x, y]) / r
    nn = np.outer(n, n)
    f = float(descriptor.f(r))
    if r < SERIES_RADIUS:
        k0 = float(descriptor.gauss_curvature(r))
        q = (f / r) ** 2
        dq = -2.0 * k0 * r / 3.0
        one_minus_q_over_r = k0 * r / 3.0
    else:
        df = float(descriptor.df(r))
        q = (f / r) ** 2
        dq = 2.0 * f * (df * r - f) / r**3
        one_minus_q_over_r = (1.0 - q) / r

    sigma = q * eye + (1.0 - q) * nn
    sigma_inv = eye / q + (1.0 - 1.0 / q) * nn
    tangential = eye - nn
    # dsigma[k, i, j] = q' n_k (delta_ij - n_i n_j) + (1 - q)/r [(delta_ik - n_i n_k) n_j + n_i (delta_jk - n_j n_k)]
    dsigma = dq * np.einsum('k,ij->kij', n, tangential)
    dsigma += one_minus_q_over_r * (np.einsum('ik,j->kij', tangential, n) + np.einsum('i,jk->kij', n, tangential))
    return sigma, sigma_inv, dsigma


def _components(descriptor: MetricDescriptor, p: ChartPoint) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = _chart_radius_of(descriptor, p)
    if p.chart is ChartKind.POLAR:
        return _polar_components(descriptor, r)
    return _normal_components(descriptor, p.w1, p.w2)


def metric_at(descriptor: MetricDescriptor, p: ChartPoint) -> MetricTensor:
    sigma, _, _ = _components(descriptor, p)
    if np.linalg.eigvalsh(sigma).min() <= SPD_FLOOR:
        raise InvalidMetricError(f'{descriptor.tag} is degenerate at {p}')
    return MetricTensor(sigma)


def inverse_metric_at(descriptor: MetricDescriptor, p: ChartPoint) -> MetricTensor:
    sigma, sigma_inv, _ = _components(descriptor, p)
    if np.linalg.eigvalsh(sigma).min() <= SPD_FLOOR:
        raise InvalidMetricError(f'{descriptor.tag} is degenerate at {p}')
    return MetricTensor(sigma_inv)


def metric_derivatives_at(descriptor: MetricDescriptor, p: ChartPoint) -> np.ndarray:
    "dsigma[k, i, j] = d_k sigma_ij in closed form"
    return _components(descriptor, p)[2]


def christoffel_at(descriptor: MetricDescriptor, p: ChartPoint) -> ChristoffelSymbols:
    _, sigma_inv, dsigma = _components(descriptor, p)
    return ChristoffelSymbols(christoffel_from(sigma_inv, dsigma))


def gauss_curvature_at(descriptor: MetricDescriptor, p: ChartPoint) -> float:
    r = _chart_radius_of(descriptor, p)
    return float(descriptor.gauss_curvature(r))


def grad_norm_sq(sigma_inv: TensorLike, du) -> float:
    "|Du|^2 = sigma^ij d_i u d_j u"
    du = np.asarray(du, dtype=float)
    return float(max(du @ _entries(sigma_inv) @ du, 0.0))


def flow_coeffs(sigma_inv: TensorLike, du) -> MetricTensor:
    "g^ij = sigma^ij - D^i u D^j u / (1 + |Du|^2)"
    inv = _entries(sigma_inv)
    du = np.asarray(du, dtype=float)
    raised = inv @ du
    v_sq = 1.0 + max(float(du @ raised), 0.0)
    return MetricTensor(inv - np.outer(raised, raised) / v_sq)


@dataclass(frozen=True, eq=False)
class PolarMetricFields:
    "Closed-form metric data along the radial nodes of a polar mesh (one entry per ring)"

    r: np.ndarray
    f: np.ndarray
    df: np.ndarray
    sigma: np.ndarray  # (n, 2, 2)
    sigma_inv: np.ndarray  # (n, 2, 2)
    gamma: np.ndarray  # (n, 2, 2, 2), gamma[:, k, i, j] = Gamma^k_ij
    curvature: np.ndarray  # (n,)


def polar_metric_fields(descriptor: MetricDescriptor, r: np.ndarray) -> PolarMetricFields:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r >= descriptor.chart_radius):
        raise PointOutsideChartError(f'radii must lie in (0, {descriptor.chart_radius:g}) for {descriptor.tag}')
    f = descriptor.f(r)
    df = descriptor.df(r)
    if np.any(f * f <= SPD_FLOOR):
        raise InvalidMetricError(f'{descriptor.tag} is degenerate on the requested rings')

    count = r.shape[0]
    sigma = np.zeros((count, 2, 2))
    sigma[:, 0, 0] = 1.0
    sigma[:, 1, 1] = f * f
    sigma_inv = np.zeros((count, 2, 2))
    sigma_inv[:, 0, 0] = 1.0
    sigma_inv[:, 1, 1] = 1.0 / (f * f)
    dsigma = np.zeros((count, 2, 2, 2))
    dsigma[:, 0, 1, 1] = 2.0 * f * df
    return PolarMetricFields(
        r=r,
        f=f,
        df=df,
        sigma=sigma,
        sigma_inv=sigma_inv,
        gamma=christoffel_from(sigma_inv, dsigma),
        curvature=descriptor.gauss_curvature(r),
    )

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List

import numpy as np

from tflow.exceptions import RadiusOutsideChartError, ResolutionTooCoarseError
from tflow.geometry import MetricDescriptor, polar_metric_fields
from tflow.types import ChartPoint

MIN_N_R = 8
MIN_N_THETA = 16


@dataclass(frozen=True)
class RingCoefficients:
    """
    Metric coefficients of the interior rings, each of shape (n_r, 1) so they broadcast over theta.

    `gamma_<k>_<ij>` is Gamma^k_ij with k, i, j in {r, t}.
    """

    s_rr: np.ndarray
    s_rt: np.ndarray
    s_tt: np.ndarray
    gamma_r_rr: np.ndarray
    gamma_r_rt: np.ndarray
    gamma_r_tt: np.ndarray
    gamma_t_rr: np.ndarray
    gamma_t_rt: np.ndarray
    gamma_t_tt: np.ndarray


class DiskMesh:
    """
    Logically rectangular polar mesh over the chart disk r < R.

    Row i < n_r holds the cell-centred ring r_i = (i + 1/2) dr, row n_r is the boundary ring r = R.
    Node values are therefore arrays of shape (n_r + 1, n_theta). The mesh is immutable after construction.
    """

    def __init__(self, descriptor: MetricDescriptor, R: float, n_r: int, n_theta: int):
        self.descriptor = descriptor
        self.R = float(R)
        self.n_r = int(n_r)
        self.n_theta = int(n_theta)

        self.dr = self.R / self.n_r
        self.dtheta = 2.0 * math.pi / self.n_theta
        self.r = (np.arange(self.n_r + 1, dtype=float) + 0.5) * self.dr
        self.r[-1] = self.R
        self.theta = np.arange(self.n_theta, dtype=float) * self.dtheta

        self.metric = polar_metric_fields(descriptor, self.r)
        f = self.metric.f

        # sqrt(det sigma) dr dtheta, sqrt(det sigma) = f in the polar chart
        self.area_weights = np.repeat((f[:-1] * self.dr * self.dtheta)[:, None], self.n_theta, axis=1)
        self.boundary_weights = np.full(self.n_theta, np.sqrt(self.metric.sigma[-1, 1, 1]) * self.dtheta)

        # inward unit normal in polar components (nu^r, nu^theta)
        self.normal = np.zeros((self.n_theta, 2))
        self.normal[:, 0] = -1.0 / np.sqrt(self.metric.sigma[-1, 0, 0])

        self.h = self.R / self.n_r
        radial_lengths = np.sqrt(self.metric.sigma[:-1, 0, 0]) * self.dr
        angular_lengths = np.sqrt(self.metric.sigma[:-1, 1, 1]) * self.dtheta
        # shortest cell edge of each interior ring, shape (n_r, 1)
        self.ring_h_min = np.minimum(radial_lengths, angular_lengths)[:, None]
        self.h_min = float(self.ring_h_min.min())

    @property
    def shape(self):
        return (self.n_r + 1, self.n_theta)

    @property
    def node_count(self) -> int:
        return (self.n_r + 1) * self.n_theta

    @property
    def tag(self) -> str:
        return f'{self.descriptor.tag}:{self.R!r}:{self.n_r}x{self.n_theta}'

    @cached_property
    def coefficients(self) -> RingCoefficients:
        n = self.n_r
        inverse = self.metric.sigma_inv[:n]
        gamma = self.metric.gamma[:n]
        return RingCoefficients(
            s_rr=inverse[:, 0, 0, None],
            s_rt=inverse[:, 0, 1, None],
            s_tt=inverse[:, 1, 1, None],
            gamma_r_rr=gamma[:, 0, 0, 0, None],
            gamma_r_rt=gamma[:, 0, 0, 1, None],
            gamma_r_tt=gamma[:, 0, 1, 1, None],
            gamma_t_rr=gamma[:, 1, 0, 0, None],
            gamma_t_rt=gamma[:, 1, 0, 1, None],
            gamma_t_tt=gamma[:, 1, 1, 1, None],
        )

    @cached_property
    def radius_grid(self) -> np.ndarray:
        return np.repeat(self.r[:, None], self.n_theta, axis=1)

    @cached_property
    def theta_grid(self) -> np.ndarray:
        return np.repeat(self.theta[None, :], self.n_r + 1, axis=0)

    @property
    def area(self) -> float:
        return float(self.area_weights.sum())

    @property
    def boundary_length(self) -> float:
        return float(self.boundary_weights.sum())

    def chart_points(self) -> List[ChartPoint]:
        return [ChartPoint.polar(r, theta) for r in self.r for theta in self.theta]

    def normal_norm_sq(self) -> np.ndarray:
        "sigma(nu, nu) at every boundary node"
        sigma = self.metric.sigma[-1]
        return np.einsum('ti,ij,tj->t', self.normal, sigma, self.normal)

    def normal_cartesian(self) -> np.ndarray:
        "nu in the Cartesian frame of the normal chart, shape (n_theta, 2)"
        cos, sin = np.cos(self.theta), np.sin(self.theta)
        nu_r, nu_theta = self.normal[:, 0], self.normal[:, 1]
        return np.stack([nu_r * cos - nu_theta * self.R * sin, nu_r * sin + nu_theta * self.R * cos], axis=-1)

    def __repr__(self):
        return f'DiskMesh({self.tag})'


def build_mesh(descriptor: MetricDescriptor, R: float, n_r: int, n_theta: int) -> DiskMesh:
    if n_r < MIN_N_R or n_theta < MIN_N_THETA:
        raise ResolutionTooCoarseError(
            f'mesh {n_r}x{n_theta} is too coarse, need n_r >= {MIN_N_R} and n_theta >= {MIN_N_THETA}'
        )
    if n_theta % 2 != 0:
        raise ResolutionTooCoarseError(f'n_theta must be even for the across-origin stencil, got {n_theta}')
    if not (R > 0 and R < descriptor.chart_radius):
        raise RadiusOutsideChartError(
            f'R = {R:g} is outside the {descriptor.tag} chart (radius {descriptor.chart_radius:g})'
        )

    mesh = DiskMesh(descriptor, R, n_r, n_theta)
    if np.any(mesh.area_weights <= 0):
        raise RadiusOutsideChartError(f'non-positive area weight on {mesh.tag}')
    logging.debug(
        'Built %s: h = %.4g, h_min = %.4g, area = %.10g, boundary length = %.10g',
        mesh.tag,
        mesh.h,
        mesh.h_min,
        mesh.area,
        mesh.boundary_length,
    )
    return mesh

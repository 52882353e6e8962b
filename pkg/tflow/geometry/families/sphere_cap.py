import math

import numpy as np

from tflow.exceptions import InvalidMetricError
from tflow.geometry.families.common import MetricFamily


class SphereCapFamily(MetricFamily):
    """
    Geodesic polar coordinates around the north pole of a round sphere of radius rho:
    f(r) = rho sin(r / rho), constant curvature 1 / rho^2, chart valid up to the south pole.
    """

    FAMILY_NAME = 'sphere-cap'
    DEFAULT_PARAMS = (1.0,)

    def __init__(self, params, profile=None, chart_radius=None):
        super().__init__(params or self.DEFAULT_PARAMS)
        if len(self.params) != 1:
            raise InvalidMetricError(f'sphere-cap takes one radius scale, got {self.params}')
        if not self.params[0] > 0:
            raise InvalidMetricError(f'sphere-cap radius scale must be positive, got {self.params[0]}')
        self.rho = self.params[0]

    @property
    def chart_radius(self) -> float:
        return math.pi * self.rho

    def f(self, r):
        return self.rho * np.sin(np.asarray(r, dtype=float) / self.rho)

    def df(self, r):
        return np.cos(np.asarray(r, dtype=float) / self.rho)

    def ddf(self, r):
        return -np.sin(np.asarray(r, dtype=float) / self.rho) / self.rho

    def gauss_curvature(self, r):
        return np.full_like(np.asarray(r, dtype=float), 1.0 / self.rho**2)

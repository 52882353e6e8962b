import math

import numpy as np

from tflow.exceptions import InvalidMetricError
from tflow.geometry.families.common import MetricFamily


class FlatFamily(MetricFamily):
    FAMILY_NAME = 'flat'

    def __init__(self, params, profile=None, chart_radius=None):
        super().__init__(params)
        if self.params:
            raise InvalidMetricError(f'flat takes no parameters, got {self.params}')

    @property
    def chart_radius(self) -> float:
        return math.inf

    def f(self, r):
        return np.asarray(r, dtype=float)

    def df(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def ddf(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def gauss_curvature(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

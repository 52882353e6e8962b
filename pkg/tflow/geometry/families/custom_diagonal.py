import logging
import math

import numpy as np
import sympy

from tflow.exceptions import InvalidMetricError
from tflow.geometry.families.common import MetricFamily

_R = sympy.Symbol('r', positive=True)
_PROFILE_SAMPLES = 2049


def _vectorize(expression: sympy.Expr):
    compiled = sympy.lambdify(_R, expression, modules='numpy')

    def evaluate(r):
        r = np.asarray(r, dtype=float)
        # constant expressions come back as scalars
        return np.broadcast_to(np.asarray(compiled(r), dtype=float), r.shape).copy()

    return evaluate


class CustomDiagonalFamily(MetricFamily):
    """
    sigma = dr^2 + f(r)^2 dtheta^2 with f given as an expression of r, e.g. `sinh(r)`.
    f' and f'' are derived symbolically.
    """

    FAMILY_NAME = 'custom-diagonal'
    NEEDS_PROFILE = True

    def __init__(self, params, profile=None, chart_radius=None):
        super().__init__(params)
        if self.params:
            raise InvalidMetricError(f'custom-diagonal takes its profile instead of parameters, got {self.params}')
        if not profile:
            raise InvalidMetricError('custom-diagonal needs a profile f(r)')
        if chart_radius is None or not (chart_radius > 0 and math.isfinite(chart_radius)):
            raise InvalidMetricError(f'custom-diagonal needs a positive finite chart_radius, got {chart_radius}')

        try:
            expression = sympy.sympify(profile, locals={'r': _R})
        except (sympy.SympifyError, SyntaxError, TypeError) as err:
            raise InvalidMetricError(f'cannot parse profile {profile!r}: {err}')
        if expression.free_symbols - {_R}:
            raise InvalidMetricError(f'profile may only depend on r, got {sorted(map(str, expression.free_symbols))}')

        first = sympy.diff(expression, _R)
        second = sympy.diff(first, _R)
        # smooth pole: f(0) = 0 and f'(0) = 1
        if sympy.simplify(sympy.limit(expression, _R, 0)) != 0 or sympy.simplify(sympy.limit(first, _R, 0)) != 1:
            raise InvalidMetricError(f"profile {profile!r} must satisfy f(0) = 0 and f'(0) = 1")

        self.profile = str(expression)
        self._chart_radius = float(chart_radius)
        self._f = _vectorize(expression)
        self._df = _vectorize(first)
        self._ddf = _vectorize(second)

        samples = np.linspace(0.0, self._chart_radius, _PROFILE_SAMPLES)[1:-1]
        values = self._f(samples)
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise InvalidMetricError(f'profile {profile!r} must stay positive on (0, {self._chart_radius:g})')
        logging.debug('custom-diagonal profile f = %s, f\' = %s, f\'\' = %s', expression, first, second)

    @property
    def chart_radius(self) -> float:
        return self._chart_radius

    def f(self, r):
        return self._f(r)

    def df(self, r):
        return self._df(r)

    def ddf(self, r):
        return self._ddf(r)

    def describe(self) -> str:
        return f'{self.FAMILY_NAME}({self.profile})'

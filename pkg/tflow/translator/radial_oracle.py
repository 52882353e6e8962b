"""
Rotationally symmetric translators by 1-D shooting, used as ground truth for the 2-D solvers.

For a radial w and sigma = dr^2 + f(r)^2 dtheta^2 the stationary equation reduces to
    p' = (1 + p^2) (lambda - (f'/f) p),    w' = p,
with p(0) = 0. Neumann data phi = a with the inward normal means p(R) = -a.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from tflow.exceptions import OracleBracketError
from tflow.geometry import MetricDescriptor
from tflow.mesh import ScalarField

START_RADIUS = 1e-8
SLOPE_LIMIT = 1e8
SAMPLES = 10_000
LAMBDA_XTOL = 1e-13
MAX_EXPANSIONS = 60


@dataclass(frozen=True)
class RadialOracleResult:
    a: float
    R: float
    lam: float
    r: np.ndarray
    w: np.ndarray  # area-mean zero
    p: np.ndarray

    def field(self, mesh):
        "Interpolates the profile onto the nodes of a mesh with the same R"
        return ScalarField.from_polar(mesh, lambda r, theta: np.interp(r, self.r, self.w))


class _Shooter:
    def __init__(self, descriptor: MetricDescriptor, R: float):
        self.descriptor = descriptor
        self.R = R

    def rhs(self, r, y, lam):
        p = y[0]
        ratio = float(self.descriptor.df(r) / self.descriptor.f(r))
        return [(1.0 + p * p) * (lam - ratio * p), p]

    def solve(self, lam: float, dense: bool = False):
        def escaped(r, y, lam):
            return SLOPE_LIMIT - abs(y[0])

        escaped.terminal = True
        r0 = START_RADIUS
        y0 = [0.5 * lam * r0, 0.25 * lam * r0 * r0]
        return integrate.solve_ivp(
            self.rhs,
            (r0, self.R),
            y0,
            method='DOP853',
            rtol=1e-12,
            atol=1e-14,
            args=(lam,),
            events=escaped,
            dense_output=dense,
        )

    def miss(self, lam: float, a: float) -> float:
        "p(R) + a; a slope that escapes before R counts as +-SLOPE_LIMIT"
        sol = self.solve(lam)
        p_end = sol.y[0, -1]
        if sol.status == 1:
            p_end = math.copysign(SLOPE_LIMIT, p_end)
        return float(p_end + a)


def _bracket(shooter: _Shooter, a: float, guess: float):
    span = max(abs(guess), 1e-3)
    lo, hi = guess - span, guess + span
    miss_lo, miss_hi = shooter.miss(lo, a), shooter.miss(hi, a)
    for _ in range(MAX_EXPANSIONS):
        if miss_lo <= 0.0 <= miss_hi:
            return lo, hi
        span *= 2.0
        if miss_lo > 0.0:
            lo = guess - span
            miss_lo = shooter.miss(lo, a)
        if miss_hi < 0.0:
            hi = guess + span
            miss_hi = shooter.miss(hi, a)
    raise OracleBracketError(f'no bracket for lambda with a = {a} on {shooter.descriptor.tag} (last [{lo:g}, {hi:g}])')


def radial_oracle(a: float, descriptor: MetricDescriptor, R: float = 1.0) -> RadialOracleResult:
    """
    Shoots on lambda until w'(R) = -a and returns lambda with the profile on SAMPLES radii in [0, R].
    """
    a = float(a)
    r = np.linspace(0.0, R, SAMPLES)
    if a == 0.0:
        zeros = np.zeros(SAMPLES)
        return RadialOracleResult(a=a, R=R, lam=0.0, r=r, w=zeros, p=zeros.copy())

    shooter = _Shooter(descriptor, R)
    f_samples = descriptor.f(r[1:])
    area = 2.0 * math.pi * integrate.trapezoid(np.concatenate([[0.0], f_samples]), r)
    length = 2.0 * math.pi * float(descriptor.f(R))
    # first-order guess from the flux balance with |Dw| small
    guess = -a * length / area

    lo, hi = _bracket(shooter, a, guess)
    lam = optimize.brentq(shooter.miss, lo, hi, args=(a,), xtol=LAMBDA_XTOL, rtol=4 * np.finfo(float).eps)

    sol = shooter.solve(lam, dense=True)
    if sol.status != 0:
        raise OracleBracketError(f'slope escaped before R at lambda = {lam:.12g} (a = {a})')
    inner = sol.sol(np.clip(r, START_RADIUS, R))
    p = np.where(r < START_RADIUS, 0.5 * lam * r, inner[0])
    w = np.where(r < START_RADIUS, 0.25 * lam * r * r, inner[1])

    weights = np.concatenate([[0.0], f_samples])
    w = w - integrate.trapezoid(w * weights, r) / integrate.trapezoid(weights, r)

    logging.debug('radial oracle %s R = %g a = %g: lambda = %.12g (miss %.2e)', descriptor.tag, R, a, lam, shooter.miss(lam, a))
    return RadialOracleResult(a=a, R=R, lam=float(lam), r=r, w=w, p=p)

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from tflow.flow.operators import rhs
from tflow.flow.stepper import DEFAULT_C_CFL
from tflow.mesh import ScalarField, domain_mean, normal_derivative, require_same_mesh
from tflow.translator.eps_solver import EpsSolution, solve_eps_bvp
from tflow.translator.integral import lambda_integral
from tflow.types import TranslatorConfig
from tflow.utils import Timer, format_seconds

EXTRAPOLATION_POINTS = 3
TRACE_COLUMNS = ('eps', 'eps_mean_u', 'sup_grad')


@dataclass
class TranslatorResult:
    lambda_eps: float
    lambda_integral: float
    w: ScalarField
    phi: ScalarField
    residual_pde: float
    residual_bc: float
    eps_trace: np.ndarray  # rows (eps, eps * mean(u_eps), sup|Du_eps|)
    eps_osc: Tuple[float, ...] = ()
    fit_residual: float = 0.0
    extrapolation_unstable: bool = False
    lambda_flow: float = math.nan

    @property
    def mesh(self):
        return self.w.mesh

    def with_flow(self, lambda_flow: float) -> 'TranslatorResult':
        return replace(self, lambda_flow=float(lambda_flow))

    def meta_items(self):
        return [
            ('lambda_eps', self.lambda_eps),
            ('lambda_integral', self.lambda_integral),
            ('lambda_flow', self.lambda_flow),
            ('residual_pde', self.residual_pde),
            ('residual_bc', self.residual_bc),
            ('fit_residual', self.fit_residual),
            ('extrapolation_unstable', self.extrapolation_unstable),
        ]


def extrapolate_to_zero(eps: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
    """
    Intercept of a least-squares line through the last EXTRAPOLATION_POINTS (eps, value) pairs,
    with the largest absolute fit residual. One point is returned as is.
    """
    eps = np.asarray(eps, dtype=float)[-EXTRAPOLATION_POINTS:]
    values = np.asarray(values, dtype=float)[-EXTRAPOLATION_POINTS:]
    if len(eps) == 1:
        return float(values[0]), 0.0
    slope, intercept = np.polyfit(eps, values, 1)
    fit_residual = float(np.abs(values - (slope * eps + intercept)).max())
    return float(intercept), fit_residual


def is_monotone(values: Sequence[float]) -> bool:
    steps = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(steps >= 0.0) or np.all(steps <= 0.0))


def _check_schedule(eps_schedule: Sequence[float]):
    schedule = [float(eps) for eps in eps_schedule]
    if not schedule:
        raise ValueError('eps schedule is empty')
    if any(not eps > 0 for eps in schedule) or any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f'eps schedule must be positive and strictly decreasing, got {schedule}')
    return schedule


def continuation(
    phi: ScalarField,
    eps_schedule: Sequence[float] = TranslatorConfig.eps_schedule,
    u_init: Optional[ScalarField] = None,
    tol_ell: float = TranslatorConfig.tol_ell,
    tau_max: float = TranslatorConfig.tau_max,
    c_cfl: float = DEFAULT_C_CFL,
) -> TranslatorResult:
    """
    Solves the eps problem along the schedule, each solve warm-started from the previous omega,
    and extrapolates eps * mean(u_eps) to eps = 0. The profile w is the last omega with zero mean.
    """
    schedule = _check_schedule(eps_schedule)
    mesh = phi.mesh
    if u_init is None:
        u_init = ScalarField.constant(mesh)
    require_same_mesh(phi, u_init)

    logging.info('开始 eps 延拓 %s: %s', mesh.tag, ', '.join(f'{eps:g}' for eps in schedule))
    solutions = []
    start = u_init
    with Timer() as timer:
        for eps in schedule:
            solution: EpsSolution = solve_eps_bvp(eps, phi, start, tol_ell=tol_ell, tau_max=tau_max, c_cfl=c_cfl)
            logging.info(
                'eps = %-8g eps*mean(u) = %.12g | sup|Du| = %.6g | %d steps',
                eps,
                solution.eps_mean,
                solution.sup_grad,
                solution.steps,
            )
            solutions.append(solution)
            start = solution.omega

    trace = np.array([(s.eps, s.eps_mean, s.sup_grad) for s in solutions], dtype=float)
    lambda_eps, fit_residual = extrapolate_to_zero(trace[:, 0], trace[:, 1])
    unstable = not is_monotone(trace[:, 1])
    if unstable:
        logging.warning('eps*mean(u) is not monotone along the schedule, the extrapolated lambda is unreliable')

    omega = solutions[-1].omega
    w = omega - domain_mean(omega)
    residual_pde = float(np.abs(rhs(w).interior - lambda_eps).max())
    residual_bc = float(np.abs(normal_derivative(w) - phi.boundary).max())
    lam_integral = lambda_integral(w, phi)

    logging.info(
        '延拓完成 (%s): lambda_eps = %.12g, lambda_integral = %.12g, fit residual %.2e',
        format_seconds(timer.duration),
        lambda_eps,
        lam_integral,
        fit_residual,
    )
    return TranslatorResult(
        lambda_eps=lambda_eps,
        lambda_integral=lam_integral,
        w=w,
        phi=phi,
        residual_pde=residual_pde,
        residual_bc=residual_bc,
        eps_trace=trace,
        eps_osc=tuple(s.eps_osc for s in solutions),
        fit_residual=fit_residual,
        extrapolation_unstable=unstable,
    )


def continuation_from_config(phi: ScalarField, translator_config: TranslatorConfig, u_init: ScalarField = None, c_cfl=None):
    return continuation(
        phi,
        eps_schedule=translator_config.eps_schedule,
        u_init=u_init,
        tol_ell=translator_config.tol_ell,
        tau_max=translator_config.tau_max,
        c_cfl=DEFAULT_C_CFL if c_cfl is None else c_cfl,
    )

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from tflow.exceptions import SolverStallError
from tflow.flow.operators import enforce_neumann_values, flow_rate_values
from tflow.flow.stepper import DEFAULT_C_CFL, RK2Stepper, local_dt
from tflow.mesh import ScalarField, require_same_mesh, stencils, weighted_mean
from tflow.utils import Timer, format_seconds

# pseudo-time span (outer-ring steps) over which the residual has to shrink by STALL_RATIO
STALL_WINDOW = 2.0
STALL_RATIO = 0.999
STATUS_INTERVAL = 2.0


@dataclass(frozen=True)
class EpsSolution:
    """
    Steady state of the eps-regularized problem  eps u = g^ij(Du) D_i D_j u,  D_nu u = phi.

    `omega` is the marched field (defined up to a constant), `u` the solution
    u_eps = omega - <omega> + <rhs(omega)> / eps.
    """

    eps: float
    u: ScalarField
    omega: ScalarField
    eps_mean: float
    eps_osc: float
    sup_grad: float
    residual: float
    steps: int


class EpsTendency:
    """
    Pseudo-time rate with the constant mode removed exactly:
    omega_tau = rhs(omega) - <rhs(omega)> - eps (omega - <omega>).
    Its zeros are the solutions of the eps problem up to the constant <rhs>/eps.
    """

    def __init__(self, mesh, eps: float):
        self.mesh = mesh
        self.eps = eps

    def __call__(self, U: np.ndarray) -> np.ndarray:
        values = flow_rate_values(U, self.mesh)
        n = self.mesh.n_r
        return values - weighted_mean(values, self.mesh) - self.eps * (U[:n] - weighted_mean(U, self.mesh))


def solve_eps_bvp(
    eps: float,
    phi: ScalarField,
    u_init: ScalarField,
    tol_ell: float = 1e-9,
    tau_max: float = 200.0,
    c_cfl: float = DEFAULT_C_CFL,
) -> EpsSolution:
    """
    Marches omega_tau = rhs(omega) - eps omega (mean-eliminated) to steady state with the flow's RK2 stepper.

    Each ring takes its own CFL step, so pseudo-time tau is measured in the largest of them (the outer rings).
    Raises SolverStallError when the residual sup|eps u - rhs(u)| plateaus above tol_ell or tau passes tau_max.
    """
    if not eps > 0:
        raise ValueError(f'eps must be positive, got {eps}')
    if not tau_max > 0:
        raise ValueError(f'tau_max must be positive, got {tau_max}')
    require_same_mesh(phi, u_init)
    mesh = phi.mesh
    stepper = RK2Stepper(mesh, phi.boundary, tendency=EpsTendency(mesh, eps))

    U = enforce_neumann_values(u_init.copy_values(), mesh, phi.boundary)
    dt = local_dt(mesh, c_cfl)
    dtau = float(dt.max())
    max_steps = max(1, int(math.ceil(tau_max / dtau)))
    window_steps = max(1, int(math.ceil(STALL_WINDOW / dtau)))

    step = 0
    window_residual = math.inf
    last_status = time.time()
    with Timer() as timer:
        while True:
            rate = stepper.rate(U, step * dtau, step)
            residual = float(np.abs(rate).max())
            if residual < tol_ell:
                break
            if step >= max_steps:
                raise SolverStallError(
                    f'eps = {eps:g}: residual {residual:.3e} still above {tol_ell:.1e} at tau = {tau_max:g} '
                    f'({max_steps} steps)'
                )
            if step % window_steps == 0:
                if residual > STALL_RATIO * window_residual:
                    raise SolverStallError(
                        f'eps = {eps:g}: residual stalled at {residual:.3e} (target {tol_ell:.1e}) after {step} steps'
                    )
                window_residual = residual
            U = stepper.advance(U, dt, k1=rate, t=step * dtau, step=step)
            step += 1

            if step % 1000 == 0 and time.time() - last_status >= STATUS_INTERVAL:
                last_status = time.time()
                logging.info(
                    'eps = %-8g tau = %9.4f | residual = %.3e | %s', eps, step * dtau, residual, format_seconds(timer.elapsed())
                )

    values = flow_rate_values(U, mesh)
    rhs_mean = weighted_mean(values, mesh)
    omega_mean = weighted_mean(U, mesh)
    u_eps = U - omega_mean + rhs_mean / eps
    grad = stencils.gradient(U, mesh)[: mesh.n_r]
    norm_sq = np.einsum('rti,rij,rtj->rt', grad, mesh.metric.sigma_inv[: mesh.n_r], grad)
    interior = u_eps[: mesh.n_r]

    logging.debug('eps = %g converged in %d steps (%s), eps*mean(u) = %.12g', eps, step, format_seconds(timer.duration), rhs_mean)
    return EpsSolution(
        eps=eps,
        u=ScalarField(mesh, u_eps),
        omega=ScalarField(mesh, U),
        eps_mean=rhs_mean,
        eps_osc=float(eps * (interior.max() - interior.min())),
        sup_grad=float(np.sqrt(max(norm_sq.max(), 0.0))),
        residual=residual,
        steps=step,
    )

import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from tflow.exceptions import CompatibilityError
from tflow.flow.operators import enforce_neumann, with_boundary
from tflow.flow.stepper import FlowState, RK2Stepper, dt_max
from tflow.mesh import ScalarField, normal_derivative, require_same_mesh, stencils, weighted_mean
from tflow.types import FlowConfig, TerminationReason
from tflow.utils import Timer, calc_rate, format_rate, format_seconds

# compatibility D_nu u0 = phi is accepted up to COMPATIBILITY_FACTOR * h^2
COMPATIBILITY_FACTOR = 10.0
FIT_WINDOW = 0.2
STATUS_INTERVAL = 2.0  # seconds between progress lines


@dataclass
class MonitorSeries:
    "One row per monitor stride; osc_drift is filled in with the final lambda estimate"

    t: List[float] = field(default_factory=list)
    sup_ut: List[float] = field(default_factory=list)
    osc_ut: List[float] = field(default_factory=list)
    sup_grad: List[float] = field(default_factory=list)
    mean_u: List[float] = field(default_factory=list)
    mean_ut: List[float] = field(default_factory=list)
    max_u: List[float] = field(default_factory=list)
    min_u: List[float] = field(default_factory=list)
    osc_drift: List[float] = field(default_factory=list)

    COLUMNS = ('t', 'sup_ut', 'osc_ut', 'sup_grad', 'mean_u', 'osc_drift')

    def __len__(self):
        return len(self.t)

    def array(self, name: str) -> np.ndarray:
        return np.asarray(getattr(self, name), dtype=float)

    def fill_drift(self, lam: float):
        t = self.array('t')
        drift_high = np.abs(self.array('max_u') - lam * t)
        drift_low = np.abs(self.array('min_u') - lam * t)
        self.osc_drift = list(np.maximum(drift_high, drift_low))

    def rows(self):
        return zip(*(getattr(self, name) for name in self.COLUMNS))


@dataclass(frozen=True)
class Snapshot:
    step: int
    t: float
    u: ScalarField
    ut: ScalarField


@dataclass
class FlowResult:
    mesh: object
    phi: ScalarField
    monitors: MonitorSeries
    snapshots: List[Snapshot]
    lambda_flow: float
    lambda_flow_fit: float
    termination: TerminationReason
    steps: int
    dt: float
    final: FlowState
    final_ut: ScalarField
    repaired_initial: bool = False
    initial_compatibility: float = 0.0

    @property
    def h(self) -> float:
        return self.mesh.h

    @property
    def converged(self) -> bool:
        return self.termination is TerminationReason.CONVERGED


def lambda_from_mean_fit(t: np.ndarray, mean_u: np.ndarray, window: float = FIT_WINDOW) -> float:
    "Slope of a least-squares line through mean(u) over the final `window` share of the run"
    t = np.asarray(t, dtype=float)
    mean_u = np.asarray(mean_u, dtype=float)
    if len(t) < 2:
        return math.nan
    start = t[-1] - window * (t[-1] - t[0])
    mask = t >= start
    if np.count_nonzero(mask) < 2:
        mask[-2:] = True
    slope, _ = np.polyfit(t[mask], mean_u[mask], 1)
    return float(slope)


class FlowService:
    "Integrates the flow from u0 until u_t stops oscillating or t_max is reached"

    def __init__(self, u0: ScalarField, phi: ScalarField, flow_config: FlowConfig = None):
        require_same_mesh(u0, phi)
        self.mesh = u0.mesh
        self.phi = phi
        self.config = flow_config or FlowConfig()
        self.u0, self.repaired_initial, self.initial_compatibility = self.check_initial(u0)
        self.stepper = RK2Stepper(self.mesh, phi.boundary)

    def check_initial(self, u0: ScalarField):
        """
        Measures how far u0 misses D_nu u0 = phi and re-solves its boundary ring from phi.

        The flow always starts from the re-solved field; `repaired` reports a mismatch above 10 h^2.
        """
        mismatch = float(np.abs(normal_derivative(u0) - self.phi.boundary).max())
        tolerance = COMPATIBILITY_FACTOR * self.mesh.h**2
        repaired = mismatch > tolerance
        if repaired and not self.config.repair_initial:
            raise CompatibilityError(
                f'initial data misses D_nu u0 = phi by {mismatch:.3e} (tolerance {tolerance:.3e}) on {self.mesh.tag}'
            )
        if repaired:
            logging.warning('初值不满足相容性条件 (偏差 %.3e > %.3e)，已用一次 Neumann 投影修复', mismatch, tolerance)
        else:
            logging.debug('初值相容性偏差 %.3e (容差 %.3e)，边界环按 Neumann 数据重新求解', mismatch, tolerance)
        return enforce_neumann(u0, self.phi), repaired, mismatch

    def _record(self, monitors: MonitorSeries, t: float, U: np.ndarray, ut: np.ndarray):
        n = self.mesh.n_r
        grad = stencils.gradient(U, self.mesh)[:n]
        norm_sq = np.einsum('rti,rij,rtj->rt', grad, self.mesh.metric.sigma_inv[:n], grad)
        interior = U[:n]
        monitors.t.append(t)
        monitors.sup_ut.append(float(np.abs(ut).max()))
        monitors.osc_ut.append(float(ut.max() - ut.min()))
        monitors.sup_grad.append(float(np.sqrt(max(norm_sq.max(), 0.0))))
        monitors.mean_u.append(weighted_mean(U, self.mesh))
        monitors.mean_ut.append(weighted_mean(ut, self.mesh))
        monitors.max_u.append(float(interior.max()))
        monitors.min_u.append(float(interior.min()))

    def _snapshot(self, step: int, t: float, U: np.ndarray, ut: np.ndarray) -> Snapshot:
        return Snapshot(
            step=step,
            t=t,
            u=ScalarField(self.mesh, U),
            ut=ScalarField(self.mesh, with_boundary(ut, self.mesh)),
        )

    def run(self) -> FlowResult:
        config = self.config
        dt = dt_max(FlowState(0.0, self.u0), config.c_cfl)
        logging.info(
            '开始演化 %s: dt = %.4g, t_max = %g, tol = %.1e', self.mesh.tag, dt, config.t_max, config.tol_translate
        )

        monitors = MonitorSeries()
        snapshots: List[Snapshot] = []
        U = self.u0.copy_values()
        step = 0
        last_status = time.time()
        last_status_step = 0
        termination: Optional[TerminationReason] = None

        with Timer() as timer:
            while True:
                t = step * dt
                ut = self.stepper.rate(U, t, step)
                osc_ut = float(ut.max() - ut.min())
                # a translator is only recognised from a stepped state
                if step > 0 and osc_ut < config.tol_translate:
                    termination = TerminationReason.CONVERGED
                elif t >= config.t_max:
                    termination = TerminationReason.T_MAX_REACHED

                if step % config.monitor_stride == 0 or termination is not None:
                    self._record(monitors, t, U, ut)
                if step % config.snapshot_stride == 0 or termination is not None:
                    snapshots.append(self._snapshot(step, t, U, ut))
                if termination is not None:
                    break

                U = self.stepper.advance(U, dt, k1=ut, t=t, step=step)
                step += 1

                if step % 1000 == 0 and time.time() - last_status >= STATUS_INTERVAL:
                    rate = calc_rate(last_status, time.time(), step - last_status_step)
                    last_status, last_status_step = time.time(), step
                    logging.info(
                        't = %8.4f / %g | osc(u_t) = %.3e | %s | %s',
                        t + dt,
                        config.t_max,
                        osc_ut,
                        format_rate(rate),
                        format_seconds(timer.elapsed()),
                    )

        lambda_flow = weighted_mean(ut, self.mesh)
        monitors.fill_drift(lambda_flow)
        lambda_fit = lambda_from_mean_fit(monitors.t, monitors.mean_u)
        final = FlowState(t=step * dt, u=ScalarField(self.mesh, U), dt_last=dt if step else 0.0)

        if termination is TerminationReason.CONVERGED:
            logging.info('演化收敛: t = %.4f, %d 步, lambda = %.10g (拟合 %.10g)', final.t, step, lambda_flow, lambda_fit)
        else:
            logging.warning(
                't_max = %g reached before osc(u_t) < %.1e (last %.3e)', config.t_max, config.tol_translate, osc_ut
            )
        logging.debug('Flow took %s', format_seconds(timer.duration))

        return FlowResult(
            mesh=self.mesh,
            phi=self.phi,
            monitors=monitors,
            snapshots=snapshots,
            lambda_flow=lambda_flow,
            lambda_flow_fit=lambda_fit,
            termination=termination,
            steps=step,
            dt=dt,
            final=final,
            final_ut=snapshots[-1].ut,
            repaired_initial=self.repaired_initial,
            initial_compatibility=self.initial_compatibility,
        )


def run_flow(u0: ScalarField, phi: ScalarField, flow_config: FlowConfig = None) -> FlowResult:
    return FlowService(u0, phi, flow_config).run()

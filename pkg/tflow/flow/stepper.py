import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from tflow.exceptions import BlowupError, MeshMismatchError, NonFiniteFieldError
from tflow.flow.operators import enforce_neumann_values, flow_rate_values
from tflow.mesh import ScalarField, require_same_mesh
from tflow.mesh.disk_mesh import DiskMesh

DEFAULT_C_CFL = 0.2
BLOWUP_LIMIT = 1e8
# Relative to sigma, g^ij(Du) has eigenvalue 1 orthogonal to Du and 1 / (1 + |Du|^2) along it,
# so the largest one is 1 for every u.
RELATIVE_EIGENVALUE_MAX = 1.0

Tendency = Callable[[np.ndarray], np.ndarray]
StepSize = Union[float, np.ndarray]


@dataclass(frozen=True)
class FlowState:
    t: float
    u: ScalarField
    dt_last: float = 0.0


def dt_max(state: FlowState, c_cfl: float = DEFAULT_C_CFL) -> float:
    "c_cfl h_min^2 / Lambda_max"
    return c_cfl * state.u.mesh.h_min**2 / RELATIVE_EIGENVALUE_MAX


def local_dt(mesh: DiskMesh, c_cfl: float = DEFAULT_C_CFL) -> np.ndarray:
    """
    The CFL step of each interior ring, shape (n_r, 1).

    Only for marches to a steady state: the rings no longer share one clock, the fixed point is unchanged.
    """
    return c_cfl * mesh.ring_h_min**2 / RELATIVE_EIGENVALUE_MAX


class RK2Stepper:
    """
    Explicit midpoint rule on the interior rings; the boundary ring is re-solved from the Neumann data after
    each stage. The tendency defaults to the flow operator and can be replaced (pseudo-time marches).
    """

    def __init__(self, mesh: DiskMesh, phi_boundary: np.ndarray, tendency: Optional[Tendency] = None):
        self.mesh = mesh
        self.phi_boundary = np.asarray(phi_boundary, dtype=float)
        self.tendency = tendency if tendency is not None else self.flow_tendency

    def flow_tendency(self, U: np.ndarray) -> np.ndarray:
        return flow_rate_values(U, self.mesh)

    def enforce(self, U: np.ndarray) -> np.ndarray:
        return enforce_neumann_values(U, self.mesh, self.phi_boundary)

    def rate(self, U: np.ndarray, t: float, step: int) -> np.ndarray:
        try:
            return self.tendency(U)
        except NonFiniteFieldError as err:
            raise BlowupError(f'{err} at t = {t:.6g} (step {step})', t=t, step=step)

    def advance(
        self, U: np.ndarray, dt: StepSize, k1: np.ndarray = None, t: float = 0.0, step: int = 0
    ) -> np.ndarray:
        """
        One step on raw node values; returns a new array.

        `dt` is a scalar, or one step per interior ring of shape (n_r, 1) (see `local_dt`);
        `t` only labels errors and advances by the largest step.
        """
        n = self.mesh.n_r
        span = float(np.max(dt))
        if k1 is None:
            k1 = self.rate(U, t, step)

        midpoint = np.array(U)
        midpoint[:n] += 0.5 * dt * k1
        self.enforce(midpoint)
        k2 = self.rate(midpoint, t + 0.5 * span, step)

        result = np.array(U)
        result[:n] += dt * k2
        self.enforce(result)

        if not np.all(np.isfinite(result)) or np.abs(result).max() > BLOWUP_LIMIT:
            logging.debug('Blowup detected after step %d (t = %.6g)', step + 1, t + span)
            raise BlowupError(
                f'solution left the bounded regime after step {step + 1} (t = {t + span:.6g})',
                t=t + span,
                step=step + 1,
            )
        return result

    def step(self, state: FlowState, dt: float) -> FlowState:
        if state.u.mesh is not self.mesh and state.u.tag != self.mesh.tag:
            raise MeshMismatchError(f'state lives on {state.u.tag}, stepper on {self.mesh.tag}')
        values = self.advance(state.u.values, dt, t=state.t)
        return replace(state, t=state.t + dt, u=state.u.with_values(values), dt_last=dt)


def step(state: FlowState, dt: float, phi: ScalarField) -> FlowState:
    "Advances the flow by one RK2 step with D_nu u = phi"
    require_same_mesh(state.u, phi)
    return RK2Stepper(phi.mesh, phi.boundary).step(state, dt)

"""
Pass/fail checks for the hypotheses of the translator theory and for the estimates a run should obey.

Every check returns a CheckResult with the measured margin and the tolerance it was held to.
"""

import logging
import math
from typing import Dict, Sequence, Tuple

import numpy as np

from tflow.exceptions import IncompatibleRunsError, MeshMismatchError
from tflow.mesh import DiskMesh, ScalarField, grad_norm, normal_derivative, oscillation_of_difference, require_same_mesh
from tflow.mesh import stencils
from tflow.types import CheckResult, CheckStatus

H2_FACTOR = 10.0
CURVATURE_FLOOR = -1e-10
UT_RELATIVE_SLACK = 1e-6
TRANSLATOR_FLOOR = 1e-4
TRANSLATOR_H2_FACTOR = 100.0
SHARED_TIME_TOL = 1e-9
UNIQUENESS_OSC = 1e-8
UNIQUENESS_LAMBDA = 1e-9
ODD_TOLERANCE = 1e-6


def _h2_tolerance(mesh: DiskMesh) -> float:
    return H2_FACTOR * mesh.h**2


def _status(passed: bool) -> CheckStatus:
    return CheckStatus.PASS if passed else CheckStatus.FAIL


def _same_phi(first: ScalarField, second: ScalarField) -> bool:
    return first.tag == second.tag and np.array_equal(first.boundary, second.boundary)


# --- hypotheses on the base and the domain ---


def check_compatibility(u0: ScalarField, phi: ScalarField) -> CheckResult:
    require_same_mesh(u0, phi)
    margin = float(np.abs(normal_derivative(u0) - phi.boundary).max())
    tolerance = _h2_tolerance(u0.mesh)
    return CheckResult('compatibility', _status(margin <= tolerance), margin, tolerance)


def boundary_geodesic_curvature(mesh: DiskMesh) -> np.ndarray:
    """
    Geodesic curvature of the circle r = R with respect to the inward normal, at every boundary node:
    kappa = Gamma^k_thth sigma_kb nu^b / sigma_thth.
    """
    gamma = mesh.metric.gamma[-1]
    sigma = mesh.metric.sigma[-1]
    acceleration = gamma[:, 1, 1]
    return np.einsum('k,kb,tb->t', acceleration, sigma, mesh.normal) / sigma[1, 1]


def barrier_function(mesh: DiskMesh) -> ScalarField:
    "beta = (r^2 - R^2) / (2R), rescaled so that the mean of D_nu beta is -1"
    R = mesh.R
    beta = ScalarField.from_polar(mesh, lambda r, theta: (r * r - R * R) / (2.0 * R))
    scale = -1.0 / float(np.mean(normal_derivative(beta)))
    return beta * scale


def min_relative_eigenvalue(hessian: np.ndarray, sigma: np.ndarray) -> float:
    "Smallest eigenvalue of sigma^-1 H over all nodes; sigma is per ring, H per node"
    lower = np.linalg.cholesky(sigma)
    lower_inv = np.linalg.inv(lower)[:, None]
    reduced = lower_inv @ hessian @ np.swapaxes(lower_inv, -1, -2)
    reduced = 0.5 * (reduced + np.swapaxes(reduced, -1, -2))
    return float(np.linalg.eigvalsh(reduced).min())


def check_hypotheses(descriptor, mesh: DiskMesh) -> Tuple[CheckResult, CheckResult, CheckResult]:
    "(ricci_nonneg, boundary_convex, barrier_exists) measured on the mesh"
    if descriptor is not None and descriptor != mesh.descriptor:
        raise MeshMismatchError(f'{descriptor.tag} does not match the metric of {mesh.tag}')
    tolerance = _h2_tolerance(mesh)

    k_min = float(np.min(mesh.metric.curvature))
    ricci = CheckResult('ricci_nonneg', _status(k_min >= CURVATURE_FLOOR), k_min, abs(CURVATURE_FLOOR), 'min K')
    if not ricci.passed:
        logging.warning('底流形 Gauss 曲率为负 (min K = %.6g)，理论假设不成立，继续运行', k_min)

    kappa_1 = float(boundary_geodesic_curvature(mesh).min())
    convex = CheckResult('boundary_convex', _status(kappa_1 > 0.0), kappa_1, 0.0, 'kappa_1')

    beta = barrier_function(mesh)
    k_0 = min_relative_eigenvalue(stencils.hessian(beta.values, mesh), mesh.metric.sigma[: mesh.n_r])
    slope = float(grad_norm(beta).max())
    normal_miss = float(np.abs(normal_derivative(beta) + 1.0).max())
    barrier_ok = k_0 > 0.0 and slope <= 1.0 + tolerance and normal_miss <= tolerance
    barrier = CheckResult(
        'barrier_exists',
        _status(barrier_ok),
        k_0,
        tolerance,
        f'k_0={k_0:.6g} sup|Dbeta|={slope:.6g} max|D_nu beta+1|={normal_miss:.3e}',
    )
    return ricci, convex, barrier


# --- flow run checks ---


def ut_max_principle(sup_ut: Sequence[float], h: float) -> CheckResult:
    sup_ut = np.asarray(sup_ut, dtype=float)
    if len(sup_ut) == 0:
        return CheckResult('ut_max_principle', CheckStatus.NOT_APPLICABLE, math.nan, math.nan, 'empty monitor series')
    initial = float(sup_ut[0])
    margin = float(sup_ut.max() - initial)
    tolerance = UT_RELATIVE_SLACK * initial + H2_FACTOR * h * h
    return CheckResult('ut_max_principle', _status(margin <= tolerance), margin, tolerance, f'sup|u_t|(0)={initial:.6g}')


def check_ut_max_principle(flow_result) -> CheckResult:
    "sup|u_t| never exceeds its initial value beyond the slack"
    return ut_max_principle(flow_result.monitors.sup_ut, flow_result.h)


def running_max_growth(t: Sequence[float], values: Sequence[float]) -> float:
    "Growth of the running maximum of `values` over the second half of the time span"
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return 0.0
    running = np.maximum.accumulate(values)
    middle = int(np.searchsorted(t, t[0] + 0.5 * (t[-1] - t[0]), side='left'))
    middle = min(max(middle, 0), len(values) - 1)
    return float(running[-1] - running[middle])


def _bounded_series(name: str, t, values, h: float) -> CheckResult:
    if len(values) == 0:
        return CheckResult(name, CheckStatus.NOT_APPLICABLE, math.nan, math.nan, 'empty monitor series')
    margin = running_max_growth(t, values)
    tolerance = H2_FACTOR * h * h
    return CheckResult(name, _status(margin <= tolerance), margin, tolerance, 'running max growth, final half')


def check_gradient_bound(flow_result) -> CheckResult:
    "sup|Du| stops growing: its running max is flat over the final half"
    monitors = flow_result.monitors
    return _bounded_series('gradient_bound_stable', monitors.t, monitors.sup_grad, flow_result.h)


def check_drift_bounded(flow_result) -> CheckResult:
    "sup|u - lambda t| stays bounded: its running max is flat over the final half"
    monitors = flow_result.monitors
    return _bounded_series('drift_bounded', monitors.t, monitors.osc_drift, flow_result.h)


def shared_snapshots(first, second):
    by_step = {snapshot.step: snapshot for snapshot in second.snapshots}
    pairs = []
    for snapshot in first.snapshots:
        other = by_step.get(snapshot.step)
        if other is not None and abs(other.t - snapshot.t) <= SHARED_TIME_TOL:
            pairs.append((snapshot, other))
    return pairs


def check_osc_contraction(first, second) -> CheckResult:
    """
    osc(u_1 - u_2) at the snapshot times both runs share must never rise more than 10 h^2 above its running minimum
    and must end below its start unless it starts inside the slack.
    """
    if first.mesh.tag != second.mesh.tag:
        raise IncompatibleRunsError(f'runs live on {first.mesh.tag} and {second.mesh.tag}')
    if not _same_phi(first.phi, second.phi):
        raise IncompatibleRunsError('runs use different Neumann data')

    pairs = shared_snapshots(first, second)
    tolerance = _h2_tolerance(first.mesh)
    if len(pairs) < 2:
        return CheckResult('osc_contraction', CheckStatus.NOT_APPLICABLE, math.nan, tolerance, 'fewer than two shared snapshots')

    osc = np.array([oscillation_of_difference(one.u, two.u) for one, two in pairs])
    growth = float((osc - np.minimum.accumulate(osc)).max())
    decreased = osc[0] <= tolerance or osc[-1] < osc[0]
    return CheckResult(
        'osc_contraction',
        _status(growth <= tolerance and decreased),
        growth,
        tolerance,
        f'osc {osc[0]:.3e} -> {osc[-1]:.3e} over {len(pairs)} snapshots',
    )


def check_translator_convergence(flow_result, translator_result) -> CheckResult:
    """
    The final snapshot fixes the constant c* = midrange of u(T) - lambda T - w. The margin is the larger of
    osc(u(T) - w) and the distance of every final-half snapshot from lambda t + w + c*; it is held to
    max(1e-4, 100 h^2), and the drift series has to be bounded.
    """
    mesh = flow_result.mesh
    if mesh.tag != translator_result.mesh.tag:
        raise IncompatibleRunsError(f'flow on {mesh.tag}, translator on {translator_result.mesh.tag}')
    if not _same_phi(flow_result.phi, translator_result.phi):
        raise IncompatibleRunsError('flow and translator use different Neumann data')

    tolerance = max(TRANSLATOR_FLOOR, TRANSLATOR_H2_FACTOR * mesh.h**2)
    snapshots = flow_result.snapshots
    if len(snapshots) < 2:
        return CheckResult(
            'translator_convergence', CheckStatus.NOT_APPLICABLE, math.nan, tolerance, 'the flow never stepped'
        )

    lam = translator_result.lambda_eps
    w = translator_result.w.values
    final = snapshots[-1]
    final_deviation = final.u.values - lam * final.t - w
    c_star = 0.5 * (final_deviation.max() + final_deviation.min())
    osc_final = float(final_deviation.max() - final_deviation.min())

    late = [s for s in snapshots if s.t >= 0.5 * final.t]
    distance = max(float(np.abs(s.u.values - lam * s.t - w - c_star).max()) for s in late)
    margin = max(osc_final, distance)
    drift = check_drift_bounded(flow_result)
    return CheckResult(
        'translator_convergence',
        _status(margin < tolerance and drift.status is CheckStatus.PASS),
        margin,
        tolerance,
        f'c*={c_star:.6g}, osc(u(T)-w)={osc_final:.3e}, {len(late)} snapshots in the final half, '
        f'drift {drift.status.value}',
    )


# --- translator checks ---


def check_lambda_sign(phi: ScalarField, lam: float, zero_tolerance: float = 1e-9) -> CheckResult:
    "phi >= 0 and not zero forces lambda < 0, the mirrored case lambda > 0, and phi = 0 forces lambda = 0"
    data = phi.boundary
    if np.all(data == 0.0):
        return CheckResult('lambda_sign', _status(abs(lam) <= zero_tolerance), abs(lam), zero_tolerance, 'phi = 0')
    if np.all(data >= 0.0):
        return CheckResult('lambda_sign', _status(lam < 0.0), lam, 0.0, 'phi >= 0')
    if np.all(data <= 0.0):
        return CheckResult('lambda_sign', _status(lam > 0.0), -lam, 0.0, 'phi <= 0')
    return CheckResult('lambda_sign', CheckStatus.NOT_APPLICABLE, lam, 0.0, 'phi changes sign')


def check_uniqueness(first, second) -> CheckResult:
    "Two translators for the same data agree up to a constant"
    require_same_mesh(first.w, second.w)
    osc = oscillation_of_difference(first.w, second.w)
    lambda_gap = abs(first.lambda_eps - second.lambda_eps)
    passed = osc < UNIQUENESS_OSC and lambda_gap < UNIQUENESS_LAMBDA
    return CheckResult('uniqueness', _status(passed), osc, UNIQUENESS_OSC, f'|lambda_1 - lambda_2|={lambda_gap:.3e}')


def check_lambda_odd(lambdas: Dict[float, float], tolerance: float = ODD_TOLERANCE) -> CheckResult:
    "lambda(-a) = -lambda(a) for every amplitude whose mirror was also run"
    gaps = [abs(lam + lambdas[-a]) for a, lam in lambdas.items() if a > 0 and -a in lambdas]
    if 0.0 in lambdas:
        gaps.append(abs(lambdas[0.0]))
    if not gaps:
        return CheckResult('lambda_odd', CheckStatus.NOT_APPLICABLE, math.nan, tolerance, 'no mirrored amplitudes')
    margin = float(max(gaps))
    return CheckResult('lambda_odd', _status(margin <= tolerance), margin, tolerance, f'{len(gaps)} pairs')

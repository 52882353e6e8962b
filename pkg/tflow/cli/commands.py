import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from tflow.cli.expressions import BoundaryExpression, parse_boundary_expression, parse_initial_expression
from tflow.diagnostics import build_report, check_lambda_sign
from tflow.flow import FlowResult, run_flow
from tflow.geometry import MetricDescriptor, make_descriptor
from tflow.mesh import DiskMesh, ScalarField, build_mesh
from tflow.notifications import get_all_notify_services
from tflow.recorder import RunRecorder
from tflow.translator import TranslatorResult, continuation_from_config, radial_oracle
from tflow.types import RunConfig
from tflow.utils import Timer


@dataclass(frozen=True)
class Scenario:
    "The fixed data of one run: metric, mesh, Neumann data and initial data"

    descriptor: MetricDescriptor
    mesh: DiskMesh
    boundary: BoundaryExpression
    phi: ScalarField
    u0: ScalarField


def descriptor_for(run_config: RunConfig) -> MetricDescriptor:
    metric = run_config.metric
    return make_descriptor(metric.family, metric.params, profile=metric.profile, chart_radius=metric.chart_radius)


def build_scenario(
    run_config: RunConfig,
    initial_tag: Optional[str] = None,
    a: Optional[float] = None,
    resolution: Optional[Tuple[int, int]] = None,
) -> Scenario:
    """
    Builds mesh, phi and u0 from the config. `a` replaces the amplitude of the boundary expression,
    `resolution` the mesh size, `initial_tag` the initial data.
    """
    descriptor = descriptor_for(run_config)
    n_r, n_theta = resolution or (run_config.mesh.n_r, run_config.mesh.n_theta)
    mesh = build_mesh(descriptor, run_config.metric.R, n_r, n_theta)
    boundary = parse_boundary_expression(run_config.boundary_phi)
    if a is not None:
        boundary = boundary.with_amplitude(a)
    u0 = parse_initial_expression(initial_tag or run_config.initial_u0).field(mesh)
    return Scenario(descriptor=descriptor, mesh=mesh, boundary=boundary, phi=boundary.field(mesh), u0=u0)


def run_translator(run_config: RunConfig, scenario: Scenario) -> TranslatorResult:
    u_init = parse_initial_expression(run_config.translator.u_init).field(scenario.mesh)
    return continuation_from_config(scenario.phi, run_config.translator, u_init=u_init, c_cfl=run_config.flow.c_cfl)


def oracle_lambda(scenario: Scenario) -> Optional[float]:
    "lambda of the radial shooting problem when phi is constant, otherwise None"
    if not scenario.boundary.is_constant:
        return None
    return radial_oracle(scenario.boundary.a, scenario.descriptor, scenario.mesh.R).lam


def _flow_items(result: FlowResult) -> List[Tuple[str, object]]:
    return [
        ('lambda_flow', result.lambda_flow),
        ('lambda_flow_fit', result.lambda_flow_fit),
        ('termination', result.termination.value),
        ('t_final', result.final.t),
        ('steps', result.steps),
        ('dt', result.dt),
        ('repaired_initial', result.repaired_initial),
    ]


def cmd_flow(run_config: RunConfig, out_dir: str) -> int:
    with Timer() as timer:
        scenario = build_scenario(run_config)
        result = run_flow(scenario.u0, scenario.phi, run_config.flow)

        recorder = RunRecorder(out_dir)
        recorder.save_flow(result)
    items = _flow_items(result)
    recorder.save_manifest('flow', run_config, timer.duration, items)

    for service in get_all_notify_services(run_config):
        service.notify_about_results(f'flow on {scenario.mesh.tag}', items)
    return 0


def cmd_translator(run_config: RunConfig, out_dir: str) -> int:
    with Timer() as timer:
        scenario = build_scenario(run_config)
        result = run_translator(run_config, scenario)
        lam_oracle = oracle_lambda(scenario)
        sign = check_lambda_sign(scenario.phi, result.lambda_eps)

        recorder = RunRecorder(out_dir)
        recorder.save_translator(result)
    items = result.meta_items() + [('lambda_oracle', float('nan') if lam_oracle is None else lam_oracle)]
    items.append(('lambda_sign', sign.status.value))
    recorder.save_manifest('translator', run_config, timer.duration, items)

    for service in get_all_notify_services(run_config):
        service.notify_about_results(f'translator on {scenario.mesh.tag}', items)
    if not sign.passed:
        logging.error('lambda = %.12g violates the sign law for this phi', result.lambda_eps)
        return 1
    return 0


def cmd_verify(run_config: RunConfig, out_dir: str) -> int:
    """
    Runs the flow from u0 and from the alternative initial data, the continuation,
    and evaluates the nine diagnostics. Exit code 0 iff none fails.
    """
    with Timer() as timer:
        scenario = build_scenario(run_config)
        alt_u0 = parse_initial_expression(run_config.verify.alt_initial_u0).field(scenario.mesh)

        logging.info('验证 1/3: 主演化')
        flow_result = run_flow(scenario.u0, scenario.phi, run_config.flow)
        logging.info('验证 2/3: 第二初值演化')
        alt_result = run_flow(alt_u0, scenario.phi, run_config.flow)
        logging.info('验证 3/3: eps 延拓')
        translator_result = run_translator(run_config, scenario).with_flow(flow_result.lambda_flow)

        sign = check_lambda_sign(scenario.phi, translator_result.lambda_eps)
        report = build_report(flow_result, alt_result, translator_result, extras=[sign])

        recorder = RunRecorder(out_dir)
        recorder.save_flow(flow_result)
        recorder.save_translator(translator_result)
        recorder.save_diagnostics(report)

    items = _flow_items(flow_result) + [item for item in translator_result.meta_items() if item[0] != 'lambda_flow']
    items.append(('repaired_alt_initial', alt_result.repaired_initial))
    items.append(('all_passed', report.all_passed))
    recorder.save_manifest('verify', run_config, timer.duration, items)

    for service in get_all_notify_services(run_config):
        service.notify_about_results(f'verify on {scenario.mesh.tag}', items)
        service.notify_about_report(report)
    return 0 if report.all_passed else 1

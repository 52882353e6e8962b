import logging
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Dict, List, Tuple

from tflow.cli.commands import build_scenario, oracle_lambda, run_translator
from tflow.diagnostics import check_lambda_odd, estimate_order
from tflow.flow import run_flow
from tflow.notifications import get_all_notify_services
from tflow.recorder import RunRecorder
from tflow.types import RunConfig
from tflow.utils import PathTools as PT
from tflow.utils import ProcessLock, Timer, format_seconds


@dataclass(frozen=True)
class SweepPoint:
    a: float
    lambda_eps: float
    lambda_integral: float
    lambda_flow: float


@dataclass(frozen=True)
class GridPoint:
    n_r: int
    n_theta: int
    h: float
    lambda_eps: float
    lambda_oracle: float

    @property
    def error(self) -> float:
        return abs(self.lambda_eps - self.lambda_oracle)


class SweepStatus:
    def __init__(self, total: int):
        self.total = total
        self.finished = 0
        self.lock = threading.Lock()

    def done(self, label: str, timer: Timer):
        with self.lock:
            self.finished += 1
            logging.info('[%d/%d] %s 完成 (%s)', self.finished, self.total, label, format_seconds(timer.elapsed()))


class SweepService:
    """
    Maps a -> lambda(a) for phi = a (or a cos(k theta)) with one job per amplitude, plus an optional
    grid-convergence study. Every job owns its subdirectory of the run directory.
    """

    def __init__(self, run_config: RunConfig, out_dir: str, jobs: int = 1):
        self.run_config = run_config
        self.out_dir = out_dir
        self.jobs = max(1, int(jobs))

    def job_dir(self, label: str) -> str:
        path = PT.make_path(self.out_dir, PT.to_valid_name(label))
        PT.make_dirs(path)
        return path

    def run_amplitude(self, a: float) -> SweepPoint:
        out_dir = self.job_dir(f'a={a!r}')
        ProcessLock.lock(out_dir)
        try:
            with Timer() as timer:
                scenario = build_scenario(self.run_config, a=a)
                translator_result = run_translator(self.run_config, scenario)
                flow_result = run_flow(scenario.u0, scenario.phi, self.run_config.flow)
                translator_result = translator_result.with_flow(flow_result.lambda_flow)

                recorder = RunRecorder(out_dir)
                recorder.save_translator(translator_result)
                recorder.save_monitors(flow_result.monitors)
            recorder.save_manifest('sweep', self.run_config, timer.duration, [('a', a)] + translator_result.meta_items())
        finally:
            ProcessLock.unlock(out_dir)
        return SweepPoint(a, translator_result.lambda_eps, translator_result.lambda_integral, flow_result.lambda_flow)

    def run_resolution(self, n_r: int) -> GridPoint:
        mesh_config = self.run_config.mesh
        n_theta = 2 * round(n_r * mesh_config.n_theta / (2 * mesh_config.n_r))
        scenario = build_scenario(self.run_config, resolution=(n_r, n_theta))
        lam_oracle = oracle_lambda(scenario)
        result = run_translator(self.run_config, scenario)
        return GridPoint(n_r, n_theta, scenario.mesh.h, result.lambda_eps, lam_oracle)

    def _map(self, func, values, label) -> Dict:
        status = SweepStatus(len(values))
        results = {}
        with Timer() as timer, ThreadPoolExecutor(max_workers=self.jobs) as pool:
            futures = {pool.submit(func, value): value for value in values}
            for future in as_completed(futures):
                value = futures[future]
                results[value] = future.result()
                status.done(f'{label}={value!r}', timer)
        return results

    def run(self) -> Tuple[List[SweepPoint], List[GridPoint]]:
        a_values = list(self.run_config.sweep.a_values)
        logging.info('扫描 %d 个振幅, %d 个并行任务', len(a_values), self.jobs)
        by_a = self._map(self.run_amplitude, a_values, 'a')
        points = [by_a[a] for a in a_values]

        grid: List[GridPoint] = []
        resolutions = list(self.run_config.sweep.resolutions)
        if resolutions:
            if not build_scenario(self.run_config).boundary.is_constant:
                logging.warning('Grid convergence needs constant phi for the radial oracle, skipping the study')
            else:
                by_n = self._map(self.run_resolution, resolutions, 'n_r')
                grid = [by_n[n_r] for n_r in resolutions]
        return points, grid


def cmd_sweep(run_config: RunConfig, out_dir: str, jobs: int = 1) -> int:
    """
    Runs the amplitude sweep and writes lambda_vs_a.csv (and grid_convergence.csv when resolutions are set).
    Exit code 0 iff lambda(a) is odd in a.
    """
    with Timer() as timer:
        points, grid = SweepService(run_config, out_dir, jobs).run()

        recorder = RunRecorder(out_dir)
        recorder.save_lambda_vs_a((p.a, p.lambda_eps, p.lambda_integral, p.lambda_flow) for p in points)
        odd = check_lambda_odd({p.a: p.lambda_eps for p in points})
        items = [('lambda_odd', odd.status.value), ('lambda_odd_margin', odd.margin)]
        if grid:
            recorder.save_grid_convergence(
                (g.n_r, g.n_theta, g.h, g.lambda_eps, g.lambda_oracle, g.error) for g in grid
            )
            order = estimate_order([g.h for g in grid], [g.error for g in grid])
            items.append(('grid_order', order))
            logging.info('Observed order of lambda_eps against the oracle: %.3f', order)
    recorder.save_manifest('sweep', run_config, timer.duration, items)

    for service in get_all_notify_services(run_config):
        service.notify_about_results('sweep', [(f'lambda(a={p.a:g})', p.lambda_eps) for p in points] + items)
    if not odd.passed:
        logging.error('lambda(a) is not odd in a (margin %.3e)', odd.margin)
        return 1
    return 0

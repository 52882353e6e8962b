import logging
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import scipy
import sympy

from tflow.config import config_items
from tflow.flow import FlowResult, MonitorSeries
from tflow.translator import TRACE_COLUMNS, TranslatorResult
from tflow.types import RunConfig
from tflow.utils import PathTools as PT
from tflow.utils import format_float, write_csv
from tflow.version import __version__

MANIFEST = 'manifest.csv'
MONITORS = 'monitors.csv'
TRANSLATOR_META = 'translator_meta.csv'
W_FIELD = 'w.csv'
EPS_TRACE = 'eps_trace.csv'
DIAGNOSTICS = 'diagnostics.csv'
LAMBDA_VS_A = 'lambda_vs_a.csv'
GRID_CONVERGENCE = 'grid_convergence.csv'

LAMBDA_VS_A_HEADER = ('a', 'lambda_eps', 'lambda_integral', 'lambda_flow')
GRID_CONVERGENCE_HEADER = ('n_r', 'n_theta', 'h', 'lambda_eps', 'lambda_oracle', 'error')


def snapshot_name(step: int, t: float) -> str:
    "The step index keeps names unique when t rounds to the same six decimals"
    return f'u_t{t:.6f}_step{step}.csv'


def version_items() -> List[Tuple[str, str]]:
    return [
        ('version.tflow', __version__),
        ('version.numpy', np.__version__),
        ('version.scipy', scipy.__version__),
        ('version.sympy', sympy.__version__),
    ]


class RunRecorder:
    """
    Writes the artifacts of one run into its output directory.

    Everything but the manifest (which carries the wall time) is a pure function of the run,
    so reruns of one config give identical files.
    """

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        PT.make_dirs(out_dir)
        self.written: List[str] = []

    def path(self, name: str) -> str:
        return PT.make_path(self.out_dir, name)

    def _write(self, name: str, header: Sequence[str], rows: Iterable[Sequence]):
        path = self.path(name)
        write_csv(path, header, rows)
        self.written.append(name)
        logging.debug('Wrote %s', path)
        return path

    def save_monitors(self, monitors: MonitorSeries):
        return self._write(MONITORS, MonitorSeries.COLUMNS, monitors.rows())

    def save_snapshots(self, flow_result: FlowResult):
        for snapshot in flow_result.snapshots:
            name = snapshot_name(snapshot.step, snapshot.t)
            snapshot.u.to_csv(self.path(name))
            self.written.append(name)

    def save_flow(self, flow_result: FlowResult):
        self.save_monitors(flow_result.monitors)
        self.save_snapshots(flow_result)

    def save_translator(self, result: TranslatorResult):
        self._write(TRANSLATOR_META, ('key', 'value'), result.meta_items())
        result.w.to_csv(self.path(W_FIELD))
        self.written.append(W_FIELD)
        self._write(EPS_TRACE, TRACE_COLUMNS, [tuple(row) for row in result.eps_trace])

    def save_diagnostics(self, report):
        path = self.path(DIAGNOSTICS)
        report.to_csv(path)
        self.written.append(DIAGNOSTICS)
        return path

    def save_lambda_vs_a(self, rows: Iterable[Sequence]):
        return self._write(LAMBDA_VS_A, LAMBDA_VS_A_HEADER, rows)

    def save_grid_convergence(self, rows: Iterable[Sequence]):
        return self._write(GRID_CONVERGENCE, GRID_CONVERGENCE_HEADER, rows)

    def save_manifest(self, command: str, run_config: RunConfig, wall_time: float, extra: Sequence[Tuple[str, object]] = ()):
        rows = [('command', command)]
        rows += config_items(run_config)
        rows += version_items()
        rows += [(key, value if isinstance(value, str) else format_float(value)) for key, value in extra]
        rows.append(('wall_time_s', format_float(round(wall_time, 3))))
        rows.append(('artifacts', ' '.join(self.written)))
        path = self.path(MANIFEST)
        write_csv(path, ('key', 'value'), rows)
        return path


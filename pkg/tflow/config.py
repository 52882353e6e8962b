import math
import os
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from tflow.exceptions import ConfigParseError, ConfigValidationError, TflowError
from tflow.types import (
    FlowConfig,
    MeshConfig,
    MetricConfig,
    RunConfig,
    SweepConfig,
    TranslatorConfig,
    VerifyConfig,
)

KNOWN_KEYS = (
    'metric.family',
    'metric.params',
    'metric.profile',
    'metric.chart_radius',
    'metric.R',
    'mesh.n_r',
    'mesh.n_theta',
    'boundary_phi',
    'initial_u0',
    'flow.t_max',
    'flow.tol_translate',
    'flow.c_cfl',
    'flow.monitor_stride',
    'flow.snapshot_stride',
    'flow.repair_initial',
    'translator.eps_schedule',
    'translator.tol_ell',
    'translator.tau_max',
    'translator.u_init',
    'verify.alt_initial_u0',
    'sweep.a_values',
    'sweep.resolutions',
    'output_dir',
    'sentry_dsn',
)

_TRUE_WORDS = ('true', 'yes', 'on', '1')
_FALSE_WORDS = ('false', 'no', 'off', '0')


class ConfigHelper:
    "Handles the loading and typed access of a flat `key = value` run configuration."

    class NoConfigError(ValueError):
        """An Exception which gets thrown if config could not be loaded."""

        pass

    def __init__(self, config_path: str):
        self._whole_config: Dict[str, str] = {}
        self._line_numbers: Dict[str, int] = {}
        self.config_path = str(config_path)

    @property
    def base_dir(self) -> str:
        return str(Path(self.config_path).resolve().parent)

    def load(self):
        try:
            with open(self.config_path, 'r', encoding='utf-8') as config_file:
                config_raw = config_file.read()
        except (IOError, OSError) as err_load:
            raise ConfigHelper.NoConfigError(f'Configuration could not be loaded from {self.config_path}\n{err_load!s}')
        self.load_string(config_raw)

    def load_string(self, config_raw: str):
        self._whole_config = {}
        self._line_numbers = {}
        for line_number, line in enumerate(config_raw.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            if '=' not in stripped:
                raise ConfigParseError(f'expected `key = value`, got {stripped!r}', line_number)
            key, _, value = stripped.partition('=')
            key = key.strip()
            value = value.split(' #', 1)[0].strip()  # trailing comment
            if not key:
                raise ConfigParseError('empty key', line_number)
            if key not in KNOWN_KEYS:
                raise ConfigParseError(f'unknown key {key!r}', line_number)
            if key in self._whole_config:
                raise ConfigParseError(
                    f'duplicate key {key!r} (first set on line {self._line_numbers[key]})', line_number
                )
            self._whole_config[key] = value
            self._line_numbers[key] = line_number

    def get_property(self, key: str) -> str:
        # return a property if configured
        try:
            return self._whole_config[key]
        except KeyError:
            raise ConfigValidationError(key, 'is required but not configured')

    def get_property_or(self, key: str, default: any = None) -> any:
        # return a property if configured
        try:
            return self._whole_config[key]
        except KeyError:
            return default

    def has_property(self, key: str) -> bool:
        """Check if a property exists in the configuration"""
        return key in self._whole_config

    def items(self) -> List[Tuple[str, str]]:
        return [(key, self._whole_config[key]) for key in KNOWN_KEYS if key in self._whole_config]

    # ---------------------------- GETTERS ------------------------------------

    def get_float(self, key: str, default: Optional[float] = None) -> float:
        raw = self.get_property_or(key)
        if raw is None or raw == '':
            if default is None:
                return self.get_property(key)
            return default
        return _to_float(key, raw)

    def get_optional_float(self, key: str) -> Optional[float]:
        raw = self.get_property_or(key)
        if raw is None or raw == '':
            return None
        return _to_float(key, raw)

    def get_int(self, key: str, default: int) -> int:
        raw = self.get_property_or(key)
        if raw is None or raw == '':
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigValidationError(key, f'expected an integer, got {raw!r}')

    def get_bool(self, key: str, default: bool) -> bool:
        raw = self.get_property_or(key)
        if raw is None or raw == '':
            return default
        if raw.lower() in _TRUE_WORDS:
            return True
        if raw.lower() in _FALSE_WORDS:
            return False
        raise ConfigValidationError(key, f'expected true or false, got {raw!r}')

    def get_float_list(self, key: str, default: Tuple[float, ...]) -> Tuple[float, ...]:
        raw = self.get_property_or(key)
        if raw is None:
            return default
        raw = raw.strip().lstrip('[').rstrip(']')
        if raw == '':
            return ()
        return tuple(_to_float(key, item) for item in raw.split(','))

    def get_int_list(self, key: str, default: Tuple[int, ...]) -> Tuple[int, ...]:
        values = self.get_float_list(key, default)
        if any(value != int(value) for value in values):
            raise ConfigValidationError(key, 'expected a list of integers')
        return tuple(int(value) for value in values)

    def get_str(self, key: str, default: Optional[str] = None) -> Optional[str]:
        raw = self.get_property_or(key)
        if raw is None or raw == '':
            return default
        return raw


def _to_float(key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigValidationError(key, f'expected a real number, got {raw!r}')
    if not math.isfinite(value):
        raise ConfigValidationError(key, f'must be finite, got {raw!r}')
    return value


def _require(condition: bool, key: str, message: str):
    if not condition:
        raise ConfigValidationError(key, message)


def _read_metric(config: ConfigHelper) -> MetricConfig:
    from tflow.geometry import make_descriptor

    family = config.get_property('metric.family')
    metric = MetricConfig(
        family=family,
        params=config.get_float_list('metric.params', ()),
        R=config.get_float('metric.R', 1.0),
        profile=config.get_str('metric.profile'),
        chart_radius=config.get_optional_float('metric.chart_radius'),
    )
    _require(metric.R > 0, 'metric.R', 'must be positive')
    try:
        descriptor = make_descriptor(metric.family, metric.params, metric.profile, metric.chart_radius)
    except TflowError as err:
        raise ConfigValidationError('metric.family', str(err))
    _require(
        metric.R < descriptor.chart_radius,
        'metric.R',
        f'must lie inside the chart (radius {descriptor.chart_radius:g})',
    )
    return metric


def _read_mesh(config: ConfigHelper) -> MeshConfig:
    mesh = MeshConfig(n_r=config.get_int('mesh.n_r', 32), n_theta=config.get_int('mesh.n_theta', 64))
    _require(mesh.n_r >= 8, 'mesh.n_r', 'must be at least 8')
    _require(mesh.n_theta >= 16, 'mesh.n_theta', 'must be at least 16')
    _require(mesh.n_theta % 2 == 0, 'mesh.n_theta', 'must be even')
    return mesh


def _read_flow(config: ConfigHelper) -> FlowConfig:
    flow = FlowConfig(
        t_max=config.get_float('flow.t_max', 20.0),
        tol_translate=config.get_float('flow.tol_translate', 1e-7),
        c_cfl=config.get_float('flow.c_cfl', 0.2),
        monitor_stride=config.get_int('flow.monitor_stride', 50),
        snapshot_stride=config.get_int('flow.snapshot_stride', 2000),
        repair_initial=config.get_bool('flow.repair_initial', True),
    )
    _require(flow.t_max > 0, 'flow.t_max', 'must be positive')
    _require(flow.tol_translate > 0, 'flow.tol_translate', 'must be positive')
    _require(0 < flow.c_cfl <= 1, 'flow.c_cfl', 'must lie in (0, 1]')
    _require(flow.monitor_stride >= 1, 'flow.monitor_stride', 'must be at least 1')
    _require(flow.snapshot_stride >= 1, 'flow.snapshot_stride', 'must be at least 1')
    return flow


def _read_translator(config: ConfigHelper, base_dir: str) -> TranslatorConfig:
    translator = TranslatorConfig(
        eps_schedule=config.get_float_list('translator.eps_schedule', TranslatorConfig.eps_schedule),
        tol_ell=config.get_float('translator.tol_ell', 1e-9),
        tau_max=config.get_float('translator.tau_max', TranslatorConfig.tau_max),
        u_init=_checked_initial(config, 'translator.u_init', 'zero', base_dir),
    )
    schedule = translator.eps_schedule
    _require(len(schedule) >= 1, 'translator.eps_schedule', 'must name at least one eps')
    _require(all(eps > 0 for eps in schedule), 'translator.eps_schedule', 'must be positive')
    _require(
        all(later < earlier for earlier, later in zip(schedule, schedule[1:])),
        'translator.eps_schedule',
        'must be strictly decreasing',
    )
    _require(translator.tol_ell > 0, 'translator.tol_ell', 'must be positive')
    _require(translator.tau_max > 0, 'translator.tau_max', 'must be positive')
    return translator


def _checked_initial(config: ConfigHelper, key: str, default: str, base_dir: str) -> str:
    from tflow.cli.expressions import parse_initial_expression

    tag = config.get_str(key, default)
    try:
        expression = parse_initial_expression(tag)
    except TflowError as err:
        raise ConfigValidationError(key, str(err))
    if expression.path is not None:
        resolved = os.path.normpath(os.path.join(base_dir, os.path.expanduser(expression.path)))
        _require(os.path.isfile(resolved), key, f'file {resolved} does not exist')
        tag = f'custom-file({resolved})'
    return tag


def _checked_boundary(config: ConfigHelper) -> str:
    from tflow.cli.expressions import parse_boundary_expression

    tag = config.get_str('boundary_phi', 'const(0)')
    try:
        parse_boundary_expression(tag)
    except TflowError as err:
        raise ConfigValidationError('boundary_phi', str(err))
    return tag


def parse_config_helper(config: ConfigHelper) -> RunConfig:
    "Validates a loaded ConfigHelper and freezes it into a RunConfig."
    base_dir = config.base_dir
    sweep = SweepConfig(
        a_values=config.get_float_list('sweep.a_values', SweepConfig.a_values),
        resolutions=config.get_int_list('sweep.resolutions', ()),
    )
    _require(all(n_r >= 8 for n_r in sweep.resolutions), 'sweep.resolutions', 'every n_r must be at least 8')

    output_dir = config.get_str('output_dir', 'runs/tflow')
    return RunConfig(
        metric=_read_metric(config),
        mesh=_read_mesh(config),
        boundary_phi=_checked_boundary(config),
        initial_u0=_checked_initial(config, 'initial_u0', 'zero', base_dir),
        flow=_read_flow(config),
        translator=_read_translator(config, base_dir),
        verify=VerifyConfig(
            alt_initial_u0=_checked_initial(config, 'verify.alt_initial_u0', VerifyConfig.alt_initial_u0, base_dir)
        ),
        sweep=sweep,
        output_dir=os.path.normpath(os.path.join(base_dir, os.path.expanduser(output_dir))),
        sentry_dsn=config.get_str('sentry_dsn'),
        base_dir=base_dir,
    )


def parse_config(path: str) -> RunConfig:
    """
    Reads and validates a run configuration. Unknown keys are rejected with their line number,
    invalid values with the name of the offending field.
    """
    config = ConfigHelper(path)
    config.load()
    return parse_config_helper(config)


def config_items(run_config: RunConfig) -> List[Tuple[str, str]]:
    "The fully defaulted configuration as ordered `key, value` pairs (for the manifest)."
    metric = run_config.metric
    flow = run_config.flow
    translator = run_config.translator

    def _join(values) -> str:
        return ', '.join(repr(value) if isinstance(value, float) else str(value) for value in values)

    return [
        ('metric.family', metric.family),
        ('metric.params', _join(metric.params)),
        ('metric.profile', metric.profile or ''),
        ('metric.chart_radius', '' if metric.chart_radius is None else repr(metric.chart_radius)),
        ('metric.R', repr(metric.R)),
        ('mesh.n_r', str(run_config.mesh.n_r)),
        ('mesh.n_theta', str(run_config.mesh.n_theta)),
        ('boundary_phi', run_config.boundary_phi),
        ('initial_u0', run_config.initial_u0),
        ('flow.t_max', repr(flow.t_max)),
        ('flow.tol_translate', repr(flow.tol_translate)),
        ('flow.c_cfl', repr(flow.c_cfl)),
        ('flow.monitor_stride', str(flow.monitor_stride)),
        ('flow.snapshot_stride', str(flow.snapshot_stride)),
        ('flow.repair_initial', str(flow.repair_initial).lower()),
        ('translator.eps_schedule', _join(translator.eps_schedule)),
        ('translator.tol_ell', repr(translator.tol_ell)),
        ('translator.tau_max', repr(translator.tau_max)),
        ('translator.u_init', translator.u_init),
        ('verify.alt_initial_u0', run_config.verify.alt_initial_u0),
        ('sweep.a_values', _join(run_config.sweep.a_values)),
        ('sweep.resolutions', _join(run_config.sweep.resolutions)),
        ('output_dir', run_config.output_dir),
    ]

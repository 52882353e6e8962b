import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class ChartKind(Enum):
    POLAR = 'polar'  # w1 = r, w2 = theta
    NORMAL = 'normal'  # Riemannian normal coordinates around the pole


@dataclass(frozen=True)
class ChartPoint:
    w1: float
    w2: float
    chart: ChartKind = ChartKind.POLAR

    def __post_init__(self):
        if not (math.isfinite(self.w1) and math.isfinite(self.w2)):
            raise ValueError(f'Chart coordinates must be finite, got ({self.w1}, {self.w2})')

    @classmethod
    def polar(cls, r: float, theta: float) -> 'ChartPoint':
        return cls(float(r), float(theta), ChartKind.POLAR)

    @classmethod
    def normal(cls, x: float, y: float) -> 'ChartPoint':
        return cls(float(x), float(y), ChartKind.NORMAL)

    @property
    def radius(self) -> float:
        if self.chart is ChartKind.POLAR:
            return self.w1
        return math.hypot(self.w1, self.w2)


@dataclass(frozen=True, eq=False)
class MetricTensor:
    "A symmetric 2x2 tensor at one point (used for sigma_ij, sigma^ij and g^ij)"

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.shape != (2, 2):
            raise ValueError(f'MetricTensor needs a 2x2 matrix, got shape {entries.shape}')
        object.__setattr__(self, 'entries', entries)

    def __getitem__(self, index):
        return self.entries[index]

    def is_symmetric(self, tol: float = 1e-14) -> bool:
        return abs(self.entries[0, 1] - self.entries[1, 0]) <= tol * max(1.0, np.abs(self.entries).max())

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries).min())


@dataclass(frozen=True, eq=False)
class ChristoffelSymbols:
    "gamma[k, i, j] holds Gamma^k_ij"

    gamma: np.ndarray

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=float)
        if gamma.shape != (2, 2, 2):
            raise ValueError(f'ChristoffelSymbols needs a 2x2x2 array, got shape {gamma.shape}')
        object.__setattr__(self, 'gamma', gamma)

    def __getitem__(self, index):
        return self.gamma[index]

    def is_lower_symmetric(self) -> bool:
        return bool(np.array_equal(self.gamma, np.swapaxes(self.gamma, 1, 2)))


class CheckStatus(Enum):
    PASS = 'pass'
    FAIL = 'fail'
    NOT_APPLICABLE = 'not-applicable'


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: CheckStatus
    margin: float
    tolerance: float
    detail: str = ''

    @property
    def passed(self) -> bool:
        return self.status is not CheckStatus.FAIL


class TerminationReason(Enum):
    CONVERGED = 'converged'
    T_MAX_REACHED = 't-max-reached'


@dataclass(frozen=True)
class MetricConfig:
    family: str
    params: Tuple[float, ...] = ()
    R: float = 1.0
    profile: Optional[str] = None
    chart_radius: Optional[float] = None


@dataclass(frozen=True)
class MeshConfig:
    n_r: int = 32
    n_theta: int = 64


@dataclass(frozen=True)
class FlowConfig:
    t_max: float = 20.0
    tol_translate: float = 1e-7
    c_cfl: float = 0.2
    monitor_stride: int = 50
    snapshot_stride: int = 2000
    repair_initial: bool = True


@dataclass(frozen=True)
class TranslatorConfig:
    eps_schedule: Tuple[float, ...] = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3)
    tol_ell: float = 1e-9
    tau_max: float = 200.0
    u_init: str = 'zero'


@dataclass(frozen=True)
class VerifyConfig:
    alt_initial_u0: str = 'linear(0.2,90)'


@dataclass(frozen=True)
class SweepConfig:
    a_values: Tuple[float, ...] = (0.0, 0.05, -0.05, 0.1, -0.1, 0.2, -0.2)
    resolutions: Tuple[int, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    metric: MetricConfig
    mesh: MeshConfig = field(default_factory=MeshConfig)
    boundary_phi: str = 'const(0)'
    initial_u0: str = 'zero'
    flow: FlowConfig = field(default_factory=FlowConfig)
    translator: TranslatorConfig = field(default_factory=TranslatorConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output_dir: str = 'runs/tflow'
    sentry_dsn: Optional[str] = None
    base_dir: str = '.'


@dataclass
class TflowOpts:
    command: str
    config: str
    out: str
    jobs: int
    verbose: bool
    quiet: bool
    log_to_file: bool
    log_file_path: str

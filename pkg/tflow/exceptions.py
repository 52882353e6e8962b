"""
tflow 异常类型定义

按错误来源分类，CLI 根据 code 输出一行机器可读的错误信息：
- 配置错误：配置文件无法解析或取值非法
- 几何错误：点不在坐标卡内、度量退化
- 网格错误：分辨率过粗、场与网格不匹配、出现非有限值
- 求解错误：爆破、相容性条件不满足、迭代停滞
- 诊断错误：两次运行无法比较
"""


class TflowError(Exception):
    """tflow 基础异常类"""

    code = 'tflow-error'


class ConfigError(TflowError):
    code = 'config'


class ConfigParseError(ConfigError):
    """配置文件某一行无法解析"""

    code = 'parse-error'

    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f'line {line_number}: {message}'
        super().__init__(message)


class ConfigValidationError(ConfigError):
    """某个配置项取值非法"""

    code = 'validation-error'

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f'{field_name}: {message}')


class GeometryError(TflowError):
    code = 'geometry'


class PointOutsideChartError(GeometryError):
    code = 'point-outside-chart'


class InvalidMetricError(GeometryError):
    """度量族参数非法，或 σ 不是正定的"""

    code = 'invalid-metric'


class MeshError(TflowError):
    code = 'mesh'


class ResolutionTooCoarseError(MeshError):
    code = 'resolution-too-coarse'


class RadiusOutsideChartError(MeshError):
    code = 'radius-outside-chart'


class MeshMismatchError(MeshError):
    code = 'mesh-mismatch'


class NonFiniteFieldError(MeshError):
    code = 'non-finite-intermediate'


class SolverError(TflowError):
    code = 'solver'


class BlowupError(SolverError):
    """
    时间推进中出现非有限值或数值爆破（可用于判断步长过大）
    """

    code = 'blowup'

    def __init__(self, message: str, t: float = None, step: int = None):
        self.t = t
        self.step = step
        super().__init__(message)


class CompatibilityError(SolverError):
    """初值不满足相容性条件 D_ν u₀ = φ"""

    code = 'compatibility-violation'


class SolverStallError(SolverError):
    """伪时间迭代的残差停滞在容差之上"""

    code = 'solver-stall'


class DegenerateStencilError(SolverError):
    code = 'degenerate-stencil'


class OracleBracketError(SolverError):
    """径向打靶法找不到包含 λ 的区间"""

    code = 'bisection-bracket-failure'


class DiagnosticsError(TflowError):
    code = 'diagnostics'


class IncompatibleRunsError(DiagnosticsError):
    """两次运行的网格、度量或边界数据不一致"""

    code = 'incompatible-runs'

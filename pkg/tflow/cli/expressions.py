"""
Expression tags for the Neumann data and the initial data, e.g. `cosine(0.1, 2)` or `linear(0.2, 90)`.
"""

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tflow.exceptions import ConfigError
from tflow.mesh import DiskMesh, ScalarField

_CALL = re.compile(r'^\s*([a-z][a-z-]*)\s*(?:\((.*)\))?\s*$', re.DOTALL)


def _split_call(tag: str):
    match = _CALL.match(tag or '')
    if match is None:
        raise ConfigError(f'cannot parse expression {tag!r}')
    name, arguments = match.group(1), match.group(2)
    return name, arguments


def _numbers(tag: str, arguments: Optional[str], counts) -> list:
    if arguments is None or not arguments.strip():
        raw = []
    else:
        raw = [part.strip() for part in arguments.split(',')]
    if len(raw) not in counts:
        raise ConfigError(f'{tag!r} takes {" or ".join(map(str, counts))} arguments, got {len(raw)}')
    values = []
    for part in raw:
        try:
            value = float(part)
        except ValueError:
            raise ConfigError(f'{part!r} in {tag!r} is not a number')
        if not math.isfinite(value):
            raise ConfigError(f'{part!r} in {tag!r} is not finite')
        values.append(value)
    return values


@dataclass(frozen=True)
class BoundaryExpression:
    "phi(theta) = a for `const(a)`, a cos(k theta) for `cosine(a,k)`"

    kind: str
    a: float
    k: int = 0

    def values(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.kind == 'const':
            return np.full(theta.shape, self.a)
        return self.a * np.cos(self.k * theta)

    def field(self, mesh: DiskMesh) -> ScalarField:
        "phi extended constantly in r, so the boundary ring holds the data"
        return ScalarField.from_polar(mesh, lambda r, theta: self.values(theta))

    @property
    def is_constant(self) -> bool:
        return self.kind == 'const' or self.k == 0

    def with_amplitude(self, a: float) -> 'BoundaryExpression':
        return BoundaryExpression(self.kind, float(a), self.k)

    @property
    def tag(self) -> str:
        if self.kind == 'const':
            return f'const({self.a!r})'
        return f'cosine({self.a!r},{self.k})'


def parse_boundary_expression(tag: str) -> BoundaryExpression:
    name, arguments = _split_call(tag)
    if name == 'const':
        (a,) = _numbers(tag, arguments, (1,))
        return BoundaryExpression('const', a)
    if name == 'cosine':
        a, k = _numbers(tag, arguments, (2,))
        if k != int(k) or k < 0:
            raise ConfigError(f'the frequency in {tag!r} must be a non-negative integer')
        return BoundaryExpression('cosine', a, int(k))
    raise ConfigError(f'unknown boundary expression {name!r}, expected const(a) or cosine(a,k)')


@dataclass(frozen=True)
class InitialExpression:
    """
    u0 = 0 for `zero`, c for `const(c)`, a r cos(theta - deg) for `linear(a)` / `linear(a,deg)`,
    or the values of a field CSV for `custom-file(path)`.
    """

    kind: str
    value: float = 0.0
    degrees: float = 0.0
    path: Optional[str] = None

    def field(self, mesh: DiskMesh) -> ScalarField:
        if self.kind == 'zero':
            return ScalarField.constant(mesh)
        if self.kind == 'const':
            return ScalarField.constant(mesh, self.value)
        if self.kind == 'linear':
            shift = math.radians(self.degrees)
            return ScalarField.from_polar(mesh, lambda r, theta: self.value * r * np.cos(theta - shift))
        return ScalarField.from_csv(self.path, mesh)


def parse_initial_expression(tag: str) -> InitialExpression:
    name, arguments = _split_call(tag)
    if name == 'zero':
        _numbers(tag, arguments, (0,))
        return InitialExpression('zero')
    if name == 'const':
        (c,) = _numbers(tag, arguments, (1,))
        return InitialExpression('const', value=c)
    if name == 'linear':
        values = _numbers(tag, arguments, (1, 2))
        return InitialExpression('linear', value=values[0], degrees=values[1] if len(values) > 1 else 0.0)
    if name == 'custom-file':
        path = (arguments or '').strip()
        if not path:
            raise ConfigError(f'{tag!r} needs a file path')
        return InitialExpression('custom-file', path=path)
    raise ConfigError(f'unknown initial expression {name!r}, expected zero, const(c), linear(a[,deg]) or custom-file(path)')

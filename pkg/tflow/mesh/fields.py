import logging
from typing import Callable, Union

import numpy as np

from tflow.exceptions import MeshMismatchError, NonFiniteFieldError
from tflow.mesh.disk_mesh import DiskMesh
from tflow.utils import read_csv, write_csv

CSV_HEADER = ('r', 'theta', 'value')
# coordinates written with 17 digits read back to within this
_COORD_TOL = 1e-12


class ScalarField:
    """
    Node values bound to a DiskMesh (interior rings plus the boundary ring).

    Values are copied on construction and frozen; arithmetic returns new fields.
    """

    __slots__ = ('mesh', 'values')

    def __init__(self, mesh: DiskMesh, values):
        values = np.array(values, dtype=float)
        if values.shape != mesh.shape:
            raise MeshMismatchError(f'field of shape {values.shape} does not fit {mesh.tag} (shape {mesh.shape})')
        if not np.all(np.isfinite(values)):
            raise NonFiniteFieldError(f'field on {mesh.tag} holds {np.count_nonzero(~np.isfinite(values))} bad values')
        values.flags.writeable = False
        self.mesh = mesh
        self.values = values

    # --- constructors ---

    @classmethod
    def constant(cls, mesh: DiskMesh, value: float = 0.0) -> 'ScalarField':
        return cls(mesh, np.full(mesh.shape, float(value)))

    @classmethod
    def from_polar(cls, mesh: DiskMesh, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> 'ScalarField':
        "func(r, theta) evaluated at every node"
        values = np.broadcast_to(func(mesh.radius_grid, mesh.theta_grid), mesh.shape)
        return cls(mesh, values)

    @classmethod
    def from_cartesian(cls, mesh: DiskMesh, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> 'ScalarField':
        "func(x, y) with x = r cos(theta), y = r sin(theta)"
        r, theta = mesh.radius_grid, mesh.theta_grid
        values = np.broadcast_to(func(r * np.cos(theta), r * np.sin(theta)), mesh.shape)
        return cls(mesh, values)

    def with_values(self, values) -> 'ScalarField':
        return ScalarField(self.mesh, values)

    # --- views ---

    @property
    def tag(self) -> str:
        return self.mesh.tag

    @property
    def interior(self) -> np.ndarray:
        return self.values[:-1]

    @property
    def boundary(self) -> np.ndarray:
        return self.values[-1]

    def copy_values(self) -> np.ndarray:
        return np.array(self.values)

    # --- arithmetic ---

    def _other_values(self, other: Union['ScalarField', float]):
        if isinstance(other, ScalarField):
            require_same_mesh(self, other)
            return other.values
        return float(other)

    def __add__(self, other):
        return self.with_values(self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.with_values(self.values - self._other_values(other))

    def __rsub__(self, other):
        return self.with_values(self._other_values(other) - self.values)

    def __mul__(self, other):
        return self.with_values(self.values * self._other_values(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def oscillation(self, interior_only: bool = False) -> float:
        values = self.interior if interior_only else self.values
        return float(values.max() - values.min())

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())

    def __repr__(self):
        return f'ScalarField({self.tag}, min={self.values.min():.6g}, max={self.values.max():.6g})'

    # --- CSV snapshot format ---

    def to_csv(self, path: str):
        "Header `r,theta,value`, row-major over (i, j), 17 significant digits"
        mesh = self.mesh
        rows = (
            (mesh.r[i], mesh.theta[j], self.values[i, j]) for i in range(mesh.n_r + 1) for j in range(mesh.n_theta)
        )
        write_csv(path, CSV_HEADER, rows)

    @classmethod
    def from_csv(cls, path: str, mesh: DiskMesh) -> 'ScalarField':
        records = read_csv(path)
        if len(records) != mesh.node_count:
            raise MeshMismatchError(f'{path} holds {len(records)} nodes, {mesh.tag} has {mesh.node_count}')
        try:
            table = np.array([[float(rec[key]) for key in CSV_HEADER] for rec in records])
        except (KeyError, TypeError, ValueError) as err:
            raise MeshMismatchError(f'{path} is not a field snapshot ({err})')
        r = table[:, 0].reshape(mesh.shape)
        theta = table[:, 1].reshape(mesh.shape)
        if np.abs(r - mesh.radius_grid).max() > _COORD_TOL or np.abs(theta - mesh.theta_grid).max() > _COORD_TOL:
            raise MeshMismatchError(f'node coordinates in {path} do not match {mesh.tag}')
        logging.debug('Loaded field snapshot %s', path)
        return cls(mesh, table[:, 2].reshape(mesh.shape))


def require_same_mesh(*fields: ScalarField):
    first = fields[0]
    for other in fields[1:]:
        if other.mesh is not first.mesh and other.tag != first.tag:
            raise MeshMismatchError(f'fields live on different meshes: {first.tag} vs {other.tag}')

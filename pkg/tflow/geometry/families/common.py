from abc import ABCMeta, abstractmethod
from typing import Optional, Tuple

import numpy as np

# below this radius the curvature is read off at the cutoff (f and f'' both vanish at the pole)
CURVATURE_CUTOFF = 1e-4


class MetricFamily(metaclass=ABCMeta):
    """
    Common class for a rotationally symmetric metric family  sigma = dr^2 + f(r)^2 dtheta^2

    Subclasses supply the warping profile f and its first two derivatives in closed form.
    """

    FAMILY_NAME = None
    DEFAULT_PARAMS: Tuple[float, ...] = ()
    NEEDS_PROFILE = False

    def __init__(self, params: Tuple[float, ...], profile: Optional[str] = None, chart_radius: Optional[float] = None):
        self.params = tuple(float(param) for param in params)

    @property
    @abstractmethod
    def chart_radius(self) -> float:
        "Polar radius beyond which the chart stops being valid (f must stay positive inside)"
        pass

    @abstractmethod
    def f(self, r: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def df(self, r: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def ddf(self, r: np.ndarray) -> np.ndarray:
        pass

    def gauss_curvature(self, r: np.ndarray) -> np.ndarray:
        "K = -f''/f"
        r = np.maximum(np.asarray(r, dtype=float), CURVATURE_CUTOFF)
        return -self.ddf(r) / self.f(r)

    def describe(self) -> str:
        if not self.params:
            return self.FAMILY_NAME
        return f"{self.FAMILY_NAME}({', '.join(f'{param:g}' for param in self.params)})"

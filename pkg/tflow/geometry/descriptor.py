from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from tflow.exceptions import InvalidMetricError
from tflow.geometry.families import MetricFamily, get_family_names


@dataclass(frozen=True)
class MetricDescriptor:
    "An analytic metric family on a polar-type chart, selected by tag and parameters"

    family: str
    params: tuple
    chart_radius: float
    impl: MetricFamily = field(compare=False, repr=False)
    profile: Optional[str] = None

    def f(self, r) -> np.ndarray:
        return self.impl.f(r)

    def df(self, r) -> np.ndarray:
        return self.impl.df(r)

    def ddf(self, r) -> np.ndarray:
        return self.impl.ddf(r)

    def gauss_curvature(self, r) -> np.ndarray:
        return self.impl.gauss_curvature(r)

    def contains_radius(self, r: float) -> bool:
        return 0.0 <= r < self.chart_radius

    @property
    def tag(self) -> str:
        return self.impl.describe()


def make_descriptor(
    family: str,
    params: Sequence[float] = (),
    profile: Optional[str] = None,
    chart_radius: Optional[float] = None,
) -> MetricDescriptor:
    families = get_family_names()
    if family not in families:
        raise InvalidMetricError(f'unknown metric family {family!r}, expected one of {sorted(families)}')
    family_class = families[family]
    if not family_class.NEEDS_PROFILE and (profile is not None or chart_radius is not None):
        raise InvalidMetricError(f'{family} has a closed-form profile and chart, do not set profile or chart_radius')

    impl = family_class(tuple(params), profile=profile, chart_radius=chart_radius)
    return MetricDescriptor(
        family=family,
        params=impl.params,
        chart_radius=impl.chart_radius,
        impl=impl,
        profile=getattr(impl, 'profile', None),
    )

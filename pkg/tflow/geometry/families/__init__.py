from typing import Dict, Type

from tflow.geometry.families.common import MetricFamily

from tflow.geometry.families.custom_diagonal import CustomDiagonalFamily  # noqa: F401 isort:skip
from tflow.geometry.families.flat import FlatFamily  # noqa: F401 isort:skip
from tflow.geometry.families.sphere_cap import SphereCapFamily  # noqa: F401 isort:skip

ALL_FAMILIES = [Class for name, Class in globals().items() if name.endswith('Family') and name != 'MetricFamily']


def get_family_names() -> Dict[str, Type[MetricFamily]]:
    return {family.FAMILY_NAME: family for family in ALL_FAMILIES}

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from tflow.diagnostics.checks import (
    check_compatibility,
    check_drift_bounded,
    check_gradient_bound,
    check_hypotheses,
    check_osc_contraction,
    check_translator_convergence,
    check_ut_max_principle,
)
from tflow.exceptions import DiagnosticsError
from tflow.types import CheckResult, CheckStatus
from tflow.utils import write_csv

CHECK_NAMES = (
    'compatibility',
    'ricci_nonneg',
    'boundary_convex',
    'barrier_exists',
    'ut_max_principle',
    'gradient_bound_stable',
    'osc_contraction',
    'drift_bounded',
    'translator_convergence',
)
CSV_HEADER = ('check', 'status', 'margin', 'tolerance')


@dataclass
class DiagnosticsReport:
    checks: Dict[str, CheckResult]
    extras: List[CheckResult] = field(default_factory=list)

    def __post_init__(self):
        missing = [name for name in CHECK_NAMES if name not in self.checks]
        if missing:
            raise DiagnosticsError(f'diagnostics report is missing {", ".join(missing)}')

    @classmethod
    def from_results(cls, results: List[CheckResult], extras: List[CheckResult] = None) -> 'DiagnosticsReport':
        return cls({result.name: result for result in results}, list(extras or []))

    def __getitem__(self, name: str) -> CheckResult:
        return self.checks[name]

    def ordered(self) -> List[CheckResult]:
        return [self.checks[name] for name in CHECK_NAMES] + list(self.extras)

    @property
    def all_passed(self) -> bool:
        "Every named check passed outright; an extra only must not fail"
        named = all(self.checks[name].status is CheckStatus.PASS for name in CHECK_NAMES)
        return named and all(result.passed for result in self.extras)

    @property
    def failed(self) -> List[CheckResult]:
        return [result for result in self.ordered() if result.status is CheckStatus.FAIL]

    def rows(self):
        return [(result.name, result.status.value, result.margin, result.tolerance) for result in self.ordered()]

    def to_csv(self, path: str):
        write_csv(path, CSV_HEADER, self.rows())


def build_report(
    flow_result, alt_flow_result, translator_result, extras: Optional[List[CheckResult]] = None
) -> DiagnosticsReport:
    """
    Runs the nine named checks. Compatibility is measured on the initial data the flow actually started
    from (after a repair, if one happened).
    """
    mesh = flow_result.mesh
    initial = flow_result.snapshots[0].u
    ricci, convex, barrier = check_hypotheses(mesh.descriptor, mesh)
    results = [
        check_compatibility(initial, flow_result.phi),
        ricci,
        convex,
        barrier,
        check_ut_max_principle(flow_result),
        check_gradient_bound(flow_result),
        check_osc_contraction(flow_result, alt_flow_result),
        check_drift_bounded(flow_result),
        check_translator_convergence(flow_result, translator_result),
    ]
    return DiagnosticsReport.from_results(results, extras)

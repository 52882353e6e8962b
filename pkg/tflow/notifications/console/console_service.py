import math
from typing import Sequence, Tuple

from tflow.notifications.notification_service import NotificationService
from tflow.types import CheckStatus
from tflow.utils import Log


def _format_value(value) -> str:
    if isinstance(value, bool) or not isinstance(value, float):
        return str(value)
    if math.isnan(value):
        return '---'
    return f'{value:.10g}'


class ConsoleService(NotificationService):
    def notify_about_report(self, report) -> None:
        """
        Prints the diagnostics table, one colored line per check.
        @param report: The DiagnosticsReport of the run.
        """
        print('')
        width = max(len(result.name) for result in report.ordered())
        for result in report.ordered():
            line = f'{result.name:<{width}}  {result.status.value:<14}  margin {result.margin:<12.4g} tol {result.tolerance:.3g}'
            if result.status is CheckStatus.PASS:
                print(Log.success_str('✓ ' + line))
            elif result.status is CheckStatus.FAIL:
                print(Log.error_str('✗ ' + line))
            else:
                print(Log.cyan_str('- ' + line))
            if result.detail:
                print(Log.info_str('    ' + result.detail))
        print('')

        failed = report.failed
        if failed:
            Log.error(f'{len(failed)} 项检查未通过：' + ', '.join(result.name for result in failed))
        else:
            Log.success('全部检查通过。')

    def notify_about_results(self, title: str, items: Sequence[Tuple[str, object]]) -> None:
        print('')
        Log.info(title)
        width = max((len(name) for name, _ in items), default=0)
        for name, value in items:
            print(Log.cyan_str(f'  {name:<{width}}') + '  ' + _format_value(value))
        print('')

    def notify_about_error(self, error_description: str):
        Log.error(f'执行过程中发生以下错误：\n{error_description}')

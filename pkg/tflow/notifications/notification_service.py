from abc import ABCMeta, abstractmethod
from typing import Sequence, Tuple


class NotificationService(metaclass=ABCMeta):
    "Common class for a notification service"

    def __init__(self, run_config=None):
        self.run_config = run_config

    @abstractmethod
    def notify_about_report(self, report) -> None:
        """
        Presents the diagnostics of a verify run.
        The caller shouldn't care about if the sending was successful.
        @param report: The DiagnosticsReport of the run.
        """
        pass

    @abstractmethod
    def notify_about_results(self, title: str, items: Sequence[Tuple[str, object]]) -> None:
        """
        Presents named scalar results (lambda estimates, residuals, ...).
        @param title: A headline for the block.
        @param items: (name, value) pairs in display order.
        """
        pass

    @abstractmethod
    def notify_about_error(self, error_description: str) -> None:
        """
        Sends out a Notification to inform about an error encountered during
        the execution of the program.
        The caller shouldn't care about if the sending was successful.
        @param error_description: The error text.
        """
        pass

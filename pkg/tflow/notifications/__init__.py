from typing import List

from tflow.notifications.console.console_service import ConsoleService
from tflow.notifications.notification_service import NotificationService

__all__ = ['ConsoleService', 'NotificationService']

ALL_SERVICES = [ConsoleService]


def get_all_notify_services(run_config=None) -> List[NotificationService]:
    result_list = []
    for service in ALL_SERVICES:
        result_list.append(service(run_config))
    return result_list

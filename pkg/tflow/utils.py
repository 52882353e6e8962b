import csv
import logging
import re
import sys
import time
from pathlib import Path
from typing import Iterable, List, Sequence

from colorama import Fore, Style


def check_debug() -> bool:
    """Return if the debugger is currently active"""
    return 'pydevd' in sys.modules or (hasattr(sys, 'gettrace') and sys.gettrace() is not None)


def format_seconds(seconds):
    (mins, secs) = divmod(seconds, 60)
    (hours, mins) = divmod(mins, 60)
    if hours > 99:
        return '--:--:--'
    if hours == 0:
        return f'{int(mins):02d}:{int(secs):02d}'
    return f'{int(hours):02d}:{int(mins):02d}:{int(secs):02d}'


def calc_rate(start, now, count):
    dif = now - start
    if count <= 0 or dif < 0.001:  # One millisecond
        return None
    return float(count) / dif


def format_rate(rate, unit='steps'):
    if rate is None:
        return f"{'---' + unit + '/s':14}"
    return f'{rate:9.1f} {unit}/s'


def format_float(value: float) -> str:
    """17 significant digits, enough to round-trip a double"""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return '%.17g' % value


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]):
    """Writes a CSV with `.` decimals, `\\n` line endings and UTF-8; floats keep 17 digits."""
    PathTools.make_base_dir(path)
    with open(path, 'w', encoding='utf-8', newline='') as csv_file:
        writer = csv.writer(csv_file, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(cell) if isinstance(cell, (int, float)) else cell for cell in row])


def read_csv(path: str) -> List[dict]:
    with open(path, 'r', encoding='utf-8', newline='') as csv_file:
        return list(csv.DictReader(csv_file))


class Timer:
    '''
    Wall-clock stopwatch for runs and progress lines:

    with Timer() as timer:
        run_flow(u0, phi, config)
    logging.info('flow took %s', format_seconds(timer.duration))
    '''

    def __init__(self):
        self.start = 0.0
        self.duration = 0.0

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *args):
        self.duration = time.perf_counter() - self.start

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


class PathTools:
    """Path helpers for run directories and their artifacts."""

    @staticmethod
    def to_valid_name(name: str, max_length: int = 100) -> str:
        """
        Turns a label like `a=-0.05` into a directory name usable on every platform.
        """
        name = re.sub(r'[^A-Za-z0-9._=+-]', '_', name.strip())
        name = name.strip('.') or '_'
        return name[:max_length]

    @staticmethod
    def make_path(path: str, *filenames: str) -> str:
        return str(Path(path).joinpath(*filenames))

    @staticmethod
    def make_base_dir(path_to_file: str):
        PathTools.make_dirs(str(Path(path_to_file).parent))

    @staticmethod
    def make_dirs(path_to_dir: str):
        Path(path_to_dir).mkdir(parents=True, exist_ok=True)


class ProcessLock:
    """
    A `running.lock` marker so two jobs never write into the same run directory.

    Check and creation are not atomic, two runs started in the same instant can both pass.
    """

    LOCK_NAME = 'running.lock'

    class LockError(Exception):
        """An Exception which gets thrown if a run directory is already in use."""

        pass

    @staticmethod
    def lock(dir_path: str):
        lock_file = Path(dir_path) / ProcessLock.LOCK_NAME
        if lock_file.exists():
            raise ProcessLock.LockError(
                f'A run is already writing here. Delete {lock_file} if you think this is wrong.'
            )
        lock_file.touch()

    @staticmethod
    def unlock(dir_path: str):
        try:
            (Path(dir_path) / ProcessLock.LOCK_NAME).unlink()
        except OSError:
            logging.debug('No lock to remove in %s', dir_path)


class Log:
    """
    Colored lines for the console report (diagnostics table, result blocks).
    Everything else goes through the logging module.
    """

    @staticmethod
    def colored(log_string: str, color: str) -> str:
        return Style.BRIGHT + color + log_string + Style.RESET_ALL

    @staticmethod
    def info_str(log_string: str):
        return Log.colored(log_string, Fore.WHITE)

    @staticmethod
    def success_str(log_string: str):
        return Log.colored(log_string, Fore.GREEN)

    @staticmethod
    def error_str(log_string: str):
        return Log.colored(log_string, Fore.RED)

    @staticmethod
    def cyan_str(log_string: str):
        return Log.colored(log_string, Fore.CYAN)

    @staticmethod
    def info(log_string: str):
        print(Log.info_str(log_string))

    @staticmethod
    def success(log_string: str):
        print(Log.success_str(log_string))

    @staticmethod
    def error(log_string: str):
        print(Log.error_str(log_string))

import argparse
import logging
import os
import sys
import traceback
from logging.handlers import RotatingFileHandler

import colorlog
import sentry_sdk
from colorama import just_fix_windows_console

from tflow.cli.commands import cmd_flow, cmd_translator, cmd_verify
from tflow.cli.sweep_service import cmd_sweep
from tflow.config import ConfigHelper, parse_config
from tflow.exceptions import TflowError
from tflow.notifications import get_all_notify_services
from tflow.types import RunConfig, TflowOpts
from tflow.utils import PathTools as PT
from tflow.utils import ProcessLock, check_debug
from tflow.version import __version__

COMMANDS = ('flow', 'translator', 'verify', 'sweep')
LOG_FILE = 'tflow.log'
JOBS_ENV = 'TFLOW_JOBS'


class ReRaiseOnError(logging.StreamHandler):
    "Re-raises exceptions attached to log records, so a debugger stops where a run failed"

    def emit(self, record):
        if hasattr(record, 'exception'):
            raise record.exception


def error_line(err: BaseException) -> str:
    "One machine-readable line: tflow-error code=<code> type=<Class> message=\"...\""
    code = getattr(err, 'code', 'internal')
    message = ' '.join(str(err).split()).replace('\\', '\\\\').replace('"', '\\"')
    return f'tflow-error code={code} type={type(err).__name__} message="{message}"'


def connect_sentry(run_config: RunConfig) -> bool:
    "True if a DSN is configured and accepted"
    try:
        if run_config.sentry_dsn:
            sentry_sdk.init(run_config.sentry_dsn)
            return True
    except (ValueError, sentry_sdk.utils.BadDsn, sentry_sdk.utils.ServerlessTimeoutWarning):
        pass
    return False


def choose_task(run_config: RunConfig, opts: TflowOpts, out_dir: str) -> int:
    if opts.command == 'flow':
        return cmd_flow(run_config, out_dir)
    if opts.command == 'translator':
        return cmd_translator(run_config, out_dir)
    if opts.command == 'verify':
        return cmd_verify(run_config, out_dir)
    return cmd_sweep(run_config, out_dir, opts.jobs)


def run_main(run_config: RunConfig, opts: TflowOpts, out_dir: str) -> int:
    sentry_connected = connect_sentry(run_config)
    notify_services = get_all_notify_services(run_config)
    try:
        return choose_task(run_config, opts, out_dir)
    except BaseException as base_err:
        if sentry_connected:
            sentry_sdk.capture_exception(base_err)

        short_error = str(base_err)
        if not short_error or short_error.isspace():
            short_error = traceback.format_exc(limit=1)

        for service in notify_services:
            service.notify_about_error(short_error)

        raise base_err


def _level(opts: TflowOpts) -> int:
    if opts.quiet:
        return logging.ERROR
    if opts.verbose:
        return logging.DEBUG
    return logging.INFO


def setup_logger(opts: TflowOpts):
    stdout_log_handler = colorlog.StreamHandler()
    if sys.stdout.isatty() and not opts.verbose:
        stdout_log_handler.setFormatter(colorlog.ColoredFormatter('%(log_color)s%(asctime)s %(message)s', '%H:%M:%S'))
    else:
        stdout_log_handler.setFormatter(
            colorlog.ColoredFormatter(
                '%(log_color)s%(asctime)s  %(levelname)s  {%(module)s}  %(message)s', '%Y-%m-%d %H:%M:%S'
            )
        )

    app_log = logging.getLogger()
    app_log.setLevel(_level(opts))
    stdout_log_handler.setLevel(_level(opts))
    app_log.addHandler(stdout_log_handler)

    if opts.verbose:
        logging.debug('tflow version: %s', __version__)
        logging.debug('python version: %s', ".".join(map(str, sys.version_info[:3])))

    if check_debug():
        logging.info('Debugger detected, logged errors will be re-raised.')
        app_log.addHandler(ReRaiseOnError())


def add_file_logger(opts: TflowOpts, log_dir: str):
    "The rotating log file lives in --log-file-path, or in the run directory"
    PT.make_dirs(log_dir)
    file_log_handler = RotatingFileHandler(
        PT.make_path(log_dir, LOG_FILE),
        mode='a',
        maxBytes=1 * 1024 * 1024,
        backupCount=2,
        encoding='utf-8',
        delay=0,
    )
    file_log_handler.setFormatter(
        logging.Formatter('%(asctime)s  %(levelname)s  {%(module)s}  %(message)s', '%Y-%m-%d %H:%M:%S')
    )
    file_log_handler.setLevel(_level(opts))
    logging.getLogger().addHandler(file_log_handler)


def get_parser():
    def _dir_path(path):
        if os.path.isdir(path):
            return path
        raise argparse.ArgumentTypeError(f'"{str(path)}" is not a valid path. Make sure the directory exists.')

    def _jobs(value):
        try:
            jobs = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f'"{value}" is not a number of jobs')
        if jobs < 1:
            raise argparse.ArgumentTypeError('the number of jobs must be at least 1')
        return jobs

    parser = argparse.ArgumentParser(
        description=(
            'tflow simulates nonparametric mean curvature flow with Neumann data on a Riemannian disk'
            + ' and checks its convergence to a translating solution.'
        )
    )

    parser.add_argument(
        'command',
        choices=COMMANDS,
        help=(
            'flow: run the flow; translator: compute lambda and w by eps continuation;'
            + ' verify: run both and evaluate all diagnostics; sweep: map a to lambda(a) for phi = a'
        ),
    )

    parser.add_argument(
        '--config',
        dest='config',
        required=True,
        type=str,
        help='Path of the run configuration (flat `key = value` file).',
    )

    parser.add_argument(
        '--out',
        dest='out',
        default=None,
        type=str,
        help='Run directory for all CSV artifacts. (default: output_dir from the configuration)',
    )

    parser.add_argument(
        '--jobs',
        dest='jobs',
        default=None,
        type=_jobs,
        help=f'Number of parallel sweep jobs. (default: ${JOBS_ENV} or 1)',
    )

    parser.add_argument(
        '--version',
        action='version',
        version='tflow ' + __version__,
        help='Print program version and exit',
    )

    parser.add_argument(
        '-v',
        '--verbose',
        dest='verbose',
        default=False,
        action='store_true',
        help='Print various debugging information',
    )

    parser.add_argument(
        '-q',
        '--quiet',
        dest='quiet',
        default=False,
        action='store_true',
        help='Sets the log level to error',
    )

    parser.add_argument(
        '-ltf',
        '--log-to-file',
        dest='log_to_file',
        default=False,
        action='store_true',
        help=f'Log all output additionally to a log file called {LOG_FILE}',
    )

    parser.add_argument(
        '-lfp',
        '--log-file-path',
        dest='log_file_path',
        default=None,
        type=_dir_path,
        help=(
            'Sets the location of the log files created with --log-to-file. PATH must be an existing directory'
            + ' in which you have read and write access. (default: the run directory)'
        ),
    )

    return parser


def post_process_opts(opts: TflowOpts):
    if opts.jobs is None:
        env_jobs = os.environ.get(JOBS_ENV, '').strip()
        try:
            opts.jobs = max(1, int(env_jobs)) if env_jobs else 1
        except ValueError:
            logging.warning('Ignoring %s=%r, it is not a number', JOBS_ENV, env_jobs)
            opts.jobs = 1
    return opts


# --- console entry point: tflow = tflow.main:main ---------------------------
def main(args=None):
    just_fix_windows_console()
    opts = post_process_opts(TflowOpts(**vars(get_parser().parse_args(args))))
    setup_logger(opts)

    try:
        run_config = parse_config(opts.config)
    except ConfigHelper.NoConfigError as err_config:
        logging.error('Error: %s', err_config)
        print(error_line(err_config), file=sys.stderr)
        sys.exit(2)
    except TflowError as err:
        logging.error('Invalid configuration: %s', err)
        print(error_line(err), file=sys.stderr)
        sys.exit(2)

    out_dir = opts.out or run_config.output_dir
    PT.make_dirs(out_dir)
    if opts.log_to_file:
        add_file_logger(opts, opts.log_file_path or out_dir)

    try:
        if not check_debug():
            ProcessLock.lock(out_dir)

        exit_code = run_main(run_config, opts, out_dir)

        logging.info('全部完成。正在退出..')
        ProcessLock.unlock(out_dir)
    except BaseException as base_err:  # pylint: disable=broad-except
        if not isinstance(base_err, ProcessLock.LockError):
            ProcessLock.unlock(out_dir)

        if opts.verbose or check_debug():
            logging.error(traceback.format_exc(), extra={'exception': base_err})
        else:
            logging.error('Exception: %s', base_err)
        print(error_line(base_err), file=sys.stderr)

        logging.debug('Exception-Handling completed. Exiting...')

        sys.exit(1)

    sys.exit(exit_code)

# -*- coding: utf-8 -*-
'''
    sunprop.process
    ~~~~~~~~~~~~~~~

    Worker count discovery, memory reporting and clean termination of the
    worker processes left behind by an interrupted ensemble run.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import os
import errno
import logging

# Import 3rd-party libs
import psutil

log = logging.getLogger(__name__)


def default_workers():
    '''
    Number of physical cores, at least one
    '''
    count = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return max(1, count)


def resident_memory_mb(pid=None):
    '''
    Resident set size of ``pid`` (this process by default) in MiB
    '''
    try:
        return psutil.Process(pid or os.getpid()).memory_info().rss / 1024.0 ** 2
    except psutil.NoSuchProcess:
        return 0.0


def collect_child_processes(pid):
    '''
    Children of ``pid``, deepest first
    '''
    try:
        children = psutil.Process(pid).children(recursive=True)
    except psutil.NoSuchProcess:
        children = []
    return children[::-1]


def _describe(process):
    try:
        return ' '.join(process.cmdline()) or process.name()
    except (psutil.NoSuchProcess, psutil.AccessDenied):
        return '<pid {0}>'.format(process.pid)


def _signal_process_list(process_list, kill=False):
    for process in process_list[:]:
        if not psutil.pid_exists(process.pid):
            process_list.remove(process)
            continue
        try:
            if not kill and process.status() == psutil.STATUS_ZOMBIE:
                continue
            if kill:
                log.info('Killing process(%s): %s', process.pid, process._description)
                process.kill()
            else:
                log.info('Terminating process(%s): %s', process.pid, process._description)
                try:
                    process.terminate()
                except OSError as exc:
                    if exc.errno not in (errno.ESRCH, errno.EACCES):
                        raise
            if not psutil.pid_exists(process.pid):
                process_list.remove(process)
        except psutil.NoSuchProcess:
            process_list.remove(process)


def terminate_process_list(process_list, timeout=10):
    '''
    Terminate ``process_list``, then kill whatever is still running after
    ``timeout`` seconds
    '''
    def on_process_terminated(proc):
        log.info('Process %s terminated with exit code: %s', proc._description, proc.returncode)

    for process in process_list:
        process._description = _describe(process)

    _signal_process_list(process_list)
    gone, alive = psutil.wait_procs(process_list, timeout=timeout, callback=on_process_terminated)
    if alive:
        _signal_process_list(alive, kill=True)
        gone, alive = psutil.wait_procs(alive, timeout=timeout, callback=on_process_terminated)
    if alive:
        log.warning('Some processes failed to properly terminate: %s', alive)
    return alive


def terminate_children(pid=None):
    '''
    Terminate every child process of ``pid`` (this process by default)
    '''
    children = collect_child_processes(pid or os.getpid())
    if not children:
        return []
    log.info('Terminating %d child process(es)', len(children))
    return terminate_process_list(children)

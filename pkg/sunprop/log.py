# -*- coding: utf-8 -*-
'''
    sunprop.log
    ~~~~~~~~~~~

    Logging setup shared by the command line tools. Adds the ``TRACE`` and
    ``GARBAGE`` levels, a console handler whose level follows ``-v`` and a
    file handler fed, on creation, with every record buffered so far.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import sys
import logging

TRACE = 5
GARBAGE = 1

LOG_FORMAT = ('%(asctime)s,%(msecs)03.0f [%(name)-5s:%(lineno)-4d]'
              '[%(levelname)-8s] %(message)s')
LOG_DATEFMT = '%H:%M:%S'

# verbosity count -> console level, -vv and up
VERBOSITY_LEVELS = {
    2: logging.INFO,
    3: logging.DEBUG,
    4: TRACE,
    5: GARBAGE,
}


def register_levels():
    '''
    Make ``logging.TRACE`` and ``logging.GARBAGE`` known to :mod:`logging`
    '''
    if not hasattr(logging, 'TRACE'):
        logging.TRACE = TRACE
        logging.addLevelName(TRACE, 'TRACE')
    if not hasattr(logging, 'GARBAGE'):
        logging.GARBAGE = GARBAGE
        logging.addLevelName(GARBAGE, 'GARBAGE')


register_levels()


class TemporaryLoggingHandler(logging.NullHandler):
    '''
    Keeps log records in memory until the real handlers exist
    '''

    def __init__(self, level=logging.NOTSET, max_queue_size=10000):
        self.__max_queue_size = max_queue_size
        super(TemporaryLoggingHandler, self).__init__(level=level)
        self.__messages = []

    def handle(self, record):
        self.acquire()
        if len(self.__messages) >= self.__max_queue_size:
            # Drop the oldest records
            self.__messages.pop(0)
        self.__messages.append(record)
        self.release()

    def sync_with_handlers(self, handlers=()):
        '''
        Replay the stored records into ``handlers`` and forget them
        '''
        while self.__messages:
            record = self.__messages.pop(0)
            for handler in handlers:
                if handler.level > record.levelno:
                    continue
                handler.handle(record)


def get_formatter():
    return logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT)


def install_temporary_handler():
    '''
    Attach a :class:`TemporaryLoggingHandler` to the root logger, once
    '''
    for handler in logging.root.handlers:
        if isinstance(handler, TemporaryLoggingHandler):
            return handler
    handler = TemporaryLoggingHandler()
    logging.root.addHandler(handler)
    logging.root.setLevel(logging.NOTSET)
    return handler


def remove_temporary_handler(handlers=()):
    '''
    Flush the buffered records into ``handlers`` and detach the buffer
    '''
    for handler in logging.root.handlers[:]:
        if isinstance(handler, TemporaryLoggingHandler):
            handler.sync_with_handlers(handlers)
            logging.root.removeHandler(handler)


def setup_console_logging(verbosity, stream=None):
    '''
    Add a console handler for ``verbosity`` (the ``-v`` count). Below two
    nothing is added and ``None`` is returned.
    '''
    if verbosity < 2:
        return None
    level = VERBOSITY_LEVELS.get(verbosity, GARBAGE)
    consolehandler = logging.StreamHandler(stream or sys.stderr)
    consolehandler.setLevel(level)
    consolehandler.setFormatter(get_formatter())
    logging.root.addHandler(consolehandler)
    return consolehandler


def setup_logfile_logging(log_file):
    '''
    Log everything down to DEBUG into ``log_file``, truncated on each run
    '''
    filehandler = logging.FileHandler(mode='w', filename=log_file)
    filehandler.setLevel(logging.DEBUG)
    filehandler.setFormatter(get_formatter())
    logging.root.addHandler(filehandler)
    return filehandler

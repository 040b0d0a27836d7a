# -*- coding: utf-8 -*-
'''
    sunprop.testing
    ~~~~~~~~~~~~~~~

    Helpers shared by the test suites.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import os
import inspect
import logging
import unittest
from functools import wraps

# Import 3rd-party libs
import numpy as np


def expensive_tests_enabled():
    return os.environ.get('EXPENSIVE_TESTS', 'False').lower() not in ('false', '0', '')


def expensiveTest(caller):
    '''
    Mark a test case, or a whole class, as a scenario-scale run. It is
    skipped unless ``EXPENSIVE_TESTS`` is true.

    .. code-block:: python

        class CollapseRevivalTestCase(TestCase):

            @expensiveTest
            def test_envelope(self):
                pass
    '''
    if inspect.isclass(caller):
        old_setUp = getattr(caller, 'setUp', None)

        def setUp(self, *args, **kwargs):
            if not expensive_tests_enabled():
                self.skipTest('Expensive tests are disabled')
            if old_setUp is not None:
                old_setUp(self, *args, **kwargs)
        caller.setUp = setUp
        return caller

    @wraps(caller)
    def wrap(cls):
        if not expensive_tests_enabled():
            cls.skipTest('Expensive tests are disabled')
        return caller(cls)
    return wrap


class TestsLoggingHandler(object):
    '''
    Collects the log records emitted while active:

    .. code-block:: python

        with TestsLoggingHandler() as handler:
            run_something()
            handler.messages
    '''

    def __init__(self, level=0, format='%(levelname)s:%(message)s'):
        self.level = level
        self.format = format
        self.activated = False
        self.prev_logging_level = None
        self.handler = None

    def activate(self):
        class Handler(logging.Handler):
            def __init__(self, level):
                logging.Handler.__init__(self, level)
                self.messages = []

            def emit(self, record):
                self.messages.append(self.format(record))

        self.handler = Handler(self.level)
        self.handler.setFormatter(logging.Formatter(self.format))
        logging.root.addHandler(self.handler)
        self.activated = True
        current_logging_level = logging.root.getEffectiveLevel()
        if current_logging_level > self.level:
            self.prev_logging_level = current_logging_level
            logging.root.setLevel(self.level)

    def deactivate(self):
        if not self.activated:
            return
        logging.root.removeHandler(self.handler)
        if self.prev_logging_level is not None:
            logging.root.setLevel(self.prev_logging_level)
        self.activated = False

    @property
    def messages(self):
        if self.handler is None:
            return []
        return self.handler.messages

    def clear(self):
        if self.handler is not None:
            self.handler.messages = []

    def __enter__(self):
        self.activate()
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.deactivate()


class TestCase(unittest.TestCase):
    '''
    :class:`unittest.TestCase` with numerical assertions
    '''

    def assertArrayClose(self, actual, expected, rtol=1e-7, atol=0.0, msg=None):
        actual = np.asarray(actual)
        expected = np.asarray(expected)
        try:
            np.testing.assert_allclose(actual, expected, rtol=rtol, atol=atol)
        except AssertionError as exc:
            self.fail(self._formatMessage(msg, str(exc)))

    def assertComplexClose(self, actual, expected, atol=1e-10, msg=None):
        difference = abs(complex(actual) - complex(expected))
        if difference > atol:
            standard = '{0!r} != {1!r} within {2!r} (difference {3!r})'.format(
                actual, expected, atol, difference
            )
            self.fail(self._formatMessage(msg, standard))

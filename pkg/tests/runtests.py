#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''
    tests.runtests
    ~~~~~~~~~~~~~~

    Discover and run the sunprop test suites

    .. code-block:: bash

        python tests/runtests.py --unit
        python tests/runtests.py --integration --run-expensive -vv
        python tests/runtests.py -n unit.test_ivr

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import os
import sys
import logging
import optparse
import unittest

TESTS_DIR = os.path.dirname(os.path.abspath(__file__))
CODE_DIR = os.path.dirname(TESTS_DIR)
if CODE_DIR not in sys.path:
    sys.path.insert(0, CODE_DIR)
if TESTS_DIR not in sys.path:
    sys.path.insert(0, TESTS_DIR)

# Import sunprop libs
import sunprop.log  # pylint: disable=wrong-import-position
from sunprop import process  # pylint: disable=wrong-import-position
from sunprop.console import print_header, terminal_width  # pylint: disable=wrong-import-position

log = logging.getLogger(__name__)

SUITES = (
    ('unit', 'Unit'),
    ('integration', 'Integration'),
)


class SUnPropTestsParser(optparse.OptionParser):

    def __init__(self, testsuite_directory, *args, **kwargs):
        optparse.OptionParser.__init__(self, *args, **kwargs)
        self.testsuite_directory = testsuite_directory
        self.testsuite_results = []
        self.options = None

        selection = optparse.OptionGroup(
            self,
            'Tests Selection Options',
            'Select which tests are to be executed'
        )
        selection.add_option(
            '--unit',
            default=False,
            action='store_true',
            help='Run the unit tests'
        )
        selection.add_option(
            '--integration',
            default=False,
            action='store_true',
            help='Run the scenario integration tests'
        )
        selection.add_option(
            '--run-expensive',
            default=False,
            action='store_true',
            help='Run the expensive tests, full scenario runs taking minutes. Default: %default'
        )
        selection.add_option(
            '-n',
            '--name',
            dest='name',
            action='append',
            default=None,
            help='Specific test name to run. A named test is the module path relative to the tests directory'
        )
        self.add_option_group(selection)

        output = optparse.OptionGroup(self, 'Output Options')
        output.add_option(
            '-v',
            '--verbose',
            dest='verbosity',
            default=1,
            action='count',
            help='Verbose test runner output'
        )
        output.add_option(
            '--output-columns',
            default=terminal_width(),
            type=int,
            help='Number of maximum columns to use on the output'
        )
        output.add_option(
            '--no-report',
            default=False,
            action='store_true',
            help='Do NOT show the overall tests report'
        )
        self.add_option_group(output)

    def parse_args(self, args=None, values=None):
        self.options, arguments = optparse.OptionParser.parse_args(self, args, values)
        if arguments:
            self.error('Unexpected arguments: {0}'.format(' '.join(arguments)))
        if self.options.run_expensive:
            os.environ['EXPENSIVE_TESTS'] = 'True'
        if not self.options.name and not self.options.unit and not self.options.integration:
            self.options.unit = self.options.integration = True
        handler = sunprop.log.setup_console_logging(max(self.options.verbosity - 1, 0))
        sunprop.log.remove_temporary_handler([handler] if handler is not None else [])
        return self.options, arguments

    def run_suite(self, display_name, path=None, name=None):
        '''
        Execute a test suite, either discovered below ``path`` or loaded by
        ``name``
        '''
        loader = unittest.TestLoader()
        try:
            if name is not None:
                tests = loader.loadTestsFromName(name)
            else:
                tests = loader.discover(path, 'test_*.py', self.testsuite_directory)
        except (AttributeError, ImportError):
            print('Could not locate test \'{0}\'. Exiting.'.format(display_name))
            sys.exit(1)

        header = '{0} Tests'.format(display_name)
        print_header('Starting {0}'.format(header), width=self.options.output_columns)
        results = unittest.TextTestRunner(stream=sys.stdout, verbosity=self.options.verbosity).run(tests)
        self.testsuite_results.append((header, results))
        return results.wasSuccessful()

    def print_overall_testsuite_report(self):
        '''
        Print a nicely formatted report about the test suite results
        '''
        width = self.options.output_columns
        print()
        print_header('  Overall Tests Report  ', sep='=', centered=True, inline=True, width=width)

        failures = errors = skipped = passed = 0
        no_problems_found = True
        for (name, results) in self.testsuite_results:
            failures += len(results.failures)
            errors += len(results.errors)
            skipped += len(results.skipped)
            passed += results.testsRun - len(results.failures + results.errors + results.skipped)

            if not results.failures and not results.errors and not results.skipped:
                continue

            no_problems_found = False
            print_header('*** {0}  '.format(name), sep='*', inline=True, width=width)
            for title, entries in (('Skipped Tests', results.skipped),
                                   ('Tests with Errors', results.errors),
                                   ('Failed Tests', results.failures)):
                if not entries:
                    continue
                print_header(' --------  {0}  '.format(title), sep='-', inline=True, width=width)
                for testcase, reason in entries:
                    if title == 'Skipped Tests':
                        print('   -> {0}  ->  {1}'.format(testcase.id(), reason))
                        continue
                    print_header('   -> {0}  '.format(testcase.id()), sep='.', inline=True, width=width)
                    for line in reason.rstrip().splitlines():
                        print('       {0}'.format(line.rstrip()))
                print_header(' ', sep='-', inline=True, width=width)

        if no_problems_found:
            print_header('***  No Problems Found While Running Tests  ', sep='*', inline=True, width=width)

        print_header('', sep='=', inline=True, width=width)
        total = sum([passed, skipped, errors, failures])
        print('{0} (total={1}, skipped={2}, passed={3}, failures={4}, errors={5}) '.format(
            (errors or failures) and 'FAILED' or 'OK', total, skipped, passed, failures, errors))
        print_header('  Overall Tests Report  ', sep='=', centered=True, inline=True, width=width)

    def finalize(self, exit_code=0):
        '''
        Show the report, terminate stray worker processes and exit
        '''
        if self.options.no_report is False:
            self.print_overall_testsuite_report()
        process.terminate_children()
        log.info('Test suite execution finalized with exit code: {0}'.format(exit_code))
        self.exit(exit_code)


def main():
    sunprop.log.install_temporary_handler()
    parser = SUnPropTestsParser(TESTS_DIR)
    options, _ = parser.parse_args()

    status = []
    if options.name:
        for name in options.name:
            status.append(parser.run_suite(name, name=name))
    else:
        for dirname, display_name in SUITES:
            if getattr(options, dirname):
                status.append(parser.run_suite(display_name, path=os.path.join(TESTS_DIR, dirname)))
    parser.finalize(0 if all(status) else 1)


if __name__ == '__main__':
    main()

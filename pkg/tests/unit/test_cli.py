# -*- coding: utf-8 -*-
'''
    tests.unit.test_cli
    ~~~~~~~~~~~~~~~~~~~

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import io
import os
import shutil
import argparse
import tempfile
import textwrap
from unittest import mock

# Import 3rd-party libs
import numpy as np

# Import sunprop libs
from sunprop import cli, config, observables
from sunprop.testing import TestCase, TestsLoggingHandler

TINY = textwrap.dedent('''\
    model:
      n: 2
      particles: {N}
      omega: -1.0
      chi: -1.0
    initial:
      w: [0.41421356237309505]
    grid:
      points: 3
      half_width: 0.2
    time:
      horizon: 0.5
      samples: 6
    outputs:
      approaches: [exact, reduced, semiclassical, classical]
      integrals: true
      sphere: true
      qgrid_times: [0.0]
      qgrid_points: 5
      trajectory_dumps: 2
    acceptance:
      max_deviation: {max_deviation}
    ''')


class ParserTestCase(TestCase):

    def setUp(self):
        patcher = mock.patch.multiple(
            'sunprop.log',
            setup_console_logging=mock.DEFAULT,
            setup_logfile_logging=mock.DEFAULT,
            remove_temporary_handler=mock.DEFAULT,
        )
        self.logging_mocks = patcher.start()
        self.logging_mocks['setup_console_logging'].return_value = None
        self.addCleanup(patcher.stop)

    def test_verbosity_counts(self):
        parser = argparse.ArgumentParser()
        parser.add_argument('-v', dest='verbosity', action=cli.VerbosityAction)
        self.assertEqual(parser.parse_args([]).verbosity, 0)
        self.assertEqual(parser.parse_args(['-vvv']).verbosity, 3)

    def test_run_command(self):
        options = cli.SUnPropParser().parse_args(['run', 'linear.yaml', '-vv', '--workers', '2', '--no-colors'])
        self.assertEqual(options.command, 'run')
        self.assertEqual(options.config, 'linear.yaml')
        self.assertEqual(options.workers, 2)
        self.assertEqual(options.out, cli.DEFAULT_OUT)
        self.logging_mocks['setup_console_logging'].assert_called_once_with(2)

    def test_default_workers(self):
        with mock.patch('sunprop.process.default_workers', return_value=3):
            options = cli.SUnPropParser().parse_args(['suite', 'scenarios'])
        self.assertEqual(options.workers, 3)
        self.assertEqual(options.directory, 'scenarios')

    def test_invalid_workers(self):
        with mock.patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as ctx:
                cli.SUnPropParser().parse_args(['run', 'linear.yaml', '--workers', '0'])
        self.assertEqual(ctx.exception.code, 2)

    def test_subcommands_use_plain_parsers(self):
        parser = cli.SUnPropParser()
        commands = [action for action in parser._actions if isinstance(action, argparse._SubParsersAction)]
        self.assertEqual(len(commands), 1)
        self.assertEqual(sorted(commands[0].choices), ['run', 'suite'])
        for subparser in commands[0].choices.values():
            self.assertIs(type(subparser), argparse.ArgumentParser)

    def test_command_required(self):
        with mock.patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                cli.SUnPropParser().parse_args([])


class ReportTestCase(TestCase):

    def test_exit_codes(self):
        ok = cli.ScenarioResult('ok', 'ok.yaml')
        failed = cli.ScenarioResult('failed', 'failed.yaml')
        failed.failures.append('max_deviation: 0.2 > 0.1')
        self.assertEqual(cli.SuiteReport([ok]).exit_code, 0)
        self.assertEqual(cli.SuiteReport([ok, failed]).exit_code, 1)
        self.assertEqual(cli.SuiteReport([ok], ['N-scaling']).exit_code, 1)
        self.assertEqual(cli.SuiteReport().exit_code, 0)

    def test_n_scaling(self):
        configs, results = [], []
        for N, distance in ((30, 0.1), (60, 0.05), (150, 0.07)):
            configs.append(config.parse_scenario(TINY.format(N=N, max_deviation=1.0), filename='n{0}.yaml'.format(N)))
            result = cli.ScenarioResult('n{0}'.format(N), 'n{0}.yaml'.format(N))
            result.summary['l2_to_classical'] = distance
            results.append(result)
        failures = cli.check_n_scaling(results, configs)
        self.assertEqual(len(failures), 1)
        self.assertIn('n150=0.07', failures[0])
        results[2].summary['l2_to_classical'] = 0.01
        self.assertEqual(cli.check_n_scaling(results, configs), [])


class AcceptanceTestCase(TestCase):

    def _run(self, reference=None):
        text = TINY.format(N=4, max_deviation=0.1)
        text = text.replace('  max_deviation: 0.1\n', '  max_deviation: 0.1\n  rms_ratio_to_classical: 0.5\n')
        if reference is not None:
            text = text.replace('acceptance:\n', 'acceptance:\n  reference: {0}\n'.format(reference))
        return observables.ScenarioRun(config.parse_scenario(text, filename='tiny.yaml'))

    def _series(self, run):
        # The three-mode curve drifts away while the two-mode one is followed closely
        levels = {'exact': 0.5, 'reduced': 0.01, 'semiclassical': 0.0, 'classical': 0.3}
        return dict(
            (('szbar', approach), observables.TimeSeries(run.times, np.full(len(run.times), level), approach))
            for approach, level in levels.items()
        )

    def test_defaults_to_the_three_mode_evolution(self):
        run = self._run()
        failures = cli.check_acceptance(run, self._series(run))
        self.assertEqual(len(failures), 2)
        self.assertEqual(failures[0], 'max_deviation: 0.5 > 0.1')
        self.assertTrue(failures[1].startswith('rms_ratio_to_classical'))

    def test_reduced_reference(self):
        run = self._run('reduced')
        self.assertEqual(cli.check_acceptance(run, self._series(run)), [])

    def test_explicit_exact_reference(self):
        run = self._run('exact')
        self.assertEqual(len(cli.check_acceptance(run, self._series(run))), 2)

    def test_shipped_two_mode_criteria_use_the_reduced_model(self):
        for fname in ('weak-interaction.yaml', 'collapse-revival.yaml'):
            path = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, 'scenarios', fname)
            self.assertEqual(config.load_scenario(path).acceptance['reference'], 'reduced')


class RunScenarioTestCase(TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.out = os.path.join(self.tmpdir, 'results')

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def _write(self, name, text):
        path = os.path.join(self.tmpdir, name)
        with open(path, 'w') as wfh:
            wfh.write(text)
        return path

    def test_artifacts(self):
        path = self._write('tiny.yaml', TINY.format(N=4, max_deviation=2.5))
        result = cli.run_scenario(path, out=self.out)
        self.assertIsNone(result.error)
        self.assertTrue(result.passed)
        out_dir = os.path.join(self.out, 'tiny')
        produced = set(os.listdir(out_dir))
        for approach in ('exact', 'reduced', 'semiclassical', 'classical'):
            self.assertIn('szbar_{0}.csv'.format(approach), produced)
        for fname in ('config.yaml', 'summary.txt', 'survival.csv', 'integrals.csv',
                      'trajectory_000004.csv', 'qgrid_t0.00_exact.csv', 'qgrid_t0.00_semiclassical.csv'):
            self.assertIn(fname, produced)
        self.assertEqual(len([fname for fname in produced if fname.startswith('trajectory_')]), 2)
        self.assertFalse(any(fname.startswith('b3_') for fname in produced))
        self.assertEqual(result.summary['trajectories'], 9)
        self.assertIn('szbar_semiclassical_vs_exact_max', result.summary)
        self.assertIn('l2_to_classical', result.summary)
        with open(os.path.join(out_dir, 'summary.txt')) as rfh:
            summary = rfh.read()
        self.assertIn('acceptance: passed', summary)
        self.assertEqual(config.load_scenario(os.path.join(out_dir, 'config.yaml')).params.N, 4)

    def test_acceptance_failure_is_reported(self):
        path = self._write('strict.yaml', TINY.format(N=4, max_deviation=1e-12).replace('1e-12', '1.0e-12'))
        result = cli.run_scenario(path, out=self.out)
        self.assertIsNone(result.error)
        self.assertFalse(result.passed)
        self.assertTrue(result.failures[0].startswith('max_deviation'))

    def test_invalid_scenario_does_not_raise(self):
        path = self._write('broken.yaml', 'model: {n: 5}\n')
        with TestsLoggingHandler() as handler:
            result = cli.run_scenario(path, out=self.out)
        self.assertFalse(result.passed)
        self.assertIn('broken.yaml', result.error)
        self.assertTrue(any('Scenario broken failed' in message for message in handler.messages))

    def test_suite_keeps_going(self):
        broken = self._write('a-broken.yaml', 'model: {n: 5}\n')
        tiny = self._write('b-tiny.yaml', TINY.format(N=4, max_deviation=2.5))
        report = cli.run_suite([broken, tiny], out=self.out)
        self.assertEqual([result.passed for result in report.results], [False, True])
        self.assertEqual(report.exit_code, 1)
        self.assertEqual(cli.run_suite([], out=self.out).exit_code, 0)

    @mock.patch('sunprop.process.terminate_children')
    @mock.patch('sunprop.log.setup_console_logging', return_value=None)
    @mock.patch('sunprop.log.install_temporary_handler')
    @mock.patch('sunprop.log.remove_temporary_handler')
    def test_main_exit_code(self, *mocks):
        path = self._write('tiny.yaml', TINY.format(N=4, max_deviation=2.5))
        with mock.patch('sys.stdout', new_callable=io.StringIO) as stdout:
            with self.assertRaises(SystemExit) as ctx:
                cli.main(['run', path, '--out', self.out, '--workers', '1', '--no-colors',
                          '--output-columns', '60'])
        self.assertEqual(ctx.exception.code, 0)
        self.assertIn('Overall Scenarios Report', stdout.getvalue())
        self.assertIn('tiny: OK', stdout.getvalue())

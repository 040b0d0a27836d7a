# -*- coding: utf-8 -*-
'''
    tests.integration.test_scenarios
    ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

    Full runs of the shipped scenario files. These take minutes, run them
    with ``EXPENSIVE_TESTS=1`` or ``tests/runtests.py --run-expensive``.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import os
import shutil
import tempfile

# Import sunprop libs
from sunprop import cli, config, observables, process
from sunprop.testing import TestCase, expensiveTest

SCENARIOS_DIR = os.path.abspath(
    os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, 'scenarios')
)


class ScenarioTestCase(TestCase):

    def setUp(self):
        self.out = tempfile.mkdtemp()
        self.workers = process.default_workers()

    def tearDown(self):
        shutil.rmtree(self.out)

    def assertScenarioPasses(self, fname):
        result = cli.run_scenario(os.path.join(SCENARIOS_DIR, fname), out=self.out, workers=self.workers)
        self.assertIsNone(result.error)
        self.assertEqual(result.failures, [], '\n'.join(result.failures))
        self.assertTrue(os.path.isfile(os.path.join(result.out_dir, 'summary.txt')))
        return result

    @expensiveTest
    def test_linear(self):
        result = self.assertScenarioPasses('linear.yaml')
        self.assertEqual(result.summary['trajectories_filtered'], 0)

    @expensiveTest
    def test_weak_interaction(self):
        result = self.assertScenarioPasses('weak-interaction.yaml')
        self.assertLess(result.summary['szbar_semiclassical_vs_reduced_max'], 0.08)
        self.assertLess(result.summary['principal_energy_drift'], 1e-5)

    @expensiveTest
    def test_collapse_revival(self):
        self.assertScenarioPasses('collapse-revival.yaml')

    @expensiveTest
    def test_three_mode(self):
        result = self.assertScenarioPasses('three-mode.yaml')
        self.assertIn('b3_semiclassical_vs_exact_max', result.summary)

    @expensiveTest
    def test_n_scaling_suite(self):
        paths = [os.path.join(SCENARIOS_DIR, fname) for fname in
                 ('weak-interaction.yaml', 'weak-interaction-n60.yaml', 'weak-interaction-n150.yaml')]
        report = cli.run_suite(paths, out=self.out, workers=self.workers)
        self.assertEqual(report.failures, [])
        distances = [result.summary['l2_to_classical'] for result in report.results]
        self.assertEqual(distances, sorted(distances, reverse=True))

    @expensiveTest
    def test_whole_directory(self):
        report = cli.run_suite(config.discover_scenarios(SCENARIOS_DIR), out=self.out, workers=self.workers)
        self.assertEqual(report.exit_code, 0)


@expensiveTest
class ConvergenceTestCase(TestCase):

    def setUp(self):
        self.path = os.path.join(SCENARIOS_DIR, 'weak-interaction.yaml')
        self.workers = process.default_workers()

    def _szbar(self, **overrides):
        cfg = config.load_scenario(self.path).override(**overrides)
        return observables.series_szbar('semiclassical', observables.ScenarioRun(cfg, workers=self.workers))

    def test_halving_tolerance(self):
        coarse = self._szbar(tol=1e-8)
        fine = self._szbar(tol=5e-9)
        self.assertLess(observables.compare(coarse, fine, 'max'), 0.08)

    def test_grid_refinement(self):
        series = [self._szbar(grid_points=points) for points in (11, 23, 45)]
        first = observables.compare(series[0], series[1], 'max')
        second = observables.compare(series[1], series[2], 'max')
        self.assertLess(second, first)

    def test_reruns_are_identical(self):
        first = self._szbar()
        second = self._szbar()
        self.assertTrue((first.values == second.values).all())

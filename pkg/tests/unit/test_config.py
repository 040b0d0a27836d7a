# -*- coding: utf-8 -*-
'''
    tests.unit.test_config
    ~~~~~~~~~~~~~~~~~~~~~~

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import os
import shutil
import tempfile
import textwrap

# Import 3rd-party libs
import numpy as np

# Import sunprop libs
from sunprop import config
from sunprop.testing import TestCase
from sunprop.exceptions import ConfigError

MINIMAL = textwrap.dedent('''\
    model:
      n: 2
      particles: 30
      omega: -1.0
      chi: -1.0
    initial:
      w: [0.41421356237309505]
    ''')


def _scenario(extra=''):
    return MINIMAL + textwrap.dedent(extra)


class DefaultsTestCase(TestCase):

    def test_minimal_scenario(self):
        cfg = config.parse_scenario(MINIMAL, filename='weak.yaml')
        self.assertEqual(cfg.name, 'weak')
        self.assertEqual(cfg.params.N, 30)
        self.assertEqual(cfg.grid, {'points': 1, 'half_width': 0.5})
        self.assertEqual(cfg.filter.rate, 10.0)
        self.assertEqual(len(cfg.times()), 241)
        self.assertEqual(cfg.times()[-1], 6.0)
        self.assertFalse(cfg.outputs['b3'])
        self.assertEqual(cfg.outputs['approaches'], ['exact', 'semiclassical', 'classical'])
        self.assertEqual(cfg.acceptance, {})
        self.assertIsNone(cfg.su2_grid)

    def test_three_mode_defaults(self):
        cfg = config.parse_scenario(textwrap.dedent('''\
            model: {n: 3, particles: 30, omega: -1.0, chi: -1.0}
            initial:
              w: [0.29289321881345248, [0.29289321881345248, 0.0]]
            su2_grid: {points: 23, half_width: 0.55}
            '''))
        self.assertTrue(cfg.outputs['b3'])
        spec = cfg.su2_grid_spec()
        self.assertEqual(spec.points, 23)
        self.assertArrayClose(spec.center, [0.41421356237309505], rtol=1e-15)

    def test_grid_centered_on_conjugate(self):
        cfg = config.parse_scenario(_scenario('''\
            grid: {points: 5, half_width: 0.2}
            ''').replace('[0.41421356237309505]', '[[0.3, 0.2]]'))
        self.assertArrayClose(cfg.grid_spec().center, [0.3 - 0.2j])

    def test_acceptance_reference(self):
        cfg = config.parse_scenario(_scenario('''\
            outputs:
              approaches: [exact, reduced, semiclassical]
            acceptance:
              reference: reduced
              max_deviation: 0.08
            '''))
        self.assertEqual(cfg.acceptance, {'reference': 'reduced', 'max_deviation': 0.08})

    def test_infinite_filter_rate(self):
        cfg = config.parse_scenario(_scenario('''\
            filter:
              rate: .inf
            '''))
        self.assertFalse(cfg.filter.enabled)

    def test_exponent_without_dot(self):
        cfg = config.parse_scenario(_scenario('''\
            integrator:
              rtol: 1e-9
            '''))
        self.assertEqual(cfg.integrator['rtol'], 1e-9)


class StrictParsingTestCase(TestCase):

    def assertConfigError(self, text, line, fragment):
        with self.assertRaises(ConfigError) as ctx:
            config.parse_scenario(text, filename='bad.yaml')
        self.assertEqual(ctx.exception.line, line)
        self.assertIn(fragment, str(ctx.exception))
        self.assertTrue(str(ctx.exception).startswith('bad.yaml:{0}: '.format(line)))

    def test_unknown_key(self):
        self.assertConfigError(_scenario('''\
            time:
              horizon: 2.0
              step: 0.1
            '''), 10, "Unknown key 'step'")

    def test_even_grid(self):
        self.assertConfigError(_scenario('''\
            grid:
              points: 22
            '''), 9, 'must be odd')

    def test_non_finite(self):
        self.assertConfigError(MINIMAL.replace('chi: -1.0', 'chi: .nan'), 5, 'must be finite')

    def test_negative_horizon(self):
        self.assertConfigError(_scenario('''\
            time: {horizon: -1.0}
            '''), 8, 'must be positive')

    def test_quoted_number(self):
        self.assertConfigError(_scenario('''\
            integrator:
              rtol: "1e-9"
            '''), 9, 'must be a number')

    def test_missing_section(self):
        self.assertConfigError('model: {n: 2, particles: 3, omega: -1.0, chi: 0.0}\n', 1, "Missing key 'initial'")

    def test_wrong_initial_length(self):
        self.assertConfigError(MINIMAL.replace('[0.41421356237309505]', '[0.1, 0.2]'), 7, 'needs 1 value')

    def test_su2_grid_needs_three_modes(self):
        self.assertConfigError(_scenario('''\
            su2_grid: {points: 3}
            '''), 8, 'three-mode')

    def test_su2_approach_needs_grid(self):
        self.assertConfigError(textwrap.dedent('''\
            model: {n: 3, particles: 30, omega: -1.0, chi: -1.0}
            initial:
              w: [0.1, 0.1]
            outputs:
              approaches: [exact, semiclassical-su2]
            '''), 5, 'needs a su2_grid')

    def test_unknown_approach(self):
        self.assertConfigError(_scenario('''\
            outputs:
              approaches: [exact, quantum]
            '''), 9, "Unknown approach 'quantum'")

    def test_q_grid_time_beyond_horizon(self):
        self.assertConfigError(_scenario('''\
            time: {horizon: 1.0}
            outputs: {qgrid_times: [2.0]}
            '''), 9, 'outside [0, horizon]')

    def test_three_mode_acceptance_on_two_modes(self):
        self.assertConfigError(_scenario('''\
            acceptance:
              b3_at_end: [0.0, 0.1]
            '''), 9, 'needs a three-mode scenario')

    def test_unknown_reference(self):
        self.assertConfigError(_scenario('''\
            acceptance:
              reference: trimer
            '''), 9, "Unknown acceptance.reference 'trimer'")

    def test_reference_must_be_computed(self):
        self.assertConfigError(_scenario('''\
            acceptance:
              reference: reduced
              max_deviation: 0.1
            '''), 9, 'is not one of outputs.approaches')

    def test_reduced_reference_needs_two_modes(self):
        self.assertConfigError(textwrap.dedent('''\
            model: {n: 3, particles: 30, omega: -1.0, chi: -1.0}
            initial:
              w: [0.1, 0.1]
            outputs:
              approaches: [exact, reduced, semiclassical]
            acceptance:
              reference: reduced
            '''), 7, 'needs a two-mode scenario')

    def test_collision_with_single_particle(self):
        self.assertConfigError(MINIMAL.replace('particles: 30', 'particles: 1'), 2, 'at least two particles')

    def test_invalid_yaml(self):
        with self.assertRaises(ConfigError) as ctx:
            config.parse_scenario('model: [1, 2\n', filename='bad.yaml')
        self.assertIn('Invalid YAML', str(ctx.exception))

    def test_empty_document(self):
        with self.assertRaises(ConfigError):
            config.parse_scenario('', filename='bad.yaml')


class OverrideTestCase(TestCase):

    def test_overrides(self):
        cfg = config.parse_scenario(MINIMAL).override(tol=1e-6, grid_points=7, half_width=0.3)
        self.assertEqual(cfg.integrator['rtol'], 1e-6)
        self.assertEqual(cfg.grid, {'points': 7, 'half_width': 0.3})

    def test_even_override(self):
        with self.assertRaises(ConfigError):
            config.parse_scenario(MINIMAL).override(grid_points=4)


class FilesTestCase(TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def test_resolved_echo_parses_back(self):
        cfg = config.parse_scenario(_scenario('''\
            filter: {rate: .inf}
            outputs: {sphere: true, qgrid_times: [0.0, 3.1]}
            acceptance:
              max_deviation: 0.15
              collapse: {time: 3.1, window: 1.5, max_ratio: 0.3}
            '''), filename='echo.yaml')
        path = os.path.join(self.tmpdir, 'config.yaml')
        config.dump_scenario(cfg, path)
        again = config.load_scenario(path)
        self.assertEqual(again.to_dict(), cfg.to_dict())

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            config.load_scenario(os.path.join(self.tmpdir, 'missing.yaml'))

    def test_discover(self):
        for fname in ('b.yaml', 'a.yml', 'notes.txt'):
            with open(os.path.join(self.tmpdir, fname), 'w') as wfh:
                wfh.write(MINIMAL)
        found = [os.path.basename(path) for path in config.discover_scenarios(self.tmpdir)]
        self.assertEqual(found, ['a.yml', 'b.yaml'])

    def test_shipped_scenarios_parse(self):
        directory = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, 'scenarios')
        paths = config.discover_scenarios(directory)
        self.assertEqual(len(paths), 6)
        for path in paths:
            cfg = config.load_scenario(path)
            self.assertTrue(np.all(np.isfinite(cfg.initial)))

# -*- coding: utf-8 -*-
'''
    sunprop.config
    ~~~~~~~~~~~~~~

    Scenario files.

    A scenario is a YAML mapping of sections. Parsing is strict: unknown keys,
    wrong types, non-finite numbers and impossible values are reported as a
    :class:`~sunprop.exceptions.ConfigError` pointing at the offending line.

    .. code-block:: yaml

        model:
          n: 2
          particles: 30
          omega: -1.0
          chi: -1.0
        initial:
          w: [0.41421356237309503]
        grid:
          points: 23
          half_width: 0.55
        filter:
          rate: 10.0

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import os
import re
import copy
import math
import logging

# Import 3rd-party libs
import yaml
import numpy as np

# Import sunprop libs
from sunprop.ivr import FilterConfig, GridSpec
from sunprop.model import SINGULAR_EPS, SQRT2, ModelParams
from sunprop.dynamics import DEFAULT_ATOL, DEFAULT_RTOL, OVERFLOW
from sunprop.observables import APPROACHES
from sunprop.exceptions import ConfigError, ModelError

log = logging.getLogger(__name__)

SCENARIO_SUFFIXES = ('.yaml', '.yml')

# YAML 1.1 resolves exponents without a dot, like 1e-8, to strings
EXPONENT_RE = re.compile(r'^[-+]?[0-9]+[eE][-+]?[0-9]+$')

DEFAULTS = {
    'grid': {'points': 1, 'half_width': 0.5},
    'filter': {'rate': 10.0},
    'time': {'horizon': 6.0, 'samples': 241},
    'integrator': {
        'rtol': DEFAULT_RTOL,
        'atol': DEFAULT_ATOL,
        'singular_eps': SINGULAR_EPS,
        'overflow': OVERFLOW,
    },
    'outputs': {
        'approaches': ['exact', 'semiclassical', 'classical'],
        'szbar': True,
        'b3': False,
        'survival': True,
        'integrals': False,
        'sphere': False,
        'qgrid_times': [],
        'qgrid_points': 41,
        'qgrid_half_width': 1.0,
        'trajectory_dumps': 0,
    },
}

SECTIONS = ('model', 'initial', 'grid', 'su2_grid', 'filter', 'time', 'integrator', 'outputs', 'acceptance')
ACCEPTANCE_KEYS = (
    'max_deviation', 'rms_ratio_to_classical', 'b3_at_end', 'b3_monotone', 'no_filtered',
    'collapse', 'revival', 'classical_envelope_spread', 'su3_beats_su2', 'two_peaks', 'reference',
)
REFERENCES = ('exact', 'reduced')


# ----- Node Helpers -------------------------------------------------------------------------------------------->
class _Reader(object):
    '''
    Typed access to the nodes of a composed YAML document
    '''

    def __init__(self, loader, filename):
        self.loader = loader
        self.filename = filename

    def error(self, node, message):
        line = node.start_mark.line + 1 if node is not None else None
        return ConfigError(message, filename=self.filename, line=line)

    def value(self, node):
        return self.loader.construct_object(node, deep=True)

    def mapping(self, node, where, allowed, required=()):
        if not isinstance(node, yaml.MappingNode):
            raise self.error(node, '{0} must be a mapping'.format(where))
        items = {}
        for key_node, value_node in node.value:
            key = self.value(key_node)
            if key not in allowed:
                raise self.error(key_node, 'Unknown key {0!r} in {1}'.format(key, where))
            if key in items:
                raise self.error(key_node, 'Duplicate key {0!r} in {1}'.format(key, where))
            items[key] = value_node
        for key in required:
            if key not in items:
                raise self.error(node, 'Missing key {0!r} in {1}'.format(key, where))
        return items

    def number(self, node, where, allow_inf=False):
        value = self.value(node)
        if isinstance(value, str) and node.style is None and EXPONENT_RE.match(value):
            value = float(value)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(node, '{0} must be a number, got {1!r}'.format(where, value))
        value = float(value)
        if math.isnan(value) or (math.isinf(value) and not allow_inf):
            raise self.error(node, '{0} must be finite, got {1!r}'.format(where, value))
        return value

    def positive(self, node, where, allow_inf=False):
        value = self.number(node, where, allow_inf=allow_inf)
        if value <= 0:
            raise self.error(node, '{0} must be positive, got {1!r}'.format(where, value))
        return value

    def integer(self, node, where, minimum=None):
        value = self.value(node)
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(node, '{0} must be an integer, got {1!r}'.format(where, value))
        if minimum is not None and value < minimum:
            raise self.error(node, '{0} must be at least {1}, got {2}'.format(where, minimum, value))
        return value

    def odd(self, node, where):
        value = self.integer(node, where, minimum=1)
        if value % 2 == 0:
            raise self.error(node, '{0} must be odd, got {1}'.format(where, value))
        return value

    def boolean(self, node, where):
        value = self.value(node)
        if not isinstance(value, bool):
            raise self.error(node, '{0} must be true or false, got {1!r}'.format(where, value))
        return value

    def sequence(self, node, where):
        if not isinstance(node, yaml.SequenceNode):
            raise self.error(node, '{0} must be a list'.format(where))
        return node.value

    def complex(self, node, where):
        '''
        A plain number or an ``[re, im]`` pair
        '''
        if isinstance(node, yaml.SequenceNode):
            parts = node.value
            if len(parts) != 2:
                raise self.error(node, '{0} must be a number or an [re, im] pair'.format(where))
            return complex(self.number(parts[0], where), self.number(parts[1], where))
        return complex(self.number(node, where))

    def pair(self, node, where):
        items = self.sequence(node, where)
        if len(items) != 2:
            raise self.error(node, '{0} must be a [low, high] pair'.format(where))
        low, high = [self.number(item, where) for item in items]
        if low > high:
            raise self.error(node, '{0} must satisfy low <= high'.format(where))
        return [low, high]
# <---- Node Helpers ---------------------------------------------------------------------------------------------


class ScenarioConfig(object):
    '''
    A validated scenario

    Sections other than ``model`` and ``initial`` fall back to
    :data:`DEFAULTS`. ``su2_grid`` only exists for three-mode scenarios.
    '''

    def __init__(self, name, params, initial, grid, filter_rate, time, integrator, outputs,
                 acceptance=None, su2_grid=None, path=None):
        self.name = name
        self.path = path
        self.params = params
        self.initial = np.asarray(initial, dtype=complex)
        self.grid = dict(grid)
        self.su2_grid = dict(su2_grid) if su2_grid is not None else None
        self.filter = FilterConfig(filter_rate)
        self.time = dict(time)
        self.integrator = dict(integrator)
        self.outputs = copy.deepcopy(outputs)
        self.acceptance = copy.deepcopy(acceptance or {})

    def __repr__(self):
        return 'ScenarioConfig({0!r}, {1!r})'.format(self.name, self.params)

    def times(self):
        return np.linspace(0.0, self.time['horizon'], self.time['samples'])

    def grid_spec(self):
        return GridSpec(self.initial.conj(), self.grid['half_width'], self.grid['points'])

    def su2_grid_spec(self):
        if self.su2_grid is None:
            raise ModelError('Scenario {0!r} has no su2_grid section'.format(self.name))
        return GridSpec(np.array([SQRT2 * self.initial[0]]).conj(),
                        self.su2_grid['half_width'], self.su2_grid['points'])

    def override(self, tol=None, grid_points=None, half_width=None):
        '''
        Apply command line overrides. Returns ``self``.
        '''
        if tol is not None:
            self.integrator['rtol'] = float(tol)
        for grid in (self.grid, self.su2_grid):
            if grid is None:
                continue
            if grid_points is not None:
                if grid_points < 1 or grid_points % 2 == 0:
                    raise ConfigError('--grid-points must be a positive odd integer', filename=self.path)
                grid['points'] = int(grid_points)
            if half_width is not None:
                grid['half_width'] = float(half_width)
        return self

    def to_dict(self):
        '''
        The fully resolved scenario as plain YAML-serializable data
        '''
        data = {
            'model': {
                'n': self.params.n,
                'particles': self.params.N,
                'omega': self.params.omega,
                'chi': self.params.chi,
            },
            'initial': {'w': [[float(w.real), float(w.imag)] for w in self.initial]},
            'grid': dict(self.grid),
        }
        if self.su2_grid is not None:
            data['su2_grid'] = dict(self.su2_grid)
        data['filter'] = {'rate': self.filter.rate}
        data['time'] = dict(self.time)
        data['integrator'] = dict(self.integrator)
        data['outputs'] = copy.deepcopy(self.outputs)
        if self.acceptance:
            data['acceptance'] = copy.deepcopy(self.acceptance)
        return data


def _parse_grid(reader, node, where):
    items = reader.mapping(node, where, ('points', 'half_width'))
    grid = dict(DEFAULTS['grid'])
    if 'points' in items:
        grid['points'] = reader.odd(items['points'], where + '.points')
    if 'half_width' in items:
        grid['half_width'] = reader.number(items['half_width'], where + '.half_width')
        if grid['half_width'] < 0:
            raise reader.error(items['half_width'], where + '.half_width must not be negative')
    if grid['points'] > 1 and grid['half_width'] == 0:
        raise reader.error(node, where + ' needs a positive half_width for more than one point')
    return grid


def _parse_outputs(reader, node, n):
    allowed = tuple(DEFAULTS['outputs'])
    items = reader.mapping(node, 'outputs', allowed)
    outputs = copy.deepcopy(DEFAULTS['outputs'])
    outputs['b3'] = n == 3
    for key in ('szbar', 'b3', 'survival', 'integrals', 'sphere'):
        if key in items:
            outputs[key] = reader.boolean(items[key], 'outputs.' + key)
    if 'approaches' in items:
        approaches = []
        for item in reader.sequence(items['approaches'], 'outputs.approaches'):
            approach = reader.value(item)
            if approach not in APPROACHES:
                raise reader.error(item, 'Unknown approach {0!r}, expected one of {1}'.format(
                    approach, ', '.join(APPROACHES)))
            if approach == 'semiclassical-su2' and n != 3:
                raise reader.error(item, 'semiclassical-su2 needs a three-mode scenario')
            approaches.append(approach)
        outputs['approaches'] = approaches
    if 'qgrid_times' in items:
        outputs['qgrid_times'] = [
            reader.number(item, 'outputs.qgrid_times')
            for item in reader.sequence(items['qgrid_times'], 'outputs.qgrid_times')
        ]
    if 'qgrid_points' in items:
        outputs['qgrid_points'] = reader.odd(items['qgrid_points'], 'outputs.qgrid_points')
    if 'qgrid_half_width' in items:
        outputs['qgrid_half_width'] = reader.positive(items['qgrid_half_width'], 'outputs.qgrid_half_width')
    if 'trajectory_dumps' in items:
        outputs['trajectory_dumps'] = reader.integer(items['trajectory_dumps'], 'outputs.trajectory_dumps',
                                                     minimum=0)
    if outputs['b3'] and n != 3:
        raise reader.error(items.get('b3', node), 'outputs.b3 needs a three-mode scenario')
    if outputs['sphere'] and n != 2:
        raise reader.error(items.get('sphere', node), 'outputs.sphere needs a two-mode scenario')
    return outputs


def _parse_window(reader, node, where, ratio_key):
    items = reader.mapping(node, where, ('time', 'window', ratio_key), required=('time', 'window', ratio_key))
    return {
        'time': reader.number(items['time'], where + '.time'),
        'window': reader.positive(items['window'], where + '.window'),
        ratio_key: reader.positive(items[ratio_key], where + '.' + ratio_key),
    }


def _parse_acceptance(reader, node, n, approaches):
    items = reader.mapping(node, 'acceptance', ACCEPTANCE_KEYS)
    acceptance = {}
    if 'reference' in items:
        reference = reader.value(items['reference'])
        if reference not in REFERENCES:
            raise reader.error(items['reference'], 'Unknown acceptance.reference {0!r}, expected one of {1}'.format(
                reference, ', '.join(REFERENCES)))
        if reference == 'reduced' and n != 2:
            raise reader.error(items['reference'], 'acceptance.reference reduced needs a two-mode scenario')
        if reference not in approaches:
            raise reader.error(items['reference'], 'acceptance.reference {0} is not one of outputs.approaches'.format(
                reference))
        acceptance['reference'] = reference
    for key in ('max_deviation', 'rms_ratio_to_classical', 'classical_envelope_spread'):
        if key in items:
            acceptance[key] = reader.positive(items[key], 'acceptance.' + key)
    for key in ('b3_monotone', 'no_filtered', 'su3_beats_su2'):
        if key in items:
            acceptance[key] = reader.boolean(items[key], 'acceptance.' + key)
    if 'b3_at_end' in items:
        acceptance['b3_at_end'] = reader.pair(items['b3_at_end'], 'acceptance.b3_at_end')
    if 'collapse' in items:
        acceptance['collapse'] = _parse_window(reader, items['collapse'], 'acceptance.collapse', 'max_ratio')
    if 'revival' in items:
        acceptance['revival'] = _parse_window(reader, items['revival'], 'acceptance.revival', 'min_ratio')
    if 'two_peaks' in items:
        peaks = reader.mapping(items['two_peaks'], 'acceptance.two_peaks', ('time', 'tolerance'),
                               required=('time', 'tolerance'))
        acceptance['two_peaks'] = {
            'time': reader.number(peaks['time'], 'acceptance.two_peaks.time'),
            'tolerance': reader.positive(peaks['tolerance'], 'acceptance.two_peaks.tolerance'),
        }
    for key in ('b3_monotone', 'b3_at_end', 'su3_beats_su2'):
        if key in acceptance and n != 3:
            raise reader.error(items[key], 'acceptance.{0} needs a three-mode scenario'.format(key))
    return acceptance


def parse_scenario(stream, filename='<string>', name=None):
    '''
    Parse and validate a scenario document

    :param stream: YAML text or an open file
    :returns: :class:`ScenarioConfig`
    '''
    loader = yaml.SafeLoader(stream)
    try:
        root = loader.get_single_node()
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark is not None else None
        raise ConfigError('Invalid YAML: {0}'.format(exc.problem), filename=filename, line=line)
    finally:
        loader.dispose()
    reader = _Reader(loader, filename)
    if root is None:
        raise ConfigError('Empty scenario', filename=filename)
    sections = reader.mapping(root, 'the scenario', SECTIONS, required=('model', 'initial'))

    model = reader.mapping(sections['model'], 'model', ('n', 'particles', 'omega', 'chi'),
                           required=('n', 'particles', 'omega', 'chi'))
    n = reader.integer(model['n'], 'model.n')
    if n not in (2, 3):
        raise reader.error(model['n'], 'model.n must be 2 or 3, got {0}'.format(n))
    try:
        params = ModelParams(
            n,
            reader.integer(model['particles'], 'model.particles', minimum=1),
            reader.number(model['omega'], 'model.omega'),
            reader.number(model['chi'], 'model.chi'),
        )
    except ModelError as exc:
        raise reader.error(sections['model'], str(exc))

    initial = reader.mapping(sections['initial'], 'initial', ('w',), required=('w',))
    w_nodes = reader.sequence(initial['w'], 'initial.w')
    if len(w_nodes) != n - 1:
        raise reader.error(initial['w'], 'initial.w needs {0} value(s), got {1}'.format(n - 1, len(w_nodes)))
    w_i = [reader.complex(node, 'initial.w') for node in w_nodes]

    grid = dict(DEFAULTS['grid'])
    if 'grid' in sections:
        grid = _parse_grid(reader, sections['grid'], 'grid')
    su2_grid = None
    if 'su2_grid' in sections:
        if n != 3:
            raise reader.error(sections['su2_grid'], 'su2_grid needs a three-mode scenario')
        su2_grid = _parse_grid(reader, sections['su2_grid'], 'su2_grid')

    rate = DEFAULTS['filter']['rate']
    if 'filter' in sections:
        items = reader.mapping(sections['filter'], 'filter', ('rate',))
        if 'rate' in items:
            rate = reader.positive(items['rate'], 'filter.rate', allow_inf=True)

    time = dict(DEFAULTS['time'])
    if 'time' in sections:
        items = reader.mapping(sections['time'], 'time', ('horizon', 'samples'))
        if 'horizon' in items:
            time['horizon'] = reader.positive(items['horizon'], 'time.horizon')
        if 'samples' in items:
            time['samples'] = reader.integer(items['samples'], 'time.samples', minimum=2)

    integrator = dict(DEFAULTS['integrator'])
    if 'integrator' in sections:
        items = reader.mapping(sections['integrator'], 'integrator', tuple(DEFAULTS['integrator']))
        for key, node in items.items():
            integrator[key] = reader.positive(node, 'integrator.' + key)

    outputs = copy.deepcopy(DEFAULTS['outputs'])
    outputs['b3'] = n == 3
    if 'outputs' in sections:
        outputs = _parse_outputs(reader, sections['outputs'], n)
    if 'semiclassical-su2' in outputs['approaches'] and su2_grid is None:
        raise reader.error(sections.get('outputs', root), 'semiclassical-su2 needs a su2_grid section')
    for t in outputs['qgrid_times']:
        if not 0 <= t <= time['horizon']:
            raise reader.error(sections['outputs'], 'Q grid time {0} lies outside [0, horizon]'.format(t))

    acceptance = {}
    if 'acceptance' in sections:
        acceptance = _parse_acceptance(reader, sections['acceptance'], n, outputs['approaches'])

    if name is None:
        name = os.path.splitext(os.path.basename(filename))[0]
    return ScenarioConfig(name, params, w_i, grid, rate, time, integrator, outputs,
                          acceptance=acceptance, su2_grid=su2_grid, path=filename)


def load_scenario(path):
    '''
    Read and validate the scenario file at ``path``
    '''
    log.debug('Loading scenario {0}'.format(path))
    try:
        with open(path) as rfh:
            return parse_scenario(rfh, filename=path)
    except (IOError, OSError) as exc:
        raise ConfigError('Cannot read scenario: {0}'.format(exc), filename=path)


def dump_scenario(config, path):
    '''
    Write the resolved scenario to ``path``
    '''
    with open(path, 'w') as wfh:
        yaml.safe_dump(config.to_dict(), wfh, default_flow_style=False, sort_keys=False)


def discover_scenarios(directory):
    '''
    Scenario files of ``directory`` in name order
    '''
    return sorted(
        os.path.join(directory, fname) for fname in os.listdir(directory)
        if fname.endswith(SCENARIO_SUFFIXES)
    )

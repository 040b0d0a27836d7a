# -*- coding: utf-8 -*-
'''
    sunprop.observables
    ~~~~~~~~~~~~~~~~~~~

    Observable time series for every approach of a scenario and the tools to
    compare them.

    Approaches:

    ``exact``
        Exact evolution of the three-mode model. Two-mode scenarios start it
        from the coherent state ``w1 = w2 = v/√2``.
    ``reduced``
        Exact evolution of the two-mode model projected on the ``b3``
        vacuum.
    ``semiclassical``
        IVR propagation with the scenario's own ``n``.
    ``semiclassical-su2``
        IVR propagation of the two-mode reduction of a three-mode scenario.
    ``classical``
        Normal symbol along the principal trajectory.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import collections
import logging

# Import 3rd-party libs
import numpy as np
from scipy.integrate import trapezoid

# Import sunprop libs
from sunprop import fock, coherent, ivr
from sunprop.model import SQRT2, ModelParams, hamiltonian_for
from sunprop.exceptions import ModelError, SeriesMismatchError, UnknownObservableError

log = logging.getLogger(__name__)

APPROACHES = ('exact', 'reduced', 'semiclassical', 'semiclassical-su2', 'classical')
METRICS = ('max', 'rms', 'l2')
CSV_FORMAT = '%.17g'

SemiclassicalRun = collections.namedtuple('SemiclassicalRun', ('ensemble', 'table', 'grid'))


def write_csv(path, header, rows, fmt=CSV_FORMAT):
    '''
    Write ``rows`` under a comma separated ``header``, floats with 17
    significant digits
    '''
    rows = np.asarray(rows)
    np.savetxt(path, rows.reshape(len(rows), len(header)), fmt=fmt, delimiter=',',
               header=','.join(header), comments='')
    log.debug('Wrote {0} rows to {1}'.format(len(rows), path))


class TimeSeries(object):
    '''
    Values of one observable at strictly increasing times, tagged with the
    approach that produced them
    '''

    def __init__(self, times, values, label):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise SeriesMismatchError(
                'Times and values differ in shape: {0} vs {1}'.format(times.shape, values.shape)
            )
        if np.any(np.diff(times) <= 0):
            raise SeriesMismatchError('Series times must increase strictly')
        self.times = times
        self.values = values
        self.label = label

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return 'TimeSeries(label={0!r}, points={1})'.format(self.label, len(self))

    def to_csv(self, path):
        rows = np.empty((len(self), 3), dtype=object)
        rows[:, 0] = self.times
        rows[:, 1] = self.values
        rows[:, 2] = self.label
        write_csv(path, ['t', 'value', 'label'], rows, fmt=[CSV_FORMAT, CSV_FORMAT, '%s'])


def compare(series_a, series_b, metric='max'):
    '''
    Deviation between two series on the same time grid

    ``max``
        ``max_t |a - b|``
    ``rms``
        root mean square of ``a - b`` over the samples
    ``l2``
        ``sqrt(∫ (a - b)² dt)`` by the trapezoidal rule
    '''
    if not np.array_equal(series_a.times, series_b.times):
        raise SeriesMismatchError(
            'Cannot compare {0!r} with {1!r}: different time grids'.format(series_a, series_b)
        )
    diff = series_a.values - series_b.values
    if metric == 'max':
        return float(np.max(np.abs(diff)))
    if metric == 'rms':
        return float(np.sqrt(np.mean(diff ** 2)))
    if metric == 'l2':
        return float(np.sqrt(trapezoid(diff ** 2, series_a.times)))
    raise ValueError('Unknown metric {0!r}, expected one of {1}'.format(metric, ', '.join(METRICS)))


def envelope_amplitude(series, time, window):
    '''
    Half the peak to peak spread of ``series`` within ``window`` centered at
    ``time``
    '''
    mask = np.abs(series.times - time) <= 0.5 * window
    if not mask.any():
        raise SeriesMismatchError('No samples within {0} of t={1}'.format(0.5 * window, time))
    values = series.values[mask]
    return 0.5 * float(values.max() - values.min())


def envelope_samples(series, window):
    '''
    :func:`envelope_amplitude` over consecutive windows covering the series
    '''
    starts = np.arange(series.times[0], series.times[-1] - window + 1e-12, window)
    return np.array([envelope_amplitude(series, start + 0.5 * window, window) for start in starts])


class ScenarioRun(object):
    '''
    Lazily computed quantum, semiclassical and classical evolutions of one
    scenario. Each approach is computed at most once.
    '''

    def __init__(self, config, workers=1):
        self.config = config
        self.workers = workers
        self.times = config.times()
        self._cache = {}

    def __repr__(self):
        return 'ScenarioRun({0!r})'.format(self.config.name)

    @property
    def params(self):
        return self.config.params

    @property
    def n(self):
        return self.params.n

    def _cached(self, key, factory):
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]

    # ----- Quantum ----------------------------------------------------------------------------------------->
    def exact_states(self):
        return self._cached('exact', self._exact_states)

    def _exact_states(self):
        params = self.params
        if params.n == 2:
            v = self.config.initial[0]
            params = ModelParams(3, params.N, params.omega, params.chi)
            w0 = np.array([v / SQRT2, v / SQRT2])
        else:
            w0 = self.config.initial
        log.info('Exact evolution of {0!r}'.format(params))
        psi0 = coherent.coherent_amplitudes(w0, 3, params.N)
        return fock.evolve_exact(psi0, fock.build_hamiltonian(params), self.times)

    def reduced_states(self):
        return self._cached('reduced', self._reduced_states)

    def _reduced_states(self):
        params, v = self.reduced_problem()
        log.info('Exact evolution of the two-mode reduction {0!r}'.format(params))
        psi0 = coherent.coherent_amplitudes([v], 2, params.N)
        return fock.evolve_exact(psi0, fock.build_hamiltonian(params), self.times)

    def reduced_problem(self):
        '''
        Two-mode parameters and initial ``v`` of the scenario
        '''
        if self.n == 2:
            return self.params, self.config.initial[0]
        return self.params.reduced(), SQRT2 * self.config.initial[0]
    # <---- Quantum ------------------------------------------------------------------------------------------

    # ----- Semiclassical ----------------------------------------------------------------------------------->
    def semiclassical(self):
        return self._cached('semiclassical', lambda: self._semiclassical(
            self.params, self.config.initial, self.config.grid_spec()
        ))

    def semiclassical_su2(self):
        if self.n != 3:
            raise ModelError('The SU(2) comparison run needs a three-mode scenario')
        params, v = self.reduced_problem()
        return self._cached('semiclassical-su2', lambda: self._semiclassical(
            params, np.array([v]), self.config.su2_grid_spec()
        ))

    def _semiclassical(self, params, w_i, spec):
        integrator = self.config.integrator
        accumulator = ivr.IntegralAccumulator(self.times, params.n, params.N, spec.weight)
        keep = ivr.nearest_to_center(spec, ivr.build_grid(spec), self.config.outputs['trajectory_dumps'])
        ensemble = ivr.run_ensemble(
            params, w_i, spec, self.times, self.config.filter,
            tol=integrator['rtol'], atol=integrator['atol'],
            singular_eps=integrator['singular_eps'], overflow=integrator['overflow'],
            workers=self.workers, keep=keep, accumulator=accumulator,
        )
        return SemiclassicalRun(ensemble, accumulator.table(), spec)

    def semiclassical_states(self, approach='semiclassical'):
        run = self.semiclassical() if approach == 'semiclassical' else self.semiclassical_su2()
        return [ivr.reconstruct_state(run.table, k) for k in range(len(self.times))]
    # <---- Semiclassical ------------------------------------------------------------------------------------

    def states(self, approach):
        '''
        Fock vectors of a quantum or semiclassical approach at every output
        time
        '''
        if approach == 'exact':
            return self.exact_states()
        if approach == 'reduced':
            return self.reduced_states()
        if approach in ('semiclassical', 'semiclassical-su2'):
            return self._cached(('states', approach), lambda: self.semiclassical_states(approach))
        raise ModelError('Approach {0!r} has no Fock states'.format(approach))

    def classical(self, observable):
        model = hamiltonian_for(self.params)
        integrator = self.config.integrator
        return self._cached(('classical', observable), lambda: ivr.classical_approximation(
            model, self.config.initial, observable, self.times,
            tol=integrator['rtol'], atol=integrator['atol'],
        ))


def _check_approach(approach):
    if approach not in APPROACHES:
        raise ModelError('Unknown approach {0!r}, expected one of {1}'.format(approach, ', '.join(APPROACHES)))


def series_szbar(approach, scenario):
    '''
    ``<S_z>/S`` of ``approach`` at the scenario's output times
    '''
    _check_approach(approach)
    if approach == 'classical':
        values = scenario.classical('sz')
    else:
        values = [fock.expectation(psi, 'sz') for psi in scenario.states(approach)]
    return TimeSeries(scenario.times, values, approach)


def series_b3_occupation(approach, scenario):
    '''
    ``<b3† b3>/N`` of ``approach``; three-mode scenarios only
    '''
    _check_approach(approach)
    if scenario.n != 3:
        raise UnknownObservableError('The b3 occupation needs a three-mode scenario')
    if approach in ('reduced', 'semiclassical-su2'):
        raise UnknownObservableError('Approach {0!r} has no b3 mode'.format(approach))
    N = scenario.params.N
    if approach == 'classical':
        values = scenario.classical('nb3') / N
    else:
        values = [fock.expectation(psi, 'nb3') / N for psi in scenario.states(approach)]
    return TimeSeries(scenario.times, values, approach)

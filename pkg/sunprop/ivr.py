# -*- coding: utf-8 -*-
'''
    sunprop.ivr
    ~~~~~~~~~~~

    The initial value representation of the semiclassical propagator.

    Trajectories are launched from a uniform lattice of ``w̄_i`` values
    centered at ``w_i*`` and integrated in parallel. Their contributions to
    the factorized integrals ``𝓘_m(t)`` are reduced in the parent process,
    strictly in grid order, as the results stream in. The result does not
    depend on the number of workers or on their scheduling.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import math
import logging
import multiprocessing

# Import 3rd-party libs
import numpy as np

# Import sunprop libs
from sunprop import fock, coherent
from sunprop.log import TRACE
from sunprop.model import SINGULAR_EPS, hamiltonian_for
from sunprop.dynamics import (
    ALIVE,
    FILTERED,
    SINGULAR,
    DEFAULT_RTOL,
    DEFAULT_ATOL,
    OVERFLOW,
    TrajectoryStatus,
    integrate_trajectory,
    propagator_log_amplitude,
    rate_exceeded,
)
from sunprop.exceptions import DegenerateTableError, ModelError, SingularityError

log = logging.getLogger(__name__)

STATUS_CODES = {ALIVE: 0, FILTERED: 1, SINGULAR: 2}
STATUS_KINDS = dict((code, kind) for kind, code in STATUS_CODES.items())


# ----- Grid ---------------------------------------------------------------------------------------------------->
class GridSpec(object):
    '''
    Square lattice of ``points`` values per real axis, spanning
    ``[-half_width, half_width]`` around ``center`` on every axis
    '''

    def __init__(self, center, half_width, points):
        center = np.atleast_1d(np.asarray(center, dtype=complex))
        if not np.all(np.isfinite(center)):
            raise ModelError('Grid center must be finite')
        if int(points) != points or points < 1 or points % 2 == 0:
            raise ModelError('Grid points per axis must be a positive odd integer, got {0!r}'.format(points))
        if not math.isfinite(half_width) or half_width < 0:
            raise ModelError('Grid half width must be finite and non negative, got {0!r}'.format(half_width))
        if points > 1 and half_width == 0:
            raise ModelError('A grid with more than one point needs a positive half width')
        self.center = center
        self.half_width = float(half_width)
        self.points = int(points)

    def __repr__(self):
        return 'GridSpec(center={0!r}, half_width={1!r}, points={2!r})'.format(
            self.center, self.half_width, self.points
        )

    @property
    def dim(self):
        return len(self.center)

    @property
    def size(self):
        return self.points ** (2 * self.dim)

    @property
    def spacing(self):
        if self.points == 1:
            return 0.0
        return 2.0 * self.half_width / (self.points - 1)

    @property
    def weight(self):
        '''
        Quadrature weight ``h^{2(n-1)}`` of every lattice point
        '''
        if self.points == 1:
            return 1.0
        return self.spacing ** (2 * self.dim)

    @property
    def center_index(self):
        return (self.size - 1) // 2

    def offsets(self):
        return self.spacing * (np.arange(self.points) - self.points // 2)


def build_grid(spec):
    '''
    Lattice points as an array of shape ``(size, n-1)``

    The real axes are ordered ``Re w̄_1, Im w̄_1, Re w̄_2, ...`` and the
    points are listed row-major, last axis fastest. The center is a lattice
    point.
    '''
    offsets = spec.offsets()
    axes = []
    for value in spec.center:
        axes.append(value.real + offsets)
        axes.append(value.imag + offsets)
    mesh = np.meshgrid(*axes, indexing='ij')
    flat = np.stack([axis.ravel() for axis in mesh], axis=-1)
    return flat[:, 0::2] + 1j * flat[:, 1::2]


def nearest_to_center(spec, labels, count):
    '''
    Indices of the ``count`` lattice points closest to the center, in order
    of distance with ties broken by grid order
    '''
    distance = np.sum(np.abs(labels - spec.center) ** 2, axis=-1)
    return [int(idx) for idx in np.argsort(distance, kind='stable')[:count]]
# <---- Grid -----------------------------------------------------------------------------------------------------


# ----- Filter -------------------------------------------------------------------------------------------------->
class FilterConfig(object):
    '''
    Cap ``λ`` on ``d/dt ln |K_sc|²``. ``inf`` disables the filter.
    '''

    def __init__(self, rate):
        rate = float(rate)
        if math.isnan(rate) or rate <= 0:
            raise ModelError('The filter rate must be positive, got {0!r}'.format(rate))
        self.rate = rate

    def __repr__(self):
        return 'FilterConfig(rate={0!r})'.format(self.rate)

    @property
    def enabled(self):
        return self.rate != np.inf

    @property
    def stop_rate(self):
        return self.rate if self.enabled else None


def apply_filter(record, rate):
    '''
    Evaluate the filter on the accepted-step history of ``record``

    The first accepted step ``[t_{k-1}, t_k]`` over which ``ln |K_sc|²``
    grows faster than ``rate`` removes the trajectory for all times after
    ``t_{k-1}``. The removal is permanent. A singular status is only
    replaced when the cut comes before the failure.
    '''
    times = np.asarray(record.history_t, dtype=float)
    values = np.asarray(record.history_log_abs2, dtype=float)
    for k in range(1, len(times)):
        if rate_exceeded(times[k - 1], values[k - 1], times[k], values[k], rate):
            cut = float(times[k - 1])
            if record.status.kind == SINGULAR and record.status.time < cut:
                break
            record.status = TrajectoryStatus(FILTERED, cut)
            break
    return record.status
# <---- Filter ---------------------------------------------------------------------------------------------------


# ----- Integrals ----------------------------------------------------------------------------------------------->
class IvrIntegralTable(object):
    '''
    ``𝓘_m(t)`` for every output time and basis state, plus the number of
    trajectories contributing at each time
    '''

    def __init__(self, times, basis, values, alive):
        self.times = np.asarray(times, dtype=float)
        self.basis = basis
        self.values = np.asarray(values, dtype=complex)
        self.alive = np.asarray(alive, dtype=int)

    def __repr__(self):
        return 'IvrIntegralTable(n={0}, N={1}, times={2})'.format(
            self.basis.n, self.basis.N, len(self.times)
        )

    @property
    def degenerate(self):
        return self.alive == 0

    def index_of(self, t):
        matches = np.nonzero(np.isclose(self.times, t, rtol=0, atol=1e-9))[0]
        if not len(matches):
            raise ModelError('{0!r} is not an output time'.format(t))
        return int(matches[0])

    def require(self, k):
        '''
        The row of output time ``k``, unless no trajectory contributes to it
        '''
        if self.alive[k] == 0:
            raise DegenerateTableError(
                'No trajectory contributes at t={0:.6g}'.format(self.times[k]), time=float(self.times[k])
            )
        return self.values[k]

    def columns(self):
        '''
        CSV header and rows: ``t, m1..mn, re_I, im_I, alive``
        '''
        header = ['t'] + ['m{0}'.format(j + 1) for j in range(self.basis.n)] + ['re_I', 'im_I', 'alive']
        occ = self.basis.occupations
        rows = []
        for k, t in enumerate(self.times):
            block = np.empty((len(self.basis), len(header)))
            block[:, 0] = t
            block[:, 1:self.basis.n + 1] = occ
            block[:, -3] = self.values[k].real
            block[:, -2] = self.values[k].imag
            block[:, -1] = self.alive[k]
            rows.append(block)
        return header, np.vstack(rows)


class IntegralAccumulator(object):
    '''
    Sequential reduction of trajectory contributions into an
    :class:`IvrIntegralTable`. Records must be fed in grid order for
    reproducible sums.

    The contribution of a trajectory at time ``t`` is::

        h^{2(n-1)} σ(n) dim |det M22|² K_sc Π_j u_j^{m_j} / (1 + |w̄|²)^n

    with ``u = (w̄*, 1) / sqrt(1 + |w̄|²)`` evaluated at ``w̄(t)``.
    '''

    def __init__(self, times, n, N, weight):
        self.times = np.asarray(times, dtype=float)
        self.n = n
        self.N = N
        self.basis = fock.enumerate_basis(n, N)
        self.log_scale = (math.log(weight) + math.log(coherent.measure_sigma(n))
                          + math.log(len(self.basis)))
        self.values = np.zeros((len(self.times), len(self.basis)), dtype=complex)
        self.alive = np.zeros(len(self.times), dtype=int)

    def contributions(self, record):
        '''
        Per-time coefficients and the mask of times the record takes part in

        A non-finite coefficient turns the record singular from that time on.
        '''
        mask = record.contributing()
        coeff = np.zeros(len(self.times), dtype=complex)
        for k in np.nonzero(mask)[0]:
            log_k = propagator_log_amplitude(record.snapshot(k), self.N, self.n)
            if log_k is None:
                # Focal point, a zero of the integrand
                continue
            norm2 = float(np.sum(np.abs(record.wbar[k]) ** 2))
            value = np.exp(self.log_scale + 2.0 * record.log_det[k].real
                           - self.n * math.log1p(norm2) + log_k)
            if not np.isfinite(value):
                record.status = TrajectoryStatus(SINGULAR, float(self.times[k]))
                record.message = 'Non-finite contribution'
                log.log(TRACE, 'Trajectory from w̄_i=%s has a non-finite contribution at t=%.6g',
                        record.wbar_i, self.times[k])
                mask[k:] = False
                break
            coeff[k] = value
        return coeff, mask

    def add(self, record):
        coeff, mask = self.contributions(record)
        if not mask.any():
            return
        index = np.nonzero(mask)[0]
        u = coherent.unit_coordinates(record.wbar[index].conj())
        self.values[index] += coeff[index, np.newaxis] * coherent.power_products(u, self.basis)
        self.alive[index] += 1

    def table(self):
        return IvrIntegralTable(self.times, self.basis, self.values.copy(), self.alive.copy())


def accumulate_integrals(records, times, n, N, weight):
    '''
    Reduce ``records``, in the order given, into an :class:`IvrIntegralTable`
    '''
    accumulator = IntegralAccumulator(times, n, N, weight)
    for record in records:
        accumulator.add(record)
    return accumulator.table()
# <---- Integrals ------------------------------------------------------------------------------------------------


# ----- Ensemble ------------------------------------------------------------------------------------------------>
class TrajectoryTask(object):
    '''
    Picklable trajectory integration sent to the worker processes
    '''

    def __init__(self, params, w_i, times, filter_config, tol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                 singular_eps=SINGULAR_EPS, overflow=OVERFLOW):
        self.params = params
        self.w_i = np.asarray(w_i, dtype=complex)
        self.times = np.asarray(times, dtype=float)
        self.filter_config = filter_config
        self.tol = tol
        self.atol = atol
        self.singular_eps = singular_eps
        self.overflow = overflow
        self._model = None

    def __getstate__(self):
        state = self.__dict__.copy()
        state['_model'] = None
        return state

    @property
    def model(self):
        if self._model is None:
            self._model = hamiltonian_for(self.params)
        return self._model

    def __call__(self, wbar_i):
        # Integration stops at the first violating step; the status is set
        # from the accepted-step history
        record = integrate_trajectory(
            self.model, self.w_i, wbar_i, self.times,
            tol=self.tol, atol=self.atol, singular_eps=self.singular_eps,
            overflow=self.overflow, stop_rate=self.filter_config.stop_rate,
        )
        apply_filter(record, self.filter_config.rate)
        return record


class Ensemble(object):
    '''
    Bookkeeping of an ensemble run: the status of every grid slot and the
    records that were asked to be kept
    '''

    def __init__(self, spec, labels, times):
        self.spec = spec
        self.labels = labels
        self.times = np.asarray(times, dtype=float)
        self.codes = np.zeros(len(labels), dtype=np.int8)
        self.cut_times = np.full(len(labels), self.times[-1])
        self.records = {}

    def __len__(self):
        return len(self.labels)

    def record_status(self, index, record):
        status = record.status
        self.codes[index] = STATUS_CODES[status.kind]
        if status.kind != ALIVE:
            self.cut_times[index] = status.time

    def status(self, index):
        kind = STATUS_KINDS[int(self.codes[index])]
        if kind == ALIVE:
            return TrajectoryStatus(ALIVE, None)
        return TrajectoryStatus(kind, float(self.cut_times[index]))

    def counts(self):
        return dict((kind, int(np.sum(self.codes == code))) for kind, code in STATUS_CODES.items())

    @property
    def principal(self):
        '''
        The record launched from the grid center, when kept
        '''
        return self.records.get(self.spec.center_index)


def default_chunksize(size, workers):
    return max(1, size // (workers * 16))


def _iter_records(task, labels, workers, chunksize):
    if workers == 1:
        for label in labels:
            yield task(label)
        return
    pool = multiprocessing.Pool(processes=workers)
    try:
        for record in pool.imap(task, labels, chunksize=chunksize):
            yield record
        pool.close()
    except BaseException:
        pool.terminate()
        raise
    finally:
        pool.join()


def run_ensemble(params, w_i, spec, times, filter_config, tol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                 singular_eps=SINGULAR_EPS, overflow=OVERFLOW, workers=1, keep=(), chunksize=None,
                 accumulator=None):
    '''
    Integrate the trajectories of every lattice point of ``spec``

    :param keep: grid indices whose full records are kept on the returned
                 ensemble. The principal trajectory is always kept.
    :param accumulator: an :class:`IntegralAccumulator` fed with every record
                        in grid order
    :returns: :class:`Ensemble`
    '''
    labels = build_grid(spec)
    ensemble = Ensemble(spec, labels, times)
    keep = set(keep) | set([spec.center_index])
    task = TrajectoryTask(params, w_i, times, filter_config, tol=tol, atol=atol,
                          singular_eps=singular_eps, overflow=overflow)
    if chunksize is None:
        chunksize = default_chunksize(len(labels), workers)
    log.info('Integrating {0} trajectories on {1} worker(s)'.format(len(labels), workers))
    report_every = max(1, len(labels) // 10)
    for index, record in enumerate(_iter_records(task, labels, workers, chunksize)):
        if accumulator is not None:
            accumulator.add(record)
        ensemble.record_status(index, record)
        if index in keep:
            ensemble.records[index] = record
        if (index + 1) % report_every == 0 or index + 1 == len(labels):
            log.info('  {0}/{1} trajectories done'.format(index + 1, len(labels)))
    counts = ensemble.counts()
    log.info('Ensemble finished: {alive} alive, {filtered} filtered, {singular} singular'.format(**counts))
    return ensemble


def survival_diagram(ensemble):
    '''
    CSV header and rows mapping every grid point to its survival time:
    the horizon for alive trajectories, the cut or failure time otherwise.
    The ``status`` column is 0 alive, 1 filtered, 2 singular.
    '''
    header = []
    for j in range(ensemble.spec.dim):
        header.extend(['re_wbar{0}'.format(j + 1), 'im_wbar{0}'.format(j + 1)])
    header.extend(['survival', 'status'])
    rows = np.empty((len(ensemble), len(header)))
    rows[:, 0:-2:2] = ensemble.labels.real
    rows[:, 1:-2:2] = ensemble.labels.imag
    rows[:, -2] = ensemble.cut_times
    rows[:, -1] = ensemble.codes
    return header, rows
# <---- Ensemble -------------------------------------------------------------------------------------------------


# ----- Propagator and States ----------------------------------------------------------------------------------->
def assemble_propagator(table, k, w_f):
    '''
    ``K_sc^ivr(w_f*, w_i; t_k) = Σ_m [N!/m!] (1 + |w_f|²)^{-N/2} Π_j (w_f,j*)^{m_j} 𝓘_m``
    '''
    values = table.require(k)
    basis = table.basis
    w_f = coherent.as_phase_vector(w_f, basis.n)
    multinomial = np.exp(basis.log_multinomials)
    u_f = coherent.unit_coordinates(w_f)
    return complex(np.sum(multinomial * coherent.power_products(u_f, basis).conj() * values))


def direct_propagator(records, k, w_f, weight):
    '''
    The same quantity summed trajectory by trajectory with the coherent-state
    overlap ``<w_f|w̄(t)*>`` in place of the multinomial expansion
    '''
    total = 0j
    for record in records:
        if not record.contributing()[k]:
            continue
        snapshot = record.snapshot(k)
        log_k = propagator_log_amplitude(snapshot, record.N, record.n)
        if log_k is None:
            continue
        n = record.n
        norm2 = float(np.sum(np.abs(snapshot.wbar) ** 2))
        density = coherent.measure_sigma(n) * fock.basis_dimension(n, record.N) / (1.0 + norm2) ** n
        det2 = math.exp(2.0 * snapshot.log_det.real)
        total += (weight * density * det2
                  * coherent.overlap(w_f, snapshot.wbar.conj(), record.N) * np.exp(log_k))
    return complex(total)


def unnormalized_state(table, k):
    '''
    ``<m|e^{-iHt}|w_i>_sc = sqrt(N!/m!) 𝓘_m`` before normalization
    '''
    values = table.require(k)
    amplitudes = np.exp(0.5 * table.basis.log_multinomials) * values
    return fock.FockVector(amplitudes, table.basis)


def reconstruct_state(table, k):
    '''
    The normalized semiclassical state at output time ``k``
    '''
    return unnormalized_state(table, k).normalize()


def classical_approximation(model, w_i, observable, times, tol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    '''
    ``<w(t)|O|w(t)>`` along the principal trajectory ``w̄(0) = w_i*``
    '''
    w_i = coherent.as_phase_vector(w_i, model.params.n)
    record = integrate_trajectory(model, w_i, w_i.conj(), times, tol=tol, atol=atol)
    if record.status.kind == SINGULAR:
        raise SingularityError('The principal trajectory turned singular: {0}'.format(record.message),
                               time=record.status.time)
    return coherent.normal_symbol(observable, record.w, model.params.n, model.N)
# <---- Propagator and States ------------------------------------------------------------------------------------

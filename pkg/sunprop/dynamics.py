# -*- coding: utf-8 -*-
'''
    sunprop.dynamics
    ~~~~~~~~~~~~~~~~

    Integration of a single doubled phase space trajectory.

    The state ``(w, w̄)``, the tangent blocks ``M12``/``M22``, the action
    integral and the correction integral are integrated together as one
    augmented complex ODE with an embedded Runge-Kutta 5(4) pair
    (:class:`scipy.integrate.RK45`), stepped by hand so that every accepted
    step can be inspected:

    * ``ln(1 + w̄w)`` and ``ln det M22`` are unwrapped step by step; a step
      whose phase increment exceeds ``π/2`` is rejected and retried with
      half the step size.
    * ``ln |K_sc|²`` is recorded after every accepted step so that the
      heuristic filter can be evaluated on the step history.
    * Output times are served from the step's dense output.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import math
import cmath
import logging
import collections

# Import 3rd-party libs
import numpy as np
from scipy.integrate import RK45

# Import sunprop libs
from sunprop.log import GARBAGE, TRACE
from sunprop.model import SINGULAR_EPS, FlowTerms
from sunprop.exceptions import ModelError, SingularityError

log = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10
OVERFLOW = 1e8

#: largest accepted phase increment of an unwrapped logarithm per step
BRANCH_GUARD = 0.5 * math.pi

#: a trajectory needing steps below this to keep its branches is singular
MIN_STEP = 1e-10

#: accepted steps after which a step limit lowered by the branch guard is lifted
BRANCH_RELAX_STEPS = 8

ALIVE = 'alive'
FILTERED = 'filtered'
SINGULAR = 'singular'

Snapshot = collections.namedtuple(
    'Snapshot',
    ('t', 'w_i', 'wbar_i', 'w', 'wbar', 'm12', 'm22', 'action', 'correction',
     'log_s', 'log_det')
)


class TrajectoryStatus(collections.namedtuple('TrajectoryStatus', ('kind', 'time'))):
    '''
    ``alive``, ``filtered(t_cut)`` or ``singular(t_fail)``
    '''

    __slots__ = ()

    def contributes_at(self, t):
        '''
        Whether the trajectory still takes part in the IVR integrals at ``t``
        '''
        if self.kind == FILTERED:
            return t <= self.time
        return True

    def __str__(self):
        if self.kind == ALIVE:
            return ALIVE
        return '{0}({1:.6g})'.format(self.kind, self.time)


STATUS_ALIVE = TrajectoryStatus(ALIVE, None)


class TrajectoryRecord(object):
    '''
    One member of an IVR ensemble: snapshots at the output times, the
    accepted-step history of ``ln |K_sc|²`` and the trajectory status.

    Snapshot arrays are indexed by output time and hold NaN past
    ``reached``, the number of output times actually integrated to.
    '''

    def __init__(self, n, N, w_i, wbar_i, times):
        self.n = n
        self.N = N
        self.w_i = np.array(w_i, dtype=complex)
        self.wbar_i = np.array(wbar_i, dtype=complex)
        self.times = np.asarray(times, dtype=float)
        count, d = len(self.times), n - 1
        nan = complex(np.nan, np.nan)
        self.w = np.full((count, d), nan)
        self.wbar = np.full((count, d), nan)
        self.m12 = np.full((count, d, d), nan)
        self.m22 = np.full((count, d, d), nan)
        self.action = np.full(count, nan)
        self.correction = np.full(count, nan)
        self.log_s = np.full(count, nan)
        self.log_det = np.full(count, nan)
        self.reached = 0
        self.status = STATUS_ALIVE
        self.history_t = []
        self.history_log_abs2 = []
        self.message = None

    def __repr__(self):
        return 'TrajectoryRecord(wbar_i={0!r}, status={1})'.format(self.wbar_i, self.status)

    @property
    def d(self):
        return self.n - 1

    @property
    def log_s0(self):
        return complex(cmath.log(1.0 + np.dot(self.wbar_i, self.w_i)))

    def snapshot(self, k):
        if k >= self.reached:
            raise IndexError('Output time {0} was not reached'.format(k))
        return Snapshot(self.times[k], self.w_i, self.wbar_i, self.w[k], self.wbar[k],
                        self.m12[k], self.m22[k], self.action[k], self.correction[k],
                        self.log_s[k], self.log_det[k])

    def snapshots(self):
        return [self.snapshot(k) for k in range(self.reached)]

    def log_amplitudes(self):
        '''
        ``ln K_sc`` at every reached output time; NaN past ``reached`` and at
        focal points
        '''
        values = np.full(len(self.times), complex(np.nan, np.nan))
        for k in range(self.reached):
            value = propagator_log_amplitude(self.snapshot(k), self.N, self.n)
            if value is not None:
                values[k] = value
        return values

    def contributing(self):
        '''
        Boolean mask of the output times at which this trajectory enters the
        IVR integrals
        '''
        mask = np.zeros(len(self.times), dtype=bool)
        mask[:self.reached] = True
        if self.status.kind == FILTERED:
            mask &= self.times <= self.status.time
        return mask

    def survival_time(self):
        if self.status.kind == ALIVE:
            return float(self.times[-1])
        return float(self.status.time)

    def dump_columns(self):
        '''
        Column names and rows of the debug snapshot dump
        '''
        header = ['t']
        for name in ('w', 'wbar'):
            for j in range(1, self.d + 1):
                header.extend(['re_{0}{1}'.format(name, j), 'im_{0}{1}'.format(name, j)])
        header.extend(['re_S', 'im_S', 're_I', 'im_I', 'log_abs_K', 'phase_K',
                       're_det_M22', 'im_det_M22'])
        log_amp = self.log_amplitudes()
        rows = []
        for k in range(self.reached):
            row = [self.times[k]]
            for values in (self.w[k], self.wbar[k]):
                for value in values:
                    row.extend([value.real, value.imag])
            det = np.linalg.det(self.m22[k])
            row.extend([self.action[k].real, self.action[k].imag,
                        self.correction[k].real, self.correction[k].imag,
                        log_amp[k].real, log_amp[k].imag, det.real, det.imag])
            rows.append(row)
        return header, np.array(rows, dtype=float).reshape(len(rows), len(header))

    # ----- Internal Bookkeeping -------------------------------------------------------------------------------->
    def _store(self, k, y, log_s, log_det):
        d = self.d
        w, wbar, m, action, correction = _unpack(y, d)
        self.w[k] = w
        self.wbar[k] = wbar
        self.m12[k] = m[:d]
        self.m22[k] = m[d:]
        self.action[k] = action
        self.correction[k] = correction
        self.log_s[k] = log_s
        self.log_det[k] = log_det
        self.reached = k + 1

    def _fail(self, t, message):
        self.status = TrajectoryStatus(SINGULAR, float(t))
        self.message = message
        log.log(TRACE, 'Trajectory from w̄_i=%s turned singular at t=%.6g: %s',
                self.wbar_i, t, message)
    # <---- Internal Bookkeeping ---------------------------------------------------------------------------------


def _unpack(y, d):
    w = y[:d]
    wbar = y[d:2 * d]
    m = y[2 * d:2 * d + 2 * d * d].reshape(2 * d, d)
    return w, wbar, m, y[-2], y[-1]


def _pack(w, wbar, m, action, correction):
    return np.concatenate([w, wbar, np.asarray(m).ravel(), [action, correction]]).astype(complex)


class _BranchTracker(object):
    '''
    Continuous logarithms of ``1 + w̄w`` and ``det M22`` along accepted steps
    '''

    def __init__(self, s, det):
        self.s = s
        self.det = det
        self.log_s = complex(cmath.log(s))
        self.log_det = complex(cmath.log(det)) if det != 0 else complex(-np.inf, 0.0)
        self._det_phase = self.log_det.imag if det != 0 else 0.0

    def continued(self, s, det):
        '''
        Logarithms at a point reached from the last accepted one, and
        whether both phase increments respect the branch guard
        '''
        d_log_s = cmath.log(s / self.s)
        ok = abs(d_log_s.imag) <= BRANCH_GUARD
        if det == 0:
            return self.log_s + d_log_s, complex(-np.inf, 0.0), ok
        if self.det == 0:
            # Leaving a focal point: take the branch closest to the last phase
            log_det = complex(cmath.log(det))
            turns = round((self._det_phase - log_det.imag) / (2.0 * math.pi))
            return self.log_s + d_log_s, log_det + 2j * math.pi * turns, ok
        d_log_det = cmath.log(det / self.det)
        ok = ok and abs(d_log_det.imag) <= BRANCH_GUARD
        return self.log_s + d_log_s, self.log_det + d_log_det, ok

    def accept(self, s, det, log_s, log_det):
        self.s, self.det = s, det
        self.log_s, self.log_det = log_s, log_det
        if det != 0:
            self._det_phase = log_det.imag


def unwrap_log(values):
    '''
    Continuous logarithm along a sampled complex path: each entry follows
    from the previous one by the principal logarithm of their ratio
    '''
    values = np.asarray(values, dtype=complex)
    logs = np.empty(len(values), dtype=complex)
    if not len(values):
        return logs
    logs[0] = np.log(values[0])
    logs[1:] = logs[0] + np.cumsum(np.log(values[1:] / values[:-1]))
    return logs


def boundary_term(w_i, wbar_0, wbar_tau, w_tau, N, log_final=None, log_initial=None):
    '''
    ``Γ = -i (N/2) [Ln(1 + w̄(τ)w(τ)) + Ln(1 + w̄(0)w_i)]``

    The final label of the IVR is ``w_f* = w̄(τ)``. Principal logarithms are
    used unless continuously tracked values ``log_final`` / ``log_initial``
    are passed in.
    '''
    if log_final is None:
        log_final = cmath.log(1.0 + np.dot(wbar_tau, w_tau))
    if log_initial is None:
        log_initial = cmath.log(1.0 + np.dot(wbar_0, w_i))
    return -0.5j * N * (log_final + log_initial)


def propagator_log_amplitude(snapshot, N, n):
    '''
    ``ln K_sc(w̄(t), w_i; t)`` with the square root taken as half the
    continuously unwrapped logarithm. Returns ``None`` at a focal point
    (``det M22 = 0``).
    '''
    if np.isneginf(snapshot.log_det.real):
        return None
    log_s0 = complex(cmath.log(1.0 + np.dot(snapshot.wbar_i, snapshot.w_i)))
    gamma = boundary_term(snapshot.w_i, snapshot.wbar_i, snapshot.wbar, snapshot.w, N,
                          log_final=snapshot.log_s, log_initial=log_s0)
    norms = (math.log1p(float(np.sum(np.abs(snapshot.wbar) ** 2)))
             + math.log1p(float(np.sum(np.abs(snapshot.w_i) ** 2))))
    return (1j * (snapshot.action + snapshot.correction + gamma)
            - 0.5 * N * norms
            + 0.25 * n * (snapshot.log_s - log_s0)
            - 0.5 * snapshot.log_det)


def correction_integrand(model, state, singular_eps=SINGULAR_EPS):
    '''
    ``(1/4) Tr[∂(ξ̄ ∂𝓗/∂w)/∂w̄ + ∂(ξ ∂𝓗/∂w̄)/∂w]``
    '''
    return FlowTerms(model, state, singular_eps).correction


def _log_abs_k2(y, d, N, n, w_i, log_s0, log_s, log_det):
    '''
    ``ln |K_sc|²``, which does not depend on the logarithm branches
    '''
    _, wbar, _, action, correction = _unpack(y, d)
    norms = (math.log1p(float(np.sum(np.abs(wbar) ** 2)))
             + math.log1p(float(np.sum(np.abs(w_i) ** 2))))
    real = (-(action + correction).imag
            + 0.5 * N * (log_s.real + log_s0.real)
            - 0.5 * N * norms
            + 0.25 * n * (log_s.real - log_s0.real)
            - 0.5 * log_det.real)
    return 2.0 * real


def rate_exceeded(t0, value0, t1, value1, rate):
    '''
    Discrete form of the filter condition ``d/dt ln |K_sc|² < rate``
    '''
    if rate is None or rate == np.inf:
        return False
    if value1 == np.inf:
        return True
    return (value1 - value0) / (t1 - t0) >= rate


class _AugmentedFlow(object):
    '''
    Right hand side of the augmented ODE, with the singularity guards
    '''

    def __init__(self, model, singular_eps, overflow):
        self.model = model
        self.d = model.dim
        self.N = model.N
        self.singular_eps = singular_eps
        self.overflow = overflow

    def check(self, t, y):
        d = self.d
        if not np.all(np.isfinite(y)):
            raise SingularityError('Non-finite state', time=t)
        if np.max(np.abs(y[:2 * d])) > self.overflow:
            raise SingularityError('|w| or |w̄| above {0:.1e}'.format(self.overflow), time=t)

    def __call__(self, t, y):
        self.check(t, y)
        w, wbar, m, _, _ = _unpack(y, self.d)
        try:
            terms = FlowTerms(self.model, _PointView(w, wbar), self.singular_eps)
        except SingularityError as exc:
            exc.time = t
            raise
        dm = terms.linearization.dot(m)
        lagrangian = (0.5j * self.N * (np.dot(wbar, terms.w_dot) - np.dot(terms.wbar_dot, w)) / terms.s
                      - terms.derivatives.value)
        return _pack(terms.w_dot, terms.wbar_dot, dm, lagrangian, terms.correction)


class _PointView(object):
    __slots__ = ('w', 'wbar')

    def __init__(self, w, wbar):
        self.w = w
        self.wbar = wbar


def _det_and_s(y, d):
    w, wbar, m, _, _ = _unpack(y, d)
    return 1.0 + np.dot(wbar, w), complex(np.linalg.det(m[d:]))


class StepLimit(object):
    '''
    Largest step the integrator may take. A branch guard rejection halves
    it; after ``relax_after`` accepted steps the configured limit is back.
    '''

    def __init__(self, configured=np.inf, relax_after=BRANCH_RELAX_STEPS, min_step=MIN_STEP):
        self.configured = configured
        self.relax_after = relax_after
        self.min_step = min_step
        self.current = configured
        self._accepted = 0

    def __repr__(self):
        return 'StepLimit(current={0!r}, configured={1!r})'.format(self.current, self.configured)

    @property
    def reduced(self):
        return self.current < self.configured

    def reject(self, step):
        '''
        Halve the limit below the rejected ``step``. Returns ``False`` when
        that would go below ``min_step``.
        '''
        if step / 2.0 < self.min_step:
            return False
        self.current = step / 2.0
        self._accepted = 0
        return True

    def accept(self):
        '''
        Count an accepted step. Returns ``True`` when the limit was just
        restored.
        '''
        if not self.reduced:
            return False
        self._accepted += 1
        if self._accepted < self.relax_after:
            return False
        self.current = self.configured
        self._accepted = 0
        return True


def integrate_trajectory(model, w_i, wbar_i, times, tol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                         singular_eps=SINGULAR_EPS, overflow=OVERFLOW, stop_rate=None):
    '''
    Integrate the trajectory launched from ``(w_i, w̄_i)`` and take
    snapshots at ``times``

    :param times: increasing output times starting at 0
    :param tol: relative tolerance of the Runge-Kutta pair
    :param atol: absolute tolerance
    :param stop_rate: when given, integration stops at the first accepted
                      step violating ``d/dt ln |K_sc|² < stop_rate`` and the
                      record is marked ``filtered``
    :returns: :class:`TrajectoryRecord`
    '''
    times = np.asarray(times, dtype=float)
    if not len(times) or times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ModelError('Output times must increase strictly from 0')
    d, n, N = model.dim, model.params.n, model.N
    w_i = np.atleast_1d(np.asarray(w_i, dtype=complex))
    wbar_i = np.atleast_1d(np.asarray(wbar_i, dtype=complex))
    record = TrajectoryRecord(n, N, w_i, wbar_i, times)
    flow = _AugmentedFlow(model, singular_eps, overflow)
    m0 = np.vstack([np.zeros((d, d)), np.eye(d)])
    y = _pack(w_i, wbar_i, m0, 0.0, 0.0)

    s0 = 1.0 + np.dot(wbar_i, w_i)
    if abs(s0) < singular_eps:
        record._fail(0.0, 'Launched on the singular set')
        return record
    tracker = _BranchTracker(s0, 1.0 + 0j)
    log_s0 = tracker.log_s
    record._store(0, y, tracker.log_s, tracker.log_det)
    log_abs2 = _log_abs_k2(y, d, N, n, w_i, log_s0, tracker.log_s, tracker.log_det)
    record.history_t.append(0.0)
    record.history_log_abs2.append(log_abs2)

    t_end = times[-1]
    next_out = 1
    limit = StepLimit()
    solver = RK45(flow, 0.0, y, t_end, rtol=tol, atol=atol, max_step=limit.current) if len(times) > 1 else None

    while next_out < len(times):
        t_prev, y_prev = solver.t, solver.y.copy()
        try:
            solver.step()
            if solver.status == 'failed':
                raise SingularityError('Integrator failure', time=t_prev)
            flow.check(solver.t, solver.y)
        except SingularityError as exc:
            record._fail(t_prev, str(exc))
            break
        t_new, y_new = solver.t, solver.y
        s_new, det_new = _det_and_s(y_new, d)
        log_s, log_det, ok = tracker.continued(s_new, det_new)
        if not ok:
            if not limit.reject(t_new - t_prev):
                record._fail(t_prev, 'Branch guard needs steps below {0:.0e}'.format(MIN_STEP))
                break
            log.log(GARBAGE, 'Branch guard rejected [%.6g, %.6g], retrying with max step %.3g',
                    t_prev, t_new, limit.current)
            solver = RK45(flow, t_prev, y_prev, t_end, rtol=tol, atol=atol, max_step=limit.current)
            continue
        if limit.accept():
            solver.max_step = limit.current

        dense = None
        while next_out < len(times) and times[next_out] <= t_new:
            t_out = times[next_out]
            if t_out == t_new:
                y_out, log_s_out, log_det_out = y_new, log_s, log_det
            else:
                if dense is None:
                    dense = solver.dense_output()
                y_out = dense(t_out)
                log_s_out, log_det_out, _ = tracker.continued(*_det_and_s(y_out, d))
            record._store(next_out, y_out, log_s_out, log_det_out)
            next_out += 1
        tracker.accept(s_new, det_new, log_s, log_det)

        previous = log_abs2
        log_abs2 = _log_abs_k2(y_new, d, N, n, w_i, log_s0, log_s, log_det)
        record.history_t.append(t_new)
        record.history_log_abs2.append(log_abs2)
        if rate_exceeded(t_prev, previous, t_new, log_abs2, stop_rate):
            record.status = TrajectoryStatus(FILTERED, float(t_prev))
            log.log(TRACE, 'Trajectory from w̄_i=%s filtered at t=%.6g', wbar_i, t_prev)
            break

    record.history_t = np.array(record.history_t)
    record.history_log_abs2 = np.array(record.history_log_abs2)
    return record


def trajectory_energy(model, record):
    '''
    ``𝓗(w̄(t), w(t))`` at the reached output times
    '''
    return np.array([model.value(record.wbar[k], record.w[k]) for k in range(record.reached)])

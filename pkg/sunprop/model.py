# -*- coding: utf-8 -*-
'''
    sunprop.model
    ~~~~~~~~~~~~~

    Effective classical Hamiltonians of the triple-well condensate on the
    doubled phase space, the equations of motion they generate and the
    matrix of the linearized (tangent) flow.

    Both shipped models share the shape

    .. math::

        \\mathcal{H}/N = \\Omega\\,P(\\bar w, w)/(1+\\bar w w)
                       + \\chi\\,Q(\\bar w, w)/(1+\\bar w w)^2

    with polynomial numerators ``P`` (tunneling) and ``Q`` (collisions), so
    the derivative bookkeeping lives in :class:`RationalHamiltonian` and the
    concrete models only provide their numerators.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import abc
import math
import logging
import collections

# Import 3rd-party libs
import numpy as np

# Import sunprop libs
from sunprop.exceptions import ModelError, SingularityError

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

#: default threshold on ``|1 + w̄w|`` below which a state counts as singular
SINGULAR_EPS = 1e-8

#: value bundle of a scalar function and its first and second derivatives.
#: ``d_wbar_w[j, k]`` is the mixed derivative with respect to ``w̄_j`` and
#: ``w_k``.
Derivatives = collections.namedtuple(
    'Derivatives',
    ('value', 'd_w', 'd_wbar', 'd_wbar_w', 'd_wbar_wbar', 'd_w_w')
)


class ModelParams(object):
    '''
    Parameters of the triple-well model

    :param n: mode count of the coherent states, 3 for the trimer, 2 for its
              invariant-subspace reduction
    :param N: particle count
    :param omega: tunneling rate
    :param chi: collision rate
    '''

    __slots__ = ('n', 'N', 'omega', 'chi')

    def __init__(self, n, N, omega, chi):
        if n not in (2, 3):
            raise ModelError('Mode count must be 2 or 3, not {0!r}'.format(n))
        if int(N) != N or N < 1:
            raise ModelError('Particle count must be a positive integer, not {0!r}'.format(N))
        if not (math.isfinite(omega) and math.isfinite(chi)):
            raise ModelError('Tunneling and collision rates must be finite')
        if chi != 0 and N < 2:
            raise ModelError('A collision term needs at least two particles')
        object.__setattr__(self, 'n', int(n))
        object.__setattr__(self, 'N', int(N))
        object.__setattr__(self, 'omega', float(omega))
        object.__setattr__(self, 'chi', float(chi))

    def __setattr__(self, name, value):
        raise AttributeError('{0} is immutable'.format(self.__class__.__name__))

    def __eq__(self, other):
        if not isinstance(other, ModelParams):
            return NotImplemented
        return tuple(self) == tuple(other)

    def __hash__(self):
        return hash(tuple(self))

    def __iter__(self):
        return iter((self.n, self.N, self.omega, self.chi))

    def __reduce__(self):
        return (self.__class__, tuple(self))

    def __repr__(self):
        return 'ModelParams(n={0}, N={1}, omega={2!r}, chi={3!r})'.format(*self)

    @property
    def dim(self):
        '''
        Number of complex coordinates of ``w``
        '''
        return self.n - 1

    def reduced(self):
        '''
        Parameters of the two-mode reduction of a three-mode model
        '''
        return ModelParams(2, self.N, self.omega, self.chi)


class DoubledState(object):
    '''
    Point ``(w, w̄)`` of the doubled phase space. ``w̄`` is independent of
    ``w``; only on a principal trajectory does ``w̄ = w*`` hold.
    '''

    __slots__ = ('w', 'wbar')

    def __init__(self, w, wbar):
        self.w = np.atleast_1d(np.asarray(w, dtype=complex))
        self.wbar = np.atleast_1d(np.asarray(wbar, dtype=complex))
        if self.w.shape != self.wbar.shape:
            raise ModelError('w and w̄ must have the same length')

    @classmethod
    def principal(cls, w):
        w = np.atleast_1d(np.asarray(w, dtype=complex))
        return cls(w, w.conj())

    @property
    def s(self):
        '''
        The common factor ``1 + w̄w``
        '''
        return 1.0 + np.dot(self.wbar, self.w)

    def is_principal(self, atol=1e-12):
        return bool(np.allclose(self.wbar, self.w.conj(), rtol=0.0, atol=atol))

    def __repr__(self):
        return 'DoubledState(w={0!r}, wbar={1!r})'.format(self.w, self.wbar)


# ----- Effective Hamiltonians ---------------------------------------------------------------------------------->
class ClassicalHamiltonianModel(abc.ABC):
    '''
    Interface of an effective classical Hamiltonian ``𝓗(w̄, w)``

    Implementations return the value and all first and second derivatives in
    a single :class:`Derivatives` bundle since they share most of their
    subexpressions.
    '''

    def __init__(self, params):
        self.params = params

    @property
    def N(self):
        return self.params.N

    @property
    def dim(self):
        return self.params.dim

    @abc.abstractmethod
    def derivatives(self, wbar, w):
        '''
        Evaluate ``𝓗`` and its derivatives at ``(w̄, w)``
        '''

    def value(self, wbar, w):
        return self.derivatives(wbar, w).value

    def __repr__(self):
        return '{0}({1!r})'.format(self.__class__.__name__, self.params)


def _rational_derivatives(numerator, x, wbar, w, power):
    '''
    Derivatives of ``numerator / (1 + x)**power`` where ``x = w̄w``
    '''
    p, p_w, p_wbar, p_wbar_w, p_wbar_wbar, p_w_w = numerator
    d = 1.0 + x
    k = power
    inv = d ** -k
    inv1 = d ** (-k - 1)
    inv2 = d ** (-k - 2)
    # dD/dw = w̄, dD/dw̄ = w, d²D/dw̄dw = 1
    value = p * inv
    d_w = p_w * inv - k * p * inv1 * wbar
    d_wbar = p_wbar * inv - k * p * inv1 * w
    d_wbar_w = (p_wbar_w * inv
                - k * inv1 * (np.outer(p_wbar, wbar) + np.outer(w, p_w))
                - k * p * inv1 * np.eye(len(w))
                + k * (k + 1) * p * inv2 * np.outer(w, wbar))
    d_wbar_wbar = (p_wbar_wbar * inv
                   - k * inv1 * (np.outer(p_wbar, w) + np.outer(w, p_wbar))
                   + k * (k + 1) * p * inv2 * np.outer(w, w))
    d_w_w = (p_w_w * inv
             - k * inv1 * (np.outer(p_w, wbar) + np.outer(wbar, p_w))
             + k * (k + 1) * p * inv2 * np.outer(wbar, wbar))
    return value, d_w, d_wbar, d_wbar_w, d_wbar_wbar, d_w_w


class RationalHamiltonian(ClassicalHamiltonianModel):
    '''
    ``𝓗 = N [Ω P/(1+w̄w) + χ Q/(1+w̄w)²]`` for polynomial ``P`` and ``Q``
    '''

    @abc.abstractmethod
    def tunneling_numerator(self, wbar, w):
        '''
        ``P`` and its derivatives, in :class:`Derivatives` order
        '''

    @abc.abstractmethod
    def collision_numerator(self, wbar, w):
        '''
        ``Q`` and its derivatives, in :class:`Derivatives` order
        '''

    def derivatives(self, wbar, w):
        x = np.dot(wbar, w)
        hop = _rational_derivatives(self.tunneling_numerator(wbar, w), x, wbar, w, 1)
        col = _rational_derivatives(self.collision_numerator(wbar, w), x, wbar, w, 2)
        scale_hop = self.params.N * self.params.omega
        scale_col = self.params.N * self.params.chi
        return Derivatives(*[scale_hop * a + scale_col * b for a, b in zip(hop, col)])


class TripleWellHamiltonian(RationalHamiltonian):
    '''
    Three-mode (SU(3)) effective Hamiltonian of the trimer, ``w = (w1, w2)``
    with the third mode as reference
    '''

    def tunneling_numerator(self, wbar, w):
        w1, w2 = w
        b1, b2 = wbar
        zero = np.zeros((2, 2), dtype=complex)
        return (
            b1 * w2 + b2 * w1 + b1 + w1 + b2 + w2,
            np.array([b2 + 1.0, b1 + 1.0]),
            np.array([w2 + 1.0, w1 + 1.0]),
            np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
            zero,
            zero,
        )

    def collision_numerator(self, wbar, w):
        w1, w2 = w
        b1, b2 = wbar
        return (
            b1 * b1 * w1 * w1 + b2 * b2 * w2 * w2 + 1.0,
            np.array([2.0 * b1 * b1 * w1, 2.0 * b2 * b2 * w2]),
            np.array([2.0 * b1 * w1 * w1, 2.0 * b2 * w2 * w2]),
            np.diag([4.0 * b1 * w1, 4.0 * b2 * w2]),
            np.diag([2.0 * w1 * w1, 2.0 * w2 * w2]),
            np.diag([2.0 * b1 * b1, 2.0 * b2 * b2]),
        )


class ReducedTripleWellHamiltonian(RationalHamiltonian):
    '''
    Two-mode (SU(2)) restriction of :class:`TripleWellHamiltonian` to
    ``w1 = w2 = v/√2``, ``w̄1 = w̄2 = v̄/√2``
    '''

    def tunneling_numerator(self, wbar, w):
        v, = w
        b, = wbar
        return (
            b * v + SQRT2 * (b + v),
            np.array([b + SQRT2]),
            np.array([v + SQRT2]),
            np.ones((1, 1), dtype=complex),
            np.zeros((1, 1), dtype=complex),
            np.zeros((1, 1), dtype=complex),
        )

    def collision_numerator(self, wbar, w):
        v, = w
        b, = wbar
        return (
            0.5 * (b * v) ** 2 + 1.0,
            np.array([b * b * v]),
            np.array([b * v * v]),
            np.array([[2.0 * b * v]]),
            np.array([[v * v]]),
            np.array([[b * b]]),
        )


def su3_hamiltonian(params):
    '''
    Effective classical Hamiltonian of the triple well
    '''
    if params.n != 3:
        raise ModelError('The SU(3) Hamiltonian needs n=3, got n={0}'.format(params.n))
    return TripleWellHamiltonian(params)


def su2_hamiltonian(params):
    '''
    Effective classical Hamiltonian of the triple well restricted to the
    invariant subspace ``w1 = w2``, in the variable ``v = √2 w1``
    '''
    if params.n != 2:
        raise ModelError('The SU(2) Hamiltonian needs n=2, got n={0}'.format(params.n))
    return ReducedTripleWellHamiltonian(params)


def hamiltonian_for(params):
    '''
    The effective Hamiltonian matching ``params.n``
    '''
    if params.n == 3:
        return su3_hamiltonian(params)
    return su2_hamiltonian(params)
# <---- Effective Hamiltonians -----------------------------------------------------------------------------------


# ----- Flow ---------------------------------------------------------------------------------------------------->
class FlowTerms(object):
    '''
    Everything the augmented ODE needs at one doubled phase space point,
    computed from a single :meth:`ClassicalHamiltonianModel.derivatives`
    call.
    '''

    __slots__ = ('derivatives', 's', 'w_dot', 'wbar_dot', 'f_w', 'f_wbar',
                 'fbar_w', 'fbar_wbar')

    def __init__(self, model, state, singular_eps=SINGULAR_EPS):
        w, wbar = state.w, state.wbar
        s = 1.0 + np.dot(wbar, w)
        if abs(s) < singular_eps:
            raise SingularityError('|1 + w̄w| = {0:.3e} below {1:.1e}'.format(abs(s), singular_eps))
        der = model.derivatives(wbar, w)
        inv_n = 1.0 / model.N
        h_w, h_wbar = der.d_w, der.d_wbar
        a_mat, b_mat, c_mat = der.d_wbar_w, der.d_wbar_wbar, der.d_w_w
        g = np.dot(wbar, h_wbar)
        gbar = np.dot(w, h_w)
        u = h_wbar + w * g
        ubar = h_w + wbar * gbar
        # f = ξ ∂𝓗/∂w̄ and f̄ = ξ̄ ∂𝓗/∂w
        f = inv_n * s * u
        fbar = inv_n * s * ubar
        eye = np.eye(len(w))
        self.derivatives = der
        self.s = s
        self.w_dot = -1j * f
        self.wbar_dot = 1j * fbar
        self.f_w = inv_n * (np.outer(u, wbar)
                            + s * (a_mat + g * eye + np.outer(w, a_mat.T.dot(wbar))))
        self.f_wbar = inv_n * (np.outer(u, w)
                               + s * (b_mat + np.outer(w, h_wbar + b_mat.dot(wbar))))
        self.fbar_wbar = inv_n * (np.outer(ubar, w)
                                  + s * (a_mat.T + gbar * eye + np.outer(wbar, a_mat.dot(w))))
        self.fbar_w = inv_n * (np.outer(ubar, wbar)
                               + s * (c_mat + np.outer(wbar, h_w + c_mat.dot(w))))

    @property
    def linearization(self):
        return np.block([
            [-1j * self.f_w, -1j * self.f_wbar],
            [1j * self.fbar_w, 1j * self.fbar_wbar],
        ])

    @property
    def correction(self):
        return 0.25 * (np.trace(self.fbar_wbar) + np.trace(self.f_w))


def eom_rhs(model, state, singular_eps=SINGULAR_EPS):
    '''
    Time derivative ``(ẇ, ẇ̄)`` of a doubled phase space point

    :raises SingularityError: when ``|1 + w̄w| < singular_eps``
    '''
    terms = FlowTerms(model, state, singular_eps)
    return terms.w_dot, terms.wbar_dot


def linearization_matrix(model, state, singular_eps=SINGULAR_EPS):
    '''
    The ``2(n-1) x 2(n-1)`` matrix ``ℝ`` of the tangent flow
    ``d(δw, δw̄)/dt = ℝ (δw, δw̄)``
    '''
    return FlowTerms(model, state, singular_eps).linearization


def invariant_subspace_residual(state, subspace):
    '''
    Distance of a three-mode doubled state from one of the classical
    invariant subspaces ``'w1=w2'``, ``'w1=1'`` or ``'w2=1'`` (the latter two
    fixing ``w_j = w̄_j = 1``).
    '''
    w, wbar = state.w, state.wbar
    if len(w) != 2:
        raise ModelError('Invariant subspaces are defined for the three-mode model')
    if subspace == 'w1=w2':
        return max(abs(w[0] - w[1]), abs(wbar[0] - wbar[1]))
    if subspace in ('w1=1', 'w2=1'):
        j = 0 if subspace == 'w1=1' else 1
        return max(abs(w[j] - 1.0), abs(wbar[j] - 1.0))
    raise ModelError('Unknown invariant subspace {0!r}'.format(subspace))
# <---- Flow -----------------------------------------------------------------------------------------------------

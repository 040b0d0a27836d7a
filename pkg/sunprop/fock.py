# -*- coding: utf-8 -*-
'''
    sunprop.fock
    ~~~~~~~~~~~~

    Number basis bookkeeping for ``N`` bosons in ``n`` modes, the quantum
    triple-well Hamiltonian as a dense matrix, exact propagation by
    eigendecomposition and the rotation between the well modes ``a_j`` and
    the symmetric modes

    .. code-block:: text

        b1† = (a1† + a2†)/√2,   b2† = a3†,   b3† = (a1† - a2†)/√2

    Three-mode vectors are tagged ``'a'`` (well modes) or ``'b'``. Two-mode
    vectors always describe the reduced model and are tagged ``'b'``, their
    modes being ``(b1, b2)``.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import math
import logging
import functools

# Import 3rd-party libs
import numpy as np
import scipy.linalg
from scipy.special import comb, gammaln

# Import sunprop libs
from sunprop.exceptions import (
    BasisMismatchError,
    DimensionCapError,
    ModelError,
    NonHermitianError,
    UnknownObservableError,
    ZeroNormError,
)

log = logging.getLogger(__name__)

DEFAULT_DIMENSION_CAP = 20000

HERMITIAN_ATOL = 1e-12

OBSERVABLES = ('sz', 'nb3', 'n1', 'n2', 'n3')


def basis_dimension(n, N):
    '''
    ``(N+n-1)! / (N! (n-1)!)``
    '''
    return math.comb(N + n - 1, n - 1)


def default_modes(n):
    return 'b' if n == 2 else 'a'


def _compositions(n, N):
    if n == 1:
        return [(N,)]
    states = []
    for first in range(N, -1, -1):
        for rest in _compositions(n - 1, N - first):
            states.append((first,) + rest)
    return states


class FockBasis(object):
    '''
    Ordered list of the occupation tuples ``(m_1, ..., m_n)`` with
    ``sum(m) == N``, in descending lexicographic order.

    Behaves like a read-only sequence of tuples. ``occupations`` holds the
    same data as an integer array of shape ``(dim, n)``.
    '''

    def __init__(self, n, N, states):
        self.n = n
        self.N = N
        self._states = tuple(states)
        self._index = {state: idx for idx, state in enumerate(self._states)}
        self.occupations = np.array(self._states, dtype=int).reshape(len(self._states), n)
        self.occupations.setflags(write=False)

    def __len__(self):
        return len(self._states)

    def __iter__(self):
        return iter(self._states)

    def __getitem__(self, idx):
        return self._states[idx]

    def __eq__(self, other):
        if not isinstance(other, FockBasis):
            return NotImplemented
        return (self.n, self.N) == (other.n, other.N)

    def __hash__(self):
        return hash((self.n, self.N))

    def __reduce__(self):
        return (enumerate_basis, (self.n, self.N, max(len(self), DEFAULT_DIMENSION_CAP)))

    def __repr__(self):
        return 'FockBasis(n={0}, N={1}, dim={2})'.format(self.n, self.N, len(self))

    def index(self, occupation):
        return self._index[tuple(occupation)]

    @property
    def log_multinomials(self):
        '''
        ``ln(N! / (m_1! ... m_n!))`` for every basis state
        '''
        return _log_multinomials(self.n, self.N)


@functools.lru_cache(maxsize=None)
def _log_multinomials(n, N):
    occ = enumerate_basis(n, N).occupations
    values = gammaln(N + 1) - gammaln(occ + 1).sum(axis=1)
    values.setflags(write=False)
    return values


@functools.lru_cache(maxsize=32)
def _cached_basis(n, N):
    return FockBasis(n, N, _compositions(n, N))


def enumerate_basis(n, N, cap=DEFAULT_DIMENSION_CAP):
    '''
    Enumerate the number basis of ``N`` bosons in ``n`` modes

    :raises DimensionCapError: when the basis would hold more than ``cap``
                               states
    '''
    if n < 2 or N < 1:
        raise ModelError('Need n >= 2 and N >= 1, got n={0}, N={1}'.format(n, N))
    dim = basis_dimension(n, N)
    if dim > cap:
        raise DimensionCapError(
            'The basis for n={0}, N={1} holds {2} states, above the cap of {3}. '
            'Use a smaller N or n.'.format(n, N, dim, cap)
        )
    return _cached_basis(n, N)


class FockVector(object):
    '''
    Complex amplitudes over a :class:`FockBasis`, tagged with the mode set
    they refer to
    '''

    __slots__ = ('amplitudes', 'basis', 'modes')

    def __init__(self, amplitudes, basis, modes=None):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (len(basis),):
            raise BasisMismatchError(
                'Expected {0} amplitudes, got shape {1}'.format(len(basis), amplitudes.shape)
            )
        if modes is None:
            modes = default_modes(basis.n)
        if modes not in ('a', 'b') or (basis.n == 2 and modes != 'b'):
            raise BasisMismatchError('Invalid mode tag {0!r} for n={1}'.format(modes, basis.n))
        self.amplitudes = amplitudes
        self.basis = basis
        self.modes = modes

    def __repr__(self):
        return 'FockVector(basis={0!r}, modes={1!r})'.format(self.basis, self.modes)

    @property
    def n(self):
        return self.basis.n

    @property
    def N(self):
        return self.basis.N

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self):
        norm = self.norm()
        if norm == 0.0 or not math.isfinite(norm):
            raise ZeroNormError('Cannot normalize a vector of norm {0!r}'.format(norm))
        return FockVector(self.amplitudes / norm, self.basis, self.modes)

    def inner(self, other):
        '''
        ``<self|other>``
        '''
        self._check_compatible(other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other):
        '''
        ``|<self|other>|²`` of the normalized vectors
        '''
        return abs(self.normalize().inner(other.normalize())) ** 2

    def _check_compatible(self, other):
        if self.basis != other.basis or self.modes != other.modes:
            raise BasisMismatchError(
                'Vectors live in different spaces: {0!r} vs {1!r}'.format(self, other)
            )


# ----- Operators ----------------------------------------------------------------------------------------------->
def number_operator(basis, j):
    '''
    Diagonal of ``a_j† a_j``
    '''
    return basis.occupations[:, j].astype(float)


def hopping_operator(basis, j, k):
    '''
    Dense matrix of ``a_j† a_k`` for ``j != k``
    '''
    dim = len(basis)
    matrix = np.zeros((dim, dim))
    for col, state in enumerate(basis):
        if state[k] == 0:
            continue
        target = list(state)
        target[k] -= 1
        target[j] += 1
        row = basis.index(target)
        matrix[row, col] = math.sqrt(state[k] * (state[j] + 1))
    return matrix


def pair_operator(basis, j):
    '''
    Diagonal of ``(a_j†)² a_j²``
    '''
    occ = basis.occupations[:, j].astype(float)
    return occ * (occ - 1.0)


class HamiltonianMatrix(object):
    '''
    Dense Hermitian matrix over a number basis. The eigendecomposition is
    computed on first use and kept.
    '''

    def __init__(self, matrix, basis, params=None, modes=None):
        self.matrix = np.asarray(matrix, dtype=complex)
        self.basis = basis
        self.params = params
        self.modes = modes or default_modes(basis.n)
        self._eigensystem = None

    def __repr__(self):
        return 'HamiltonianMatrix({0!r}, params={1!r})'.format(self.basis, self.params)

    def is_hermitian(self, atol=HERMITIAN_ATOL):
        scale = max(1.0, float(np.abs(self.matrix).max(initial=0.0)))
        return bool(np.allclose(self.matrix, self.matrix.conj().T, rtol=0.0, atol=atol * scale))

    @property
    def eigensystem(self):
        if self._eigensystem is None:
            if not self.is_hermitian():
                raise NonHermitianError('Matrix is not Hermitian to {0}'.format(HERMITIAN_ATOL))
            self._eigensystem = scipy.linalg.eigh(self.matrix)
        return self._eigensystem

    def energy(self, psi):
        '''
        ``<psi|H|psi>`` for a normalized ``psi``
        '''
        return float(np.real(np.vdot(psi.amplitudes, self.matrix.dot(psi.amplitudes))))


def build_hamiltonian(params, basis=None):
    '''
    Quantum Hamiltonian of the triple well

    For ``n=3``::

        H = Ω Σ_{j≠k} a_j† a_k + χ/(N-1) Σ_j (a_j†)² a_j²

    For ``n=2`` the same Hamiltonian projected onto the states without
    ``b3`` particles, in the modes ``(b1, b2)``::

        H = Ω [b1†b1 + √2 (b1†b2 + b2†b1)] + χ/(N-1) [(b1†)² b1²/2 + (b2†)² b2²]

    This is the quantum model whose effective classical Hamiltonian is
    :func:`sunprop.model.su2_hamiltonian`.
    '''
    if basis is None:
        basis = enumerate_basis(params.n, params.N)
    if (basis.n, basis.N) != (params.n, params.N):
        raise BasisMismatchError('Basis {0!r} does not match {1!r}'.format(basis, params))
    if params.chi != 0 and params.N < 2:
        raise ModelError('The collision term divides by N-1; N=1 needs chi=0')

    dim = len(basis)
    matrix = np.zeros((dim, dim))
    collision = params.chi / (params.N - 1) if params.chi != 0 else 0.0
    if params.n == 3:
        for j in range(3):
            for k in range(3):
                if j != k:
                    matrix += params.omega * hopping_operator(basis, j, k)
        diagonal = collision * sum(pair_operator(basis, j) for j in range(3))
    else:
        matrix += params.omega * math.sqrt(2.0) * (
            hopping_operator(basis, 0, 1) + hopping_operator(basis, 1, 0)
        )
        diagonal = (params.omega * number_operator(basis, 0)
                    + collision * (0.5 * pair_operator(basis, 0) + pair_operator(basis, 1)))
    matrix[np.diag_indices(dim)] += diagonal
    log.debug('Built the %dx%d Hamiltonian for %r', dim, dim, params)
    return HamiltonianMatrix(matrix, basis, params)
# <---- Operators ------------------------------------------------------------------------------------------------


def evolve_exact(psi0, hamiltonian, times):
    '''
    ``e^{-iHt} psi0`` at every requested time

    :raises NonHermitianError: if ``hamiltonian`` is not Hermitian
    '''
    if psi0.basis != hamiltonian.basis or psi0.modes != hamiltonian.modes:
        raise BasisMismatchError('State and Hamiltonian live in different spaces')
    energies, vectors = hamiltonian.eigensystem
    coefficients = vectors.conj().T.dot(psi0.amplitudes)
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.outer(times, energies))
    amplitudes = (phases * coefficients).dot(vectors.T)
    return [FockVector(row, psi0.basis, psi0.modes) for row in amplitudes]


# ----- Mode Rotation ------------------------------------------------------------------------------------------->
@functools.lru_cache(maxsize=8)
def rotation_matrix(N):
    '''
    Real orthogonal matrix taking three-mode ``a`` amplitudes to ``b``
    amplitudes, ``psi_b = T psi_a``. Column ``m`` expands

    .. code-block:: text

        (a1†)^m1 (a2†)^m2 (a3†)^m3 / sqrt(m!)
            = 2^{-(m1+m2)/2} Σ_{p,q} C(m1,p) C(m2,q) (-1)^{m2-q}
              (b1†)^{p+q} (b2†)^m3 (b3†)^{m1+m2-p-q} / sqrt(m!)
    '''
    basis = enumerate_basis(3, N)
    dim = len(basis)
    log_fact = gammaln(np.arange(N + 1) + 1.0)
    matrix = np.zeros((dim, dim))
    for col, (m1, m2, m3) in enumerate(basis):
        log_m = log_fact[m1] + log_fact[m2] + log_fact[m3]
        for p in range(m1 + 1):
            for q in range(m2 + 1):
                k1 = p + q
                k3 = m1 + m2 - k1
                row = basis.index((k1, m3, k3))
                log_ratio = 0.5 * (log_fact[k1] + log_fact[m3] + log_fact[k3] - log_m)
                sign = -1.0 if (m2 - q) % 2 else 1.0
                matrix[row, col] += (sign * comb(m1, p) * comb(m2, q)
                                     * math.exp(log_ratio - 0.5 * (m1 + m2) * math.log(2.0)))
    matrix.setflags(write=False)
    log.debug('Built the %dx%d mode rotation for N=%d', dim, dim, N)
    return matrix


def rotate_modes(psi, direction='forward'):
    '''
    Re-express a three-mode vector in the ``b`` modes (``'forward'``) or
    back in the ``a`` modes (``'inverse'``)
    '''
    if psi.n != 3:
        raise BasisMismatchError('Mode rotation is defined for three modes only')
    if direction == 'forward':
        if psi.modes != 'a':
            raise BasisMismatchError('Forward rotation expects an a-mode vector')
        return FockVector(rotation_matrix(psi.N).dot(psi.amplitudes), psi.basis, 'b')
    if direction == 'inverse':
        if psi.modes != 'b':
            raise BasisMismatchError('Inverse rotation expects a b-mode vector')
        return FockVector(rotation_matrix(psi.N).T.dot(psi.amplitudes), psi.basis, 'a')
    raise ValueError('direction must be \'forward\' or \'inverse\', not {0!r}'.format(direction))


def project_two_mode(psi):
    '''
    Component of a three-mode vector on the ``b3`` vacuum, as a two-mode
    ``b`` vector. The result is not normalized.
    '''
    if psi.n != 3:
        raise BasisMismatchError('Only three-mode vectors can be projected on two modes')
    if psi.modes == 'a':
        psi = rotate_modes(psi, 'forward')
    basis = enumerate_basis(2, psi.N)
    rows = [psi.basis.index((m1, m2, 0)) for m1, m2 in basis]
    return FockVector(psi.amplitudes[rows], basis, 'b')
# <---- Mode Rotation --------------------------------------------------------------------------------------------


def expectation(psi, observable):
    '''
    Expectation value of a named observable in a normalized vector

    ``'sz'``
        population imbalance ``<b1†b1 - b2†b2>/N``, i.e. ``<S_z>/S`` with
        ``S = N/2``
    ``'nb3'``
        ``<b3†b3>`` (three modes only)
    ``'n1'``, ``'n2'``, ``'n3'``
        occupation of a mode of the vector's own mode set

    Three-mode ``a`` vectors are rotated first for the ``b`` observables.
    '''
    if observable not in OBSERVABLES:
        raise UnknownObservableError('Unknown observable {0!r}'.format(observable))
    if observable in ('n1', 'n2', 'n3'):
        j = int(observable[1]) - 1
        if j >= psi.n:
            raise UnknownObservableError('{0!r} needs {1} modes'.format(observable, j + 1))
        return _diagonal_mean(psi, number_operator(psi.basis, j))
    if observable == 'nb3' and psi.n != 3:
        raise UnknownObservableError('\'nb3\' needs three modes')
    if psi.modes == 'a':
        psi = rotate_modes(psi, 'forward')
    if observable == 'nb3':
        return _diagonal_mean(psi, number_operator(psi.basis, 2))
    imbalance = number_operator(psi.basis, 0) - number_operator(psi.basis, 1)
    return _diagonal_mean(psi, imbalance) / psi.N


def _diagonal_mean(psi, diagonal):
    probabilities = np.abs(psi.amplitudes) ** 2
    return float(np.dot(probabilities, diagonal))

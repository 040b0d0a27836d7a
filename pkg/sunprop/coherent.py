# -*- coding: utf-8 -*-
'''
    sunprop.coherent
    ~~~~~~~~~~~~~~~~

    SU(n) coherent states of ``N`` bosons

    .. code-block:: text

        |w> = (1 + w*w)^{-N/2} Σ_m sqrt(N!/(m_1!...m_n!)) w_1^{m_1} ... w_{n-1}^{m_{n-1}} |m>

    labelled by ``n-1`` complex numbers ``w``. This module covers
    amplitudes, overlaps, the integration measure of the identity
    resolution, Husimi (Q) representations on box and sphere grids and the
    coherent-state symbols of one-body observables.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import math
import logging

# Import 3rd-party libs
import numpy as np

# Import sunprop libs
from sunprop import fock
from sunprop.exceptions import (
    ModelError,
    UnknownObservableError,
    ZeroNormError,
)

log = logging.getLogger(__name__)

#: grid points evaluated per block in :func:`q_function`
CHUNK_SIZE = 4096


def as_phase_vector(w, n):
    '''
    Validate a coherent-state label of ``n-1`` finite complex entries
    '''
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if w.shape != (n - 1,):
        raise ModelError('Expected {0} coherent-state coordinates, got {1}'.format(n - 1, w.shape))
    if not np.all(np.isfinite(w)):
        raise ModelError('Coherent-state coordinates must be finite')
    return w


def unit_coordinates(w):
    '''
    ``(w_1, ..., w_{n-1}, 1) / sqrt(1 + |w|²)`` along the last axis. Works
    on stacks of labels of shape ``(..., n-1)``.
    '''
    w = np.asarray(w, dtype=complex)
    norm = np.sqrt(1.0 + np.sum(np.abs(w) ** 2, axis=-1))[..., np.newaxis]
    ones = np.ones(w.shape[:-1] + (1,), dtype=complex)
    return np.concatenate([w, ones], axis=-1) / norm


def power_products(u, basis):
    '''
    ``Π_j u_j^{m_j}`` for every basis state and every row of ``u``

    :param u: array of shape ``(..., n)``
    :returns: array of shape ``(..., dim)``
    '''
    u = np.asarray(u, dtype=complex)
    N = basis.N
    # powers[..., j, k] = u_j ** k
    powers = np.ones(u.shape + (N + 1,), dtype=complex)
    for k in range(1, N + 1):
        powers[..., k] = powers[..., k - 1] * u
    occ = basis.occupations
    result = np.ones(u.shape[:-1] + (len(basis),), dtype=complex)
    for j in range(basis.n):
        result *= powers[..., j, occ[:, j]]
    return result


def coherent_amplitudes(w, n, N, modes=None):
    '''
    Number-basis amplitudes of the coherent state ``|w>``
    '''
    w = as_phase_vector(w, n)
    basis = fock.enumerate_basis(n, N)
    sqrt_multinomial = np.exp(0.5 * basis.log_multinomials)
    amplitudes = sqrt_multinomial * power_products(unit_coordinates(w), basis)
    return fock.FockVector(amplitudes, basis, modes)


def overlap(wp, w, N):
    '''
    ``<wp|w> = (1 + wp*w)^N / [(1 + |wp|²)^{N/2} (1 + |w|²)^{N/2}]``
    '''
    wp = np.atleast_1d(np.asarray(wp, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    numerator = 1.0 + np.vdot(wp, w)
    log_value = (N * np.log(numerator)
                 - 0.5 * N * math.log1p(float(np.vdot(wp, wp).real))
                 - 0.5 * N * math.log1p(float(np.vdot(w, w).real)))
    return complex(np.exp(log_value))


def measure_sigma(n):
    '''
    ``σ(n) = (n-1)! / π^{n-1}``
    '''
    return math.factorial(n - 1) / math.pi ** (n - 1)


def measure_weight(w, n, N):
    '''
    Density of the identity resolution ``σ(n) dim / (1 + |w|²)^n`` with
    respect to ``Π_j d²w_j``. Accepts a single label or a stack of shape
    ``(..., n-1)``.
    '''
    w = np.asarray(w, dtype=complex)
    norm2 = np.sum(np.abs(w) ** 2, axis=-1)
    return measure_sigma(n) * fock.basis_dimension(n, N) / (1.0 + norm2) ** n


# ----- Q Representation ---------------------------------------------------------------------------------------->
class BoxGrid(object):
    '''
    Uniform midpoint grid in ``(Re w_j, Im w_j)`` over the box
    ``center ± half_width`` in every real coordinate
    '''

    kind = 'box'

    def __init__(self, center, half_width, points):
        self.center = np.atleast_1d(np.asarray(center, dtype=complex))
        self.half_width = float(half_width)
        self.points = int(points)
        if self.points < 1 or self.half_width <= 0:
            raise ValueError('A box grid needs points >= 1 and half_width > 0')

    @property
    def spacing(self):
        return 2.0 * self.half_width / self.points

    def labels(self):
        '''
        Grid labels of shape ``(points**(2d), d)``, last real axis fastest
        '''
        d = len(self.center)
        offsets = -self.half_width + (np.arange(self.points) + 0.5) * self.spacing
        axes = np.meshgrid(*([offsets] * (2 * d)), indexing='ij')
        flat = [axis.ravel() for axis in axes]
        labels = np.empty((len(flat[0]), d), dtype=complex)
        for j in range(d):
            labels[:, j] = self.center[j] + flat[2 * j] + 1j * flat[2 * j + 1]
        return labels

    def weights(self, labels, n, N):
        cell = self.spacing ** (2 * (n - 1))
        return cell * measure_weight(labels, n, N)

    def coordinates(self, labels):
        columns = []
        for j in range(labels.shape[1]):
            columns.extend([labels[:, j].real, labels[:, j].imag])
        return np.column_stack(columns)

    def header(self, n):
        names = []
        for j in range(1, n):
            names.extend(['re_w{0}'.format(j), 'im_w{0}'.format(j)])
        return names


class SphereGrid(object):
    '''
    Uniform ``(θ, φ)`` grid of two-mode labels ``v = e^{-iφ} tan(θ/2)``.
    ``θ`` samples cell midpoints of ``(0, π)``, ``φ`` the periodic lattice
    of ``[0, 2π)``. The measure becomes ``(N+1)/(4π) sinθ dθ dφ``.
    '''

    kind = 'sphere'

    def __init__(self, n_theta, n_phi):
        self.n_theta = int(n_theta)
        self.n_phi = int(n_phi)
        if self.n_theta < 2 or self.n_phi < 2:
            raise ValueError('A sphere grid needs at least 2 points per angle')

    @property
    def thetas(self):
        return (np.arange(self.n_theta) + 0.5) * math.pi / self.n_theta

    @property
    def phis(self):
        return np.arange(self.n_phi) * 2.0 * math.pi / self.n_phi

    def angles(self):
        theta, phi = np.meshgrid(self.thetas, self.phis, indexing='ij')
        return theta.ravel(), phi.ravel()

    def labels(self):
        theta, phi = self.angles()
        return (np.exp(-1j * phi) * np.tan(0.5 * theta))[:, np.newaxis]

    def weights(self, labels, n, N):
        if n != 2:
            raise ModelError('Sphere grids describe two-mode states only')
        theta, _ = self.angles()
        cell = (math.pi / self.n_theta) * (2.0 * math.pi / self.n_phi)
        return (N + 1) / (4.0 * math.pi) * np.sin(theta) * cell

    def coordinates(self, labels):
        theta, phi = self.angles()
        return np.column_stack([theta, phi])

    def header(self, n):
        return ['theta', 'phi']


class QGrid(object):
    '''
    Husimi function sampled on a grid, normalized so that the quadrature
    ``Σ weights * values`` is one. ``integral`` keeps the quadrature of the
    raw ``|<w|psi>|²`` before that rescaling.
    '''

    def __init__(self, grid, n, N, labels, weights, values, integral):
        self.grid = grid
        self.n = n
        self.N = N
        self.labels = labels
        self.weights = weights
        self.values = values
        self.integral = integral

    @property
    def kind(self):
        return self.grid.kind

    def columns(self):
        '''
        Column names and data rows for CSV output
        '''
        header = self.grid.header(self.n) + ['Q']
        data = np.column_stack([self.grid.coordinates(self.labels), self.values])
        return header, data


def q_function(psi, grid):
    '''
    ``Q(w) = |<w|psi>|²`` on ``grid``, rescaled to unit quadrature

    :raises ZeroNormError: for an all-zero ``psi``
    '''
    if not np.any(psi.amplitudes):
        raise ZeroNormError('The Q function of the zero vector is undefined')
    if psi.n == 3 and psi.modes != 'a':
        psi = fock.rotate_modes(psi, 'inverse')
    basis = psi.basis
    labels = grid.labels()
    weights = grid.weights(labels, psi.n, psi.N)
    sqrt_multinomial = np.exp(0.5 * basis.log_multinomials)
    weighted_psi = sqrt_multinomial * psi.amplitudes
    values = np.empty(len(labels))
    for start in range(0, len(labels), CHUNK_SIZE):
        block = labels[start:start + CHUNK_SIZE]
        # <w|psi> = Σ_m conj(amplitude_m(w)) psi_m
        products = power_products(unit_coordinates(block), basis)
        values[start:start + CHUNK_SIZE] = np.abs(products.conj().dot(weighted_psi)) ** 2
    integral = float(np.dot(weights, values))
    log.debug('Q function on a %s grid of %d points integrates to %.6f',
              grid.kind, len(labels), integral)
    return QGrid(grid, psi.n, psi.N, labels, weights, values / integral, integral)


def sphere_embedding(qgrid):
    '''
    Radial plot of a two-mode Q function on the unit sphere::

        x = (Q+1) sinθ cosφ,  y = (Q+1) sinθ sinφ,  z = -(Q+1) cosθ
    '''
    if qgrid.n != 2 or qgrid.kind != 'sphere':
        raise ModelError('The sphere embedding needs a two-mode Q function on a sphere grid')
    theta, phi = qgrid.grid.angles()
    radius = qgrid.values + 1.0
    return np.column_stack([
        radius * np.sin(theta) * np.cos(phi),
        radius * np.sin(theta) * np.sin(phi),
        -radius * np.cos(theta),
    ])


def angular_distance(theta1, phi1, theta2, phi2):
    '''
    Great-circle distance between two points of the unit sphere
    '''
    cosine = (math.cos(theta1) * math.cos(theta2)
              + math.sin(theta1) * math.sin(theta2) * math.cos(phi1 - phi2))
    return math.acos(min(1.0, max(-1.0, cosine)))


def sphere_peaks(qgrid, min_ratio=0.1):
    '''
    Local maxima ``(θ, φ, Q)`` of a sphere-grid Q function, strongest first.
    ``φ`` wraps around; maxima below ``min_ratio`` times the global maximum
    are ignored.
    '''
    if qgrid.kind != 'sphere':
        raise ModelError('Peaks are searched on sphere grids')
    grid = qgrid.grid
    values = qgrid.values.reshape(grid.n_theta, grid.n_phi)
    padded = np.pad(values, ((1, 1), (0, 0)), mode='constant', constant_values=-np.inf)
    is_peak = np.ones_like(values, dtype=bool)
    for dtheta in (-1, 0, 1):
        for dphi in (-1, 0, 1):
            if dtheta == dphi == 0:
                continue
            shifted = np.roll(padded, dphi, axis=1)[1 + dtheta:1 + dtheta + grid.n_theta]
            is_peak &= values > shifted
    threshold = min_ratio * values.max()
    peaks = []
    for i, k in zip(*np.nonzero(is_peak & (values >= threshold))):
        peaks.append((float(grid.thetas[i]), float(grid.phis[k]), float(values[i, k])))
    peaks.sort(key=lambda peak: -peak[2])
    return peaks
# <---- Q Representation -----------------------------------------------------------------------------------------


# ----- Symbols ------------------------------------------------------------------------------------------------->
def _one_body_weights(observable, n):
    '''
    ``(matrix c, trace t)`` with ``observable = Σ_jk c_jk a_j† a_k`` in the
    label's own modes (``a`` for three modes, ``b`` for two). ``t`` is
    ``Tr c``.
    '''
    if observable not in fock.OBSERVABLES:
        raise UnknownObservableError('Unknown observable {0!r}'.format(observable))
    c = np.zeros((n, n))
    if observable in ('n1', 'n2', 'n3'):
        j = int(observable[1]) - 1
        if j >= n:
            raise UnknownObservableError('{0!r} needs {1} modes'.format(observable, j + 1))
        c[j, j] = 1.0
    elif n == 2:
        if observable == 'nb3':
            raise UnknownObservableError('\'nb3\' needs three modes')
        c[0, 0], c[1, 1] = 1.0, -1.0
    elif observable == 'nb3':
        # b3†b3 = (a1† - a2†)(a1 - a2)/2
        c[:2, :2] = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    else:
        # b1†b1 - b2†b2 = (a1† + a2†)(a1 + a2)/2 - a3†a3
        c[:2, :2] = 0.5
        c[2, 2] = -1.0
    return c, float(np.trace(c))


def _symbol_scale(observable, N):
    return 1.0 / N if observable == 'sz' else 1.0


def normal_symbol(observable, w, n, N):
    '''
    ``<w|O|w>`` of a one-body observable, with ``'sz'`` normalized by ``S``
    as in :func:`sunprop.fock.expectation`. Accepts stacks of labels.
    '''
    c, _ = _one_body_weights(observable, n)
    u = unit_coordinates(w)
    value = N * np.einsum('...j,jk,...k->...', u.conj(), c, u).real
    return value * _symbol_scale(observable, N)


def antinormal_symbol(observable, w, n, N):
    '''
    Symbol ``O_a`` with ``<O> = ∫ dμ Q O_a`` for one-body observables::

        (a_j† a_k)_a = (N + n) conj(u_j) u_k - δ_jk
    '''
    c, trace = _one_body_weights(observable, n)
    u = unit_coordinates(w)
    value = (N + n) * np.einsum('...j,jk,...k->...', u.conj(), c, u).real - trace
    return value * _symbol_scale(observable, N)


def q_mean(qgrid, observable):
    '''
    Mean of a one-body observable from a Q function by quadrature
    '''
    symbol = antinormal_symbol(observable, qgrid.labels, qgrid.n, qgrid.N)
    return float(np.sum(qgrid.weights * qgrid.values * symbol))
# <---- Symbols --------------------------------------------------------------------------------------------------


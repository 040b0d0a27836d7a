# -*- coding: utf-8 -*-
'''
    tests.unit.test_fock
    ~~~~~~~~~~~~~~~~~~~~

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import math
import pickle

# Import 3rd-party libs
import numpy as np

# Import sunprop libs
from sunprop import fock, coherent
from sunprop.model import SQRT2, ModelParams
from sunprop.testing import TestCase
from sunprop.exceptions import (
    BasisMismatchError,
    DimensionCapError,
    ModelError,
    NonHermitianError,
    UnknownObservableError,
    ZeroNormError,
)

TAN_PI_8 = math.tan(math.pi / 8)


class BasisTestCase(TestCase):

    def test_dimension(self):
        self.assertEqual(fock.basis_dimension(2, 30), 31)
        self.assertEqual(fock.basis_dimension(3, 30), 496)
        self.assertEqual(len(fock.enumerate_basis(3, 30)), 496)

    def test_descending_order(self):
        basis = fock.enumerate_basis(3, 2)
        self.assertEqual(
            list(basis),
            [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
        )
        self.assertEqual(basis.index((0, 1, 1)), 4)

    def test_occupations_sum_to_n(self):
        basis = fock.enumerate_basis(3, 7)
        self.assertTrue(np.all(basis.occupations.sum(axis=1) == 7))
        self.assertFalse(basis.occupations.flags.writeable)

    def test_dimension_cap(self):
        with self.assertRaises(DimensionCapError):
            fock.enumerate_basis(3, 300, cap=1000)

    def test_invalid_sizes(self):
        with self.assertRaises(ModelError):
            fock.enumerate_basis(1, 5)
        with self.assertRaises(ModelError):
            fock.enumerate_basis(2, 0)

    def test_log_multinomials(self):
        basis = fock.enumerate_basis(3, 4)
        idx = basis.index((2, 1, 1))
        self.assertAlmostEqual(math.exp(basis.log_multinomials[idx]), 12.0, places=9)

    def test_pickles(self):
        basis = fock.enumerate_basis(2, 5)
        self.assertEqual(pickle.loads(pickle.dumps(basis)), basis)


class FockVectorTestCase(TestCase):

    def test_normalize(self):
        basis = fock.enumerate_basis(2, 3)
        psi = fock.FockVector([3.0, 0.0, 4.0j, 0.0], basis).normalize()
        self.assertAlmostEqual(psi.norm(), 1.0, places=12)

    def test_zero_norm(self):
        basis = fock.enumerate_basis(2, 3)
        with self.assertRaises(ZeroNormError):
            fock.FockVector(np.zeros(4), basis).normalize()

    def test_wrong_length(self):
        with self.assertRaises(BasisMismatchError):
            fock.FockVector(np.zeros(3), fock.enumerate_basis(2, 3))

    def test_two_modes_are_b_modes(self):
        with self.assertRaises(BasisMismatchError):
            fock.FockVector(np.ones(4), fock.enumerate_basis(2, 3), 'a')

    def test_incompatible_inner(self):
        psi = fock.FockVector(np.ones(4), fock.enumerate_basis(2, 3))
        phi = fock.FockVector(np.ones(5), fock.enumerate_basis(2, 4))
        with self.assertRaises(BasisMismatchError):
            psi.inner(phi)


class HamiltonianTestCase(TestCase):

    def test_hermitian(self):
        for params in (ModelParams(3, 10, -1.0, -1.0), ModelParams(2, 10, -1.0, -8.0)):
            self.assertTrue(fock.build_hamiltonian(params).is_hermitian())

    def test_collision_diagonal(self):
        hamiltonian = fock.build_hamiltonian(ModelParams(3, 2, -1.0, -3.0))
        idx = hamiltonian.basis.index((2, 0, 0))
        self.assertAlmostEqual(hamiltonian.matrix[idx, idx].real, 2.0 * -3.0, places=12)
        self.assertAlmostEqual(hamiltonian.matrix[idx, hamiltonian.basis.index((1, 1, 0))].real,
                               -1.0 * math.sqrt(2.0), places=12)

    def test_spectrum_survives_mode_rotation(self):
        hamiltonian = fock.build_hamiltonian(ModelParams(3, 6, -1.0, -2.0))
        rotation = fock.rotation_matrix(6)
        rotated = rotation.dot(hamiltonian.matrix).dot(rotation.T)
        self.assertArrayClose(np.linalg.eigvalsh(rotated), hamiltonian.eigensystem[0], atol=1e-10)

    def test_non_hermitian_rejected(self):
        basis = fock.enumerate_basis(2, 1)
        matrix = fock.HamiltonianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), basis)
        with self.assertRaises(NonHermitianError):
            matrix.eigensystem

    def test_single_particle_needs_linear_model(self):
        with self.assertRaises(ModelError):
            ModelParams(2, 1, -1.0, -1.0)

    def test_rabi_oscillation(self):
        # One particle in two modes: b1 <-> b2 with coupling √2 Ω and detuning Ω
        params = ModelParams(2, 1, -1.0, 0.0)
        hamiltonian = fock.build_hamiltonian(params)
        basis = hamiltonian.basis
        psi0 = fock.FockVector([1.0, 0.0], basis)
        times = np.linspace(0.0, 3.0, 13)
        flipped = [abs(psi.amplitudes[basis.index((0, 1))]) ** 2
                   for psi in fock.evolve_exact(psi0, hamiltonian, times)]
        expected = 8.0 / 9.0 * np.sin(1.5 * params.omega * times) ** 2
        self.assertArrayClose(flipped, expected, atol=1e-12)

    def test_evolution_is_unitary(self):
        params = ModelParams(3, 8, -1.0, -2.0)
        psi0 = coherent.coherent_amplitudes([0.3, 0.1j], 3, 8)
        for psi in fock.evolve_exact(psi0, fock.build_hamiltonian(params), [0.0, 0.7, 5.0]):
            self.assertAlmostEqual(psi.norm(), 1.0, places=10)

    def test_energy_is_conserved(self):
        params = ModelParams(3, 8, -1.0, -2.0)
        hamiltonian = fock.build_hamiltonian(params)
        psi0 = coherent.coherent_amplitudes([0.3, 0.1j], 3, 8)
        energies = [hamiltonian.energy(psi) for psi in fock.evolve_exact(psi0, hamiltonian, [0.0, 1.0, 4.0])]
        self.assertArrayClose(energies, [energies[0]] * 3, rtol=1e-10)

    def test_linear_trimer_matches_reduced_model(self):
        # Without collisions the antisymmetric mode decouples exactly
        N, v = 12, TAN_PI_8
        times = np.linspace(0.0, 4.0, 9)
        trimer = fock.evolve_exact(
            coherent.coherent_amplitudes([v / SQRT2, v / SQRT2], 3, N),
            fock.build_hamiltonian(ModelParams(3, N, -1.0, 0.0)), times
        )
        reduced = fock.evolve_exact(
            coherent.coherent_amplitudes([v], 2, N),
            fock.build_hamiltonian(ModelParams(2, N, -1.0, 0.0)), times
        )
        self.assertArrayClose([fock.expectation(psi, 'sz') for psi in trimer],
                              [fock.expectation(psi, 'sz') for psi in reduced], atol=1e-10)
        self.assertArrayClose([fock.expectation(psi, 'nb3') for psi in trimer], np.zeros(9), atol=1e-10)


class RotationTestCase(TestCase):

    def test_orthogonal(self):
        rotation = fock.rotation_matrix(6)
        self.assertArrayClose(rotation.dot(rotation.T), np.eye(len(rotation)), atol=1e-12)

    def test_round_trip(self):
        psi = coherent.coherent_amplitudes([0.2 + 0.1j, -0.4], 3, 5)
        back = fock.rotate_modes(fock.rotate_modes(psi, 'forward'), 'inverse')
        self.assertArrayClose(back.amplitudes, psi.amplitudes, atol=1e-12)

    def test_direction_checks(self):
        psi = coherent.coherent_amplitudes([0.2, 0.1], 3, 4)
        with self.assertRaises(BasisMismatchError):
            fock.rotate_modes(psi, 'inverse')
        with self.assertRaises(BasisMismatchError):
            fock.rotate_modes(coherent.coherent_amplitudes([0.2], 2, 4), 'forward')

    def test_projection_of_symmetric_coherent_state(self):
        N, v = 10, TAN_PI_8
        psi = coherent.coherent_amplitudes([v / SQRT2, v / SQRT2], 3, N)
        projected = fock.project_two_mode(psi)
        self.assertAlmostEqual(projected.norm(), 1.0, places=10)
        self.assertAlmostEqual(projected.fidelity(coherent.coherent_amplitudes([v], 2, N)), 1.0, places=10)


class ExpectationTestCase(TestCase):

    def test_coherent_imbalance(self):
        # (tan²(π/8) - 1)/(tan²(π/8) + 1) = -cos(π/4)
        for N in (1, 30, 60):
            psi = coherent.coherent_amplitudes([TAN_PI_8], 2, N)
            self.assertAlmostEqual(fock.expectation(psi, 'sz'), -math.cos(math.pi / 4), places=10)

    def test_trimer_start_has_empty_b3(self):
        v = TAN_PI_8
        psi = coherent.coherent_amplitudes([v / SQRT2, v / SQRT2], 3, 30)
        self.assertAlmostEqual(fock.expectation(psi, 'nb3'), 0.0, places=10)
        self.assertAlmostEqual(fock.expectation(psi, 'sz'), -math.cos(math.pi / 4), places=10)

    def test_unknown_observables(self):
        psi = coherent.coherent_amplitudes([0.1], 2, 3)
        with self.assertRaises(UnknownObservableError):
            fock.expectation(psi, 'nb3')
        with self.assertRaises(UnknownObservableError):
            fock.expectation(psi, 'n3')
        with self.assertRaises(UnknownObservableError):
            fock.expectation(psi, 'momentum')

# -*- coding: utf-8 -*-
'''
    sunprop
    ~~~~~~~

    Semiclassical propagation of Bose-Einstein condensates in SU(n) coherent
    states, with the exact quantum propagator and the classical
    approximation to compare against.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import warnings

# Import sunprop libs
from sunprop.version import __version__, __version_info__
from sunprop.exceptions import SUnPropError
from sunprop.model import ModelParams, DoubledState, hamiltonian_for
from sunprop.fock import FockBasis, FockVector, enumerate_basis, build_hamiltonian, evolve_exact
from sunprop.coherent import coherent_amplitudes, overlap, q_function
from sunprop.dynamics import integrate_trajectory, propagator_log_amplitude
from sunprop.ivr import (
    GridSpec,
    FilterConfig,
    build_grid,
    run_ensemble,
    accumulate_integrals,
    assemble_propagator,
    reconstruct_state,
    classical_approximation,
)


__all__ = [
    'SUnPropError',
    'ModelParams',
    'DoubledState',
    'hamiltonian_for',
    'FockBasis',
    'FockVector',
    'enumerate_basis',
    'build_hamiltonian',
    'evolve_exact',
    'coherent_amplitudes',
    'overlap',
    'q_function',
    'integrate_trajectory',
    'propagator_log_amplitude',
    'GridSpec',
    'FilterConfig',
    'build_grid',
    'run_ensemble',
    'accumulate_integrals',
    'assemble_propagator',
    'reconstruct_state',
    'classical_approximation',
]


# Show every sunprop deprecation warning once
warnings.filterwarnings(
    'once',
    '',
    DeprecationWarning,
    r'^(sunprop|sunprop\.(.*))$'
)

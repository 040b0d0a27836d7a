# -*- coding: utf-8 -*-
'''
    sunprop.exceptions
    ~~~~~~~~~~~~~~~~~~

    Every error raised on purpose by SUnProp derives from
    :class:`SUnPropError`, so callers (the CLI among them) can catch the
    whole family at once.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''


class SUnPropError(Exception):
    '''
    Base class of all SUnProp errors
    '''


class DimensionCapError(SUnPropError):
    '''
    The number basis would exceed the configured dimension cap
    '''


class NonHermitianError(SUnPropError):
    '''
    A matrix handed to the exact propagator is not Hermitian
    '''


class BasisMismatchError(SUnPropError):
    '''
    A Fock vector lives in a different basis or mode set than expected
    '''


class UnknownObservableError(SUnPropError):
    '''
    The observable name is unknown, or meaningless for the given mode count
    '''


class ModelError(SUnPropError):
    '''
    Invalid model parameters
    '''


class ZeroNormError(SUnPropError):
    '''
    A state vector that must be normalized has zero norm
    '''


class SeriesMismatchError(SUnPropError):
    '''
    Two time series sampled on different time grids were compared
    '''


class SingularityError(SUnPropError):
    '''
    A doubled phase space trajectory hit the singular set ``1 + w̄w = 0``
    or ran away to infinity.
    '''
    def __init__(self, message, time=None):
        super(SingularityError, self).__init__(message)
        self.time = time


class DegenerateTableError(SUnPropError):
    '''
    No trajectory contributes to the IVR integrals at some output time
    '''
    def __init__(self, message, time=None):
        super(DegenerateTableError, self).__init__(message)
        self.time = time


class ConfigError(SUnPropError):
    '''
    A scenario file failed to parse or validate. ``str()`` of the error is
    anchored to the offending line: ``<file>:<line>: <message>``.
    '''
    def __init__(self, message, filename=None, line=None):
        super(ConfigError, self).__init__(message)
        self.message = message
        self.filename = filename
        self.line = line

    def __str__(self):
        if self.filename is None:
            return self.message
        if self.line is None:
            return '{0}: {1}'.format(self.filename, self.message)
        return '{0}:{1}: {2}'.format(self.filename, self.line, self.message)

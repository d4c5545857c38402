''' (t, z, L)-ramp secret sharing with a coefficient-embedded Reed-Solomon code

    A block of t-z secret symbols fills the low coefficients of a degree t-1
    polynomial and z tape symbols fill the high ones. Share l is the
    evaluation at the field element with integer value l, except that share
    L = q, when present, is the leading coefficient (the point at infinity).
'''
from dataclasses import dataclass

import numpy as np

from pfstore.fields.linalg import INFINITY, vandermonde, mat_mul, solve_symbols
from pfstore.utils import seeding
from pfstore.utils.pfstore_error import (ParameterError, UsageError,
                                         InsufficientSharesError, CorruptionError)


@dataclass(frozen=True)
class RampParams:
    L: int
    t: int
    z: int
    spec: object

    def __post_init__(self):
        if not 1 <= self.t <= self.L:
            raise ParameterError('Recovery threshold t={} must lie in [1, L={}]'.format(self.t, self.L))
        if not 1 <= self.z <= self.t - 1:
            raise ParameterError('Collusion threshold z={} must lie in [1, t-1={}]'.format(self.z, self.t - 1))
        if self.L > self.spec.order:
            raise ParameterError('L={} servers need distinct points but GF({}) has {} nonzero ones and infinity'.format(
                self.L, self.spec.order, self.spec.order - 1))

    @property
    def block_size(self):
        ''' Secret symbols per polynomial, t - z
        '''
        return self.t - self.z

    def point(self, index):
        ''' Evaluation point of server `index`: its integer value, or INFINITY for index q
        '''
        return INFINITY if index == self.spec.order else index

    def points(self, indices):
        return [self.point(l) for l in indices]

    def share_length(self, secret_length):
        self._check_divisible(secret_length)
        return secret_length // self.block_size

    def tape_length(self, secret_length):
        self._check_divisible(secret_length)
        return secret_length * self.z // self.block_size

    def _check_divisible(self, secret_length):
        if secret_length < 1 or secret_length % self.block_size:
            raise ParameterError('Secret length {} is not a positive multiple of t-z={}'.format(
                secret_length, self.block_size))


class RandomTape(object):
    ''' The encoder's local randomness R
    '''

    def __init__(self, symbols, source='deterministic-seed'):
        self.symbols = np.array(symbols, dtype=np.uint8).reshape(-1)
        self.source = source

    @classmethod
    def draw(cls, params, secret_length, seed=None, label='tape'):
        ''' Draw exactly n_s * z / (t - z) uniform symbols

        Args:
            params (RampParams): The ramp parameters
            secret_length (int): n_s
            seed (Optional[int]): None draws from system entropy
            label (str): Stream label, distinct per user and file
        '''
        count = params.tape_length(secret_length)
        symbols = seeding.symbol_stream(seed, label, count, params.spec.order)
        return cls(symbols, 'system-entropy' if seed is None else 'deterministic-seed')

    def __len__(self):
        return int(self.symbols.size)


class ShareBundle(object):
    ''' The L shares H_1..H_L of one secret
    '''

    def __init__(self, shares, params, secret_length):
        self.shares = list(shares)
        self.params = params
        self.secret_length = secret_length

    def share(self, index):
        ''' Return H_index (1-based)
        '''
        if not 1 <= index <= len(self.shares):
            raise UsageError('Share index {} outside [1, {}]'.format(index, len(self.shares)))
        return self.shares[index - 1]

    def subset(self, indices):
        return {l: self.share(l) for l in indices}

    @property
    def share_length(self):
        return int(self.shares[0].size) if self.shares else 0


def ramp_encode(secret, tape, params):
    ''' Split a secret of n_s symbols into L shares of n_s/(t-z) symbols

    Args:
        secret (array-like): n_s symbols
        tape (RandomTape): exactly n_s*z/(t-z) symbols
        params (RampParams): The ramp parameters

    Returns:
        (ShareBundle): deterministic in (secret, tape)
    '''
    spec = params.spec
    secret = spec.check_symbols(secret)
    secret_length = int(secret.size)
    expected = params.tape_length(secret_length)
    randomness = spec.check_symbols(tape.symbols)
    if randomness.size != expected:
        raise ParameterError('Tape holds {} symbols, the encoder needs exactly {}'.format(
            randomness.size, expected))

    k, z = params.block_size, params.z
    num_blocks = secret_length // k
    coefficients = np.zeros((params.t, num_blocks), dtype=np.uint8)
    coefficients[:k] = secret.reshape(num_blocks, k).T
    coefficients[k:] = randomness.reshape(num_blocks, z).T

    points = params.points(range(1, params.L + 1))
    evaluations = mat_mul(spec, vandermonde(spec, points, params.t), coefficients)
    return ShareBundle([evaluations[l].copy() for l in range(params.L)], params, secret_length)


def _collect(shares, params):
    items = list(shares.items()) if isinstance(shares, dict) else list(shares)
    collected = {}
    for index, vector in items:
        index = int(index)
        if not 1 <= index <= params.L:
            raise UsageError('Share index {} outside [1, {}]'.format(index, params.L))
        if index in collected:
            raise UsageError('Share index {} given twice'.format(index))
        collected[index] = params.spec.check_symbols(vector)
    lengths = {v.size for v in collected.values()}
    if len(lengths) > 1:
        raise UsageError('Shares have unequal lengths {}'.format(sorted(lengths)))
    return collected


def ramp_decode(shares, params):
    ''' Reconstruct the secret from at least t shares

    Args:
        shares (dict or list): server index -> symbol vector, or (index, vector) pairs
        params (RampParams): The ramp parameters

    Returns:
        (numpy.array): the n_s secret symbols

    Note: the lowest t indices are solved; any further shares must agree with
          the recovered polynomials, otherwise CorruptionError.
    '''
    spec = params.spec
    collected = _collect(shares, params)
    if len(collected) < params.t:
        missing = params.t - len(collected)
        raise InsufficientSharesError('Need at least t={} shares, got {} ({} more needed)'.format(
            params.t, len(collected), missing), missing=missing)

    indices = sorted(collected)
    chosen, extra = indices[:params.t], indices[params.t:]
    observed = np.stack([collected[l] for l in chosen])
    coefficients = solve_symbols(spec, vandermonde(spec, params.points(chosen), params.t), observed)

    if extra:
        predicted = mat_mul(spec, vandermonde(spec, params.points(extra), params.t), coefficients)
        actual = np.stack([collected[l] for l in extra])
        if not np.array_equal(predicted, actual):
            bad = [l for l, p, a in zip(extra, predicted, actual) if not np.array_equal(p, a)]
            raise CorruptionError('Shares {} are inconsistent with shares {}'.format(bad, chosen))

    return coefficients[:params.block_size].T.reshape(-1).copy()


def ramp_leakage_profile(params, subset_size, secret_length):
    ''' Predicted information, in bits, that `subset_size` raw shares reveal

    Returns:
        (int): max(0, min(i - z, t - z)) * n_s/(t - z) * m
    '''
    if not 0 <= subset_size <= params.L:
        raise ParameterError('Subset size {} outside [0, L={}]'.format(subset_size, params.L))
    per_share = params.share_length(secret_length)
    return max(0, min(subset_size - params.z, params.block_size)) * per_share * params.spec.m

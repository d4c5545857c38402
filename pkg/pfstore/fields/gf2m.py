''' Exact arithmetic in GF(2^m) for 1 <= m <= 8
'''
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from pfstore.utils.pfstore_error import UsageError, ParameterError, FieldDomainError

# One canonical reduction polynomial per width keeps record files portable
DEFAULT_REDUCTION_POLYS = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
}


def clmul(a, b):
    ''' Carry-less product of two GF(2) polynomials encoded as integers
    '''
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a, poly):
    ''' Remainder of GF(2) polynomial long division of a by poly
    '''
    degree = poly.bit_length() - 1
    while a and a.bit_length() - 1 >= degree:
        a ^= poly << (a.bit_length() - 1 - degree)
    return a


def reduce_mul(a, b, poly):
    ''' Reference multiplication: carry-less multiply, then long division.
        Kept independent of the tables so the two can cross-check.
    '''
    return poly_mod(clmul(a, b), poly)


def is_irreducible(poly):
    ''' Exhaustive trial division by every polynomial of degree 1..deg/2

    Args:
        poly (int): polynomial over GF(2), bit i is the coefficient of x^i

    Returns:
        (boolean): True if poly has no non-trivial factor
    '''
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if poly_mod(poly, divisor) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def _build_tables(m, poly):
    order = 1 << m
    generator = None
    for candidate in range(1, order):
        x, period = candidate, 1
        while x != 1:
            x = reduce_mul(x, candidate, poly)
            period += 1
        if period == order - 1:
            generator = candidate
            break
    exp = np.zeros(2 * (order - 1), dtype=np.uint8)
    log = np.full(order, -1, dtype=np.int16)
    x = 1
    for i in range(order - 1):
        exp[i] = x
        log[x] = i
        x = reduce_mul(x, generator, poly)
    exp[order - 1:] = exp[:order - 1]
    exp.setflags(write=False)
    log.setflags(write=False)
    return generator, exp, log


@dataclass(frozen=True)
class FieldSpec:
    ''' GF(2^m) defined by a degree-m irreducible reduction polynomial
    '''
    m: int
    reduction_poly: int = None

    def __post_init__(self):
        if not isinstance(self.m, int) or not 1 <= self.m <= 8:
            raise ParameterError('Field width m must be in [1, 8], not {}'.format(self.m))
        if self.reduction_poly is None:
            object.__setattr__(self, 'reduction_poly', DEFAULT_REDUCTION_POLYS[self.m])
        if self.reduction_poly.bit_length() - 1 != self.m:
            raise ParameterError('Reduction polynomial {:#x} does not have degree {}'.format(
                self.reduction_poly, self.m))
        if not is_irreducible(self.reduction_poly):
            raise ParameterError('Reduction polynomial {:#x} is reducible'.format(self.reduction_poly))

    @property
    def order(self):
        return 1 << self.m

    @property
    def generator(self):
        return _build_tables(self.m, self.reduction_poly)[0]

    def element(self, value):
        return FieldElement(int(value), self)

    def mul(self, a, b):
        ''' Table-driven product of two integer symbols
        '''
        if a == 0 or b == 0:
            return 0
        _, exp, log = _build_tables(self.m, self.reduction_poly)
        return int(exp[int(log[a]) + int(log[b])])

    def inv(self, a):
        if a == 0:
            raise FieldDomainError('Zero has no multiplicative inverse in GF({})'.format(self.order))
        _, exp, log = _build_tables(self.m, self.reduction_poly)
        return int(exp[(self.order - 1 - int(log[a])) % (self.order - 1)])

    def pow(self, a, e):
        if e == 0:
            return 1
        if a == 0:
            return 0
        _, exp, log = _build_tables(self.m, self.reduction_poly)
        return int(exp[(int(log[a]) * e) % (self.order - 1)])

    def mul_vec(self, a, b):
        ''' Element-wise product of symbol arrays (numpy broadcasting rules)
        '''
        _, exp, log = _build_tables(self.m, self.reduction_poly)
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        la = log[a].astype(np.int32)
        lb = log[b].astype(np.int32)
        zero = (la < 0) | (lb < 0)
        out = exp[la + lb]
        return np.where(zero, np.uint8(0), out).astype(np.uint8)

    def check_symbols(self, symbols):
        ''' Validate and normalize a symbol vector

        Returns:
            (numpy.array): uint8 copy of the symbols
        '''
        arr = np.array(symbols, dtype=np.int64).reshape(-1)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise UsageError('Symbols out of range for GF({})'.format(self.order))
        return arr.astype(np.uint8)

    def __str__(self):
        return 'GF(2^{}) mod {:#x}'.format(self.m, self.reduction_poly)


@dataclass(frozen=True)
class FieldElement:
    ''' An immutable value of a FieldSpec
    '''
    value: int
    spec: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.spec.order:
            raise UsageError('Value {} is not in GF({})'.format(self.value, self.spec.order))

    def __add__(self, other):
        return add(self, other)

    __sub__ = __add__

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return mul(self, inv(other))

    def __int__(self):
        return self.value

    def __repr__(self):
        return 'FieldElement({:#x}, GF({}))'.format(self.value, self.spec.order)


@lru_cache(maxsize=None)
def get_field(m, reduction_poly=None):
    ''' Canonical FieldSpec for a width
    '''
    return FieldSpec(m, reduction_poly)


def _check_pair(a, b):
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
        raise UsageError('Field operations take FieldElement operands')
    if a.spec != b.spec:
        raise UsageError('Cannot mix elements of {} and {}'.format(a.spec, b.spec))


def add(a, b):
    _check_pair(a, b)
    return FieldElement(a.value ^ b.value, a.spec)


def mul(a, b):
    _check_pair(a, b)
    return FieldElement(a.spec.mul(a.value, b.value), a.spec)


def inv(a):
    if not isinstance(a, FieldElement):
        raise UsageError('Field operations take FieldElement operands')
    return FieldElement(a.spec.inv(a.value), a.spec)

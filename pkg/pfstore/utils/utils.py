import itertools
from fractions import Fraction

import numpy as np
from termcolor import colored

def bytes_to_symbols(data, bit_length, m):
    ''' Cut the first bit_length bits of data into m-bit symbols, MSB first

    Args:
        data (bytes): The raw bytes
        bit_length (int): Number of meaningful bits
        m (int): Symbol width

    Returns:
        (numpy.array): ceil(bit_length / m) uint8 symbols, the last one zero-filled
    '''
    bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))[:bit_length]
    remainder = (-bit_length) % m
    if remainder:
        bits = np.concatenate([bits, np.zeros(remainder, dtype=np.uint8)])
    weights = (1 << np.arange(m - 1, -1, -1)).astype(np.uint16)
    return (bits.reshape(-1, m).astype(np.uint16) * weights).sum(axis=1).astype(np.uint8)

def symbols_to_bytes(symbols, bit_length, m):
    ''' Inverse of bytes_to_symbols; bits past bit_length are dropped
    '''
    symbols = np.asarray(symbols, dtype=np.uint8)
    shifts = np.arange(m - 1, -1, -1, dtype=np.uint8)
    bits = ((symbols[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)[:bit_length]
    return np.packbits(bits).tobytes()

def subsets(items, size):
    ''' All subsets of a given size, as sorted tuples in lexicographic order
    '''
    return list(itertools.combinations(sorted(items), size))

def all_subsets(items):
    items = sorted(items)
    return [s for size in range(len(items) + 1) for s in itertools.combinations(items, size)]

def format_bits(value):
    ''' Render an exact Fraction as the "p/q" string used in reports
    '''
    value = Fraction(value)
    return '{}/{}'.format(value.numerator, value.denominator)

def format_label(label):
    ''' ('K', 1, 2) -> 'K[1,2]'; plain labels are returned as text
    '''
    if not isinstance(label, tuple):
        return str(label)
    return '{}[{}]'.format(label[0], ','.join(str(part) for part in label[1:]))

def verdict_text(ok):
    ''' Colored PASS or FAIL for terminal output
    '''
    return colored('PASS', 'green') if ok else colored('FAIL', 'red', attrs=['bold'])

''' Linear algebra over GF(2^m): Vandermonde systems and Gauss-Jordan elimination
'''
import numpy as np

from pfstore.fields.gf2m import FieldElement
from pfstore.utils.pfstore_error import UsageError, RankError

# Projective point at infinity; f(INFINITY) is the leading coefficient
INFINITY = None


def vandermonde(spec, points, num_cols):
    ''' Build V[i][j] = points[i]^j

    Args:
        spec (FieldSpec): The field
        points (list): Integer evaluation points, or INFINITY
        num_cols (int): Number of columns (polynomial coefficients)

    Returns:
        (numpy.array): uint8 matrix of shape (len(points), num_cols)

    Note: the row of INFINITY selects the leading coefficient.
    '''
    matrix = np.zeros((len(points), num_cols), dtype=np.uint8)
    for i, point in enumerate(points):
        if point is INFINITY:
            matrix[i, num_cols - 1] = 1
            continue
        for j in range(num_cols):
            matrix[i, j] = spec.pow(int(point), j)
    return matrix


def mat_mul(spec, left, right):
    ''' Matrix product of uint8 symbol matrices
    '''
    left = np.asarray(left, dtype=np.uint8)
    right = np.asarray(right, dtype=np.uint8)
    out = np.zeros((left.shape[0], right.shape[1]), dtype=np.uint8)
    for k in range(left.shape[1]):
        out ^= spec.mul_vec(left[:, k:k+1], right[k:k+1, :])
    return out


def solve_symbols(spec, matrix, rhs):
    ''' Solve matrix . X = rhs for X by Gauss-Jordan elimination

    Args:
        spec (FieldSpec): The field
        matrix (numpy.array): square uint8 matrix of shape (k, k)
        rhs (numpy.array): uint8 matrix of shape (k, c), one column per system

    Returns:
        (numpy.array): uint8 solution of shape (k, c)

    Note: a singular matrix raises RankError.
    '''
    a = np.array(matrix, dtype=np.uint8)
    b = np.array(rhs, dtype=np.uint8)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError('Coefficient matrix must be square, got shape {}'.format(a.shape))
    if b.ndim != 2 or b.shape[0] != a.shape[0]:
        raise UsageError('Right-hand side has {} rows, expected {}'.format(b.shape[0], a.shape[0]))
    size = a.shape[0]
    for col in range(size):
        nonzero = np.nonzero(a[col:, col])[0]
        if nonzero.size == 0:
            raise RankError('Matrix is singular (no pivot in column {})'.format(col))
        pivot = col + int(nonzero[0])
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        scale = spec.inv(int(a[col, col]))
        a[col] = spec.mul_vec(a[col], scale)
        b[col] = spec.mul_vec(b[col], scale)
        for row in range(size):
            factor = int(a[row, col])
            if row != col and factor:
                a[row] ^= spec.mul_vec(a[col], factor)
                b[row] ^= spec.mul_vec(b[col], factor)
    return b


def solve_linear(matrix, rhs):
    ''' Solve a square system of FieldElements

    Args:
        matrix (list): list of rows of FieldElement
        rhs (list): list of FieldElement

    Returns:
        (list): FieldElement solution x with matrix . x = rhs
    '''
    if not matrix or any(len(row) != len(matrix) for row in matrix):
        raise UsageError('Coefficient matrix must be square and non-empty')
    if len(rhs) != len(matrix):
        raise UsageError('Right-hand side length {} does not match {} rows'.format(len(rhs), len(matrix)))
    spec = matrix[0][0].spec
    for value in [v for row in matrix for v in row] + list(rhs):
        if not isinstance(value, FieldElement) or value.spec != spec:
            raise UsageError('All entries must be FieldElements of {}'.format(spec))
    a = np.array([[v.value for v in row] for row in matrix], dtype=np.uint8)
    b = np.array([[v.value] for v in rhs], dtype=np.uint8)
    x = solve_symbols(spec, a, b)
    return [spec.element(v) for v in x[:, 0]]

''' Exact finite joint distributions and their information measures

    Probabilities are integer weights over a common total, so every value is
    an exact rational. Labels are tuples such as ('F', 1) for user 1's file
    or ('K', 1, 2) for user 1's key at server 2.
'''
from collections import Counter
from fractions import Fraction

from pfstore.utils.pfstore_error import UsageError, InexactEntropyError
from pfstore.utils.utils import format_label


class JointDistribution(object):
    ''' A joint distribution over labelled variables

    Every outcome is a tuple of values, one per label; values are hashable
    (symbol tuples in practice).
    '''

    def __init__(self, labels, weights):
        ''' Initialize from integer weights

        Args:
            labels (list): the variable labels, in outcome order
            weights (dict): outcome tuple -> positive integer weight
        '''
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise UsageError('Duplicate labels in {}'.format(self.labels))
        self.weights = {o: int(w) for o, w in weights.items() if w}
        self.total = sum(self.weights.values())
        if self.total <= 0:
            raise UsageError('A distribution needs positive total weight')
        self._positions = {label: i for i, label in enumerate(self.labels)}

    @property
    def support_size(self):
        return len(self.weights)

    def probability(self, outcome):
        return Fraction(self.weights.get(tuple(outcome), 0), self.total)

    def index(self, labels):
        missing = [label for label in labels if label not in self._positions]
        if missing:
            raise UsageError('Unknown labels {}'.format(', '.join(format_label(label) for label in missing)))
        return [self._positions[label] for label in labels]

    def marginal(self, labels):
        ''' Distribution of the listed labels, in the listed order
        '''
        labels = tuple(labels)
        positions = self.index(labels)
        counts = Counter()
        for outcome, weight in self.weights.items():
            counts[tuple(outcome[i] for i in positions)] += weight
        return JointDistribution(labels, counts)

    def factors(self):
        return [self]

    def __repr__(self):
        return 'JointDistribution({} labels, {} outcomes)'.format(len(self.labels), self.support_size)


class ProductDistribution(object):
    ''' Independent factors with disjoint labels, joined as a product

    Nothing here ever materializes the product; every measure decomposes
    over the factors.
    '''

    def __init__(self, factors):
        self._factors = list(factors)
        labels = [label for factor in self._factors for label in factor.labels]
        if len(set(labels)) != len(labels):
            raise UsageError('Factors of a product must have disjoint labels')
        self.labels = tuple(labels)

    def factors(self):
        return list(self._factors)

    @property
    def support_size(self):
        size = 1
        for factor in self._factors:
            size *= factor.support_size
        return size

    def index(self, labels):
        missing = [label for label in labels if label not in self.labels]
        if missing:
            raise UsageError('Unknown labels {}'.format(', '.join(format_label(label) for label in missing)))
        return [self.labels.index(label) for label in labels]

    def __repr__(self):
        return 'ProductDistribution({} factors, {} labels)'.format(len(self._factors), len(self.labels))


def _log2_exact(value):
    ''' log2 of a positive rational, which must be a power of two
    '''
    value = Fraction(value)
    num, den = value.numerator, value.denominator
    if num & (num - 1) or den & (den - 1):
        raise InexactEntropyError('log2({}) is not an integer; the distribution is not dyadic'.format(value))
    return Fraction(num.bit_length() - den.bit_length())


def _split(dist, labels):
    ''' Restrict a label set to each factor of dist
    '''
    labels = list(labels)
    dist.index(labels)
    return [(factor, [label for label in labels if label in factor.labels]) for factor in dist.factors()]


def entropy(dist, labels):
    ''' Exact H(labels) in bits
    '''
    total = Fraction(0)
    for factor, own in _split(dist, labels):
        if not own:
            continue
        marginal = factor.marginal(own)
        for weight in marginal.weights.values():
            p = Fraction(weight, marginal.total)
            total -= p * _log2_exact(p)
    return total


def _independent(factor, X, Y):
    ''' Factorization test: p(x, y) = p(x) p(y) everywhere, in integers
    '''
    joint = factor.marginal(list(X) + list(Y))
    split = len(X)
    px, py = Counter(), Counter()
    for outcome, weight in joint.weights.items():
        px[outcome[:split]] += weight
        py[outcome[split:]] += weight
    if len(joint.weights) != len(px) * len(py):
        return False
    return all(weight * joint.total == px[o[:split]] * py[o[split:]]
               for o, weight in joint.weights.items())


def mutual_information(dist, X, Y):
    ''' Exact I(X; Y) in bits

    Args:
        dist (JointDistribution or ProductDistribution): the distribution
        X (list): labels of the first variable group
        Y (list): labels of the second, disjoint from X

    Returns:
        (Fraction): zero exactly when the factorization test passes
    '''
    X, Y = list(X), list(Y)
    if set(X) & set(Y):
        raise UsageError('Label sets overlap: {}'.format(sorted(set(X) & set(Y))))
    dist.index(X + Y)
    total = Fraction(0)
    for factor in dist.factors():
        own_x = [label for label in X if label in factor.labels]
        own_y = [label for label in Y if label in factor.labels]
        if not own_x or not own_y or _independent(factor, own_x, own_y):
            continue
        total += entropy(factor, own_x) + entropy(factor, own_y) - entropy(factor, own_x + own_y)
    return total


def conditional_entropy(dist, X, Y):
    ''' Exact H(X | Y) = H(X, Y) - H(Y)
    '''
    X, Y = list(X), list(Y)
    joint = X + [label for label in Y if label not in X]
    return entropy(dist, joint) - entropy(dist, Y)


def is_uniform(dist, labels, order):
    ''' True if the labels are uniform over every value tuple of their symbol lengths
    '''
    for factor, own in _split(dist, labels):
        if not own:
            continue
        marginal = factor.marginal(own)
        sample = next(iter(marginal.weights))
        size = 1
        for value in sample:
            size *= order ** len(value)
        if marginal.support_size != size or len(set(marginal.weights.values())) != 1:
            return False
    return True

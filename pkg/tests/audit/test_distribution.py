import unittest
from fractions import Fraction

from pfstore.audit.distribution import (JointDistribution, ProductDistribution, entropy,
                                        mutual_information, conditional_entropy, is_uniform)
from pfstore.utils.pfstore_error import UsageError, InexactEntropyError


def xor_distribution():
    ''' X, K uniform bits and Y = X ^ K
    '''
    weights = {((x,), (k,), (x ^ k,)): 1 for x in (0, 1) for k in (0, 1)}
    return JointDistribution(['X', 'K', 'Y'], weights)


class TestJointDistribution(unittest.TestCase):

    def test_marginal(self):
        dist = xor_distribution()
        marginal = dist.marginal(['Y'])
        self.assertEqual(marginal.labels, ('Y',))
        self.assertEqual(marginal.probability([(1,)]), Fraction(1, 2))
        self.assertEqual(dist.support_size, 4)

    def test_duplicate_labels(self):
        with self.assertRaises(UsageError):
            JointDistribution(['X', 'X'], {(0, 0): 1})

    def test_unknown_label(self):
        with self.assertRaises(UsageError):
            entropy(xor_distribution(), ['Z'])
        dist = JointDistribution([('F', 1), ('K', 1, 2)], {(0, 0): 1})
        with self.assertRaises(UsageError) as ctx:
            entropy(dist, [('K', 1, 7)])
        self.assertIn('K[1,7]', str(ctx.exception))

    def test_zero_weights_dropped(self):
        dist = JointDistribution(['X'], {((0,),): 3, ((1,),): 0})
        self.assertEqual(dist.support_size, 1)
        self.assertEqual(entropy(dist, ['X']), 0)


class TestMeasures(unittest.TestCase):

    def test_one_time_pad(self):
        dist = xor_distribution()
        self.assertEqual(entropy(dist, ['X']), 1)
        self.assertEqual(entropy(dist, ['X', 'K', 'Y']), 2)
        self.assertEqual(mutual_information(dist, ['X'], ['Y']), 0)
        self.assertEqual(mutual_information(dist, ['X'], ['Y', 'K']), 1)
        self.assertEqual(conditional_entropy(dist, ['X'], ['K', 'Y']), 0)
        self.assertEqual(conditional_entropy(dist, ['X'], ['Y']), 1)

    def test_overlapping_sets(self):
        with self.assertRaises(UsageError):
            mutual_information(xor_distribution(), ['X'], ['X', 'Y'])

    def test_non_dyadic(self):
        dist = JointDistribution(['X'], {((0,),): 1, ((1,),): 2})
        with self.assertRaises(InexactEntropyError):
            entropy(dist, ['X'])

    def test_independence_needs_no_logarithm(self):
        # non-dyadic but independent: the factorization test answers alone
        weights = {((x,), (y,)): (1 + x) * (1 + y) for x in (0, 1) for y in (0, 1)}
        dist = JointDistribution(['X', 'Y'], weights)
        self.assertEqual(mutual_information(dist, ['X'], ['Y']), 0)

    def test_is_uniform(self):
        dist = xor_distribution()
        self.assertTrue(is_uniform(dist, ['X', 'Y'], 2))
        self.assertFalse(is_uniform(dist, ['X', 'K', 'Y'], 2))
        skewed = JointDistribution(['X'], {((0,),): 1, ((1,),): 3})
        self.assertFalse(is_uniform(skewed, ['X'], 2))


class TestProductDistribution(unittest.TestCase):

    def test_measures_decompose(self):
        first = xor_distribution()
        second = JointDistribution(['A', 'B'], {((a,), (a,)): 1 for a in range(4)})
        product = ProductDistribution([first, second])
        self.assertEqual(product.support_size, 16)
        self.assertEqual(entropy(product, ['X', 'A']), 3)
        self.assertEqual(mutual_information(product, ['X', 'A'], ['Y', 'K', 'B']), 3)
        self.assertEqual(mutual_information(product, ['X'], ['A']), 0)
        self.assertEqual(conditional_entropy(product, ['A', 'X'], ['B']), 1)
        self.assertTrue(is_uniform(product, ['X', 'Y'], 2))

    def test_labels_must_be_disjoint(self):
        with self.assertRaises(UsageError):
            ProductDistribution([xor_distribution(), xor_distribution()])

if __name__ == '__main__':
    unittest.main()

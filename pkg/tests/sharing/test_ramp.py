import itertools
import unittest

import numpy as np

from pfstore.fields import get_field
from pfstore.sharing import RampParams, RandomTape, ramp_encode, ramp_decode, ramp_leakage_profile
from pfstore.utils.pfstore_error import (ParameterError, InsufficientSharesError,
                                         CorruptionError, UsageError)


class TestRamp(unittest.TestCase):

    def setUp(self):
        self.gf4 = get_field(2)
        self.params = RampParams(3, 2, 1, self.gf4)

    def test_encode_small_example(self):
        # f(x) = 1 + x over GF(4)
        bundle = ramp_encode([1], RandomTape([1]), self.params)
        self.assertEqual([int(s[0]) for s in bundle.shares], [0, 3, 2])
        self.assertEqual(bundle.share_length, 1)

    def test_decode_every_pair(self):
        bundle = ramp_encode([1], RandomTape([1]), self.params)
        for pair in itertools.combinations([1, 2, 3], 2):
            np.testing.assert_array_equal(ramp_decode(bundle.subset(pair), self.params), [1])
        np.testing.assert_array_equal(ramp_decode([(1, [0]), (2, [3])], self.params), [1])

    def test_zero_tape_reduces_to_repetition(self):
        bundle = ramp_encode([2], RandomTape([0]), self.params)
        self.assertEqual([int(s[0]) for s in bundle.shares], [2, 2, 2])

    def test_insufficient_shares(self):
        bundle = ramp_encode([1], RandomTape([1]), self.params)
        with self.assertRaises(InsufficientSharesError) as ctx:
            ramp_decode(bundle.subset([2]), self.params)
        self.assertEqual(ctx.exception.missing, 1)

    def test_corrupted_extra_share(self):
        bundle = ramp_encode([1], RandomTape([1]), self.params)
        shares = bundle.subset([1, 2, 3])
        shares[3] = np.array([1], dtype=np.uint8)
        with self.assertRaises(CorruptionError):
            ramp_decode(shares, self.params)

    def test_duplicate_and_unknown_indices(self):
        with self.assertRaises(UsageError):
            ramp_decode([(1, [0]), (1, [0])], self.params)
        with self.assertRaises(UsageError):
            ramp_decode([(1, [0]), (4, [0])], self.params)

    def test_tape_length(self):
        with self.assertRaises(ParameterError):
            ramp_encode([1], RandomTape([1, 2]), self.params)
        with self.assertRaises(ParameterError):
            ramp_encode([1, 2], RandomTape([1, 2]), RampParams(3, 3, 1, self.gf4))  # 2 symbols need 1 tape symbol

    def test_invalid_params(self):
        with self.assertRaises(ParameterError):
            RampParams(3, 2, 2, self.gf4)
        with self.assertRaises(ParameterError):
            RampParams(3, 4, 1, self.gf4)
        with self.assertRaises(ParameterError):
            RampParams(3, 2, 0, self.gf4)
        with self.assertRaises(ParameterError):
            RampParams(5, 2, 1, self.gf4)  # GF(4) has 3 nonzero points and infinity

    def test_large_file_all_subsets(self):
        spec = get_field(8)
        params = RampParams(5, 3, 1, spec)
        rng = np.random.RandomState(2048)
        secret = rng.randint(0, 256, size=2048).astype(np.uint8)
        tape = RandomTape.draw(params, secret.size, seed=7)
        self.assertEqual(len(tape), 1024)
        bundle = ramp_encode(secret, tape, params)
        self.assertEqual(bundle.share_length, 1024)
        for subset in itertools.combinations(range(1, 6), 3):
            np.testing.assert_array_equal(ramp_decode(bundle.subset(subset), params), secret)

    def test_random_roundtrips(self):
        rng = np.random.RandomState(1000)
        for L, t, z, m in [(3, 2, 1, 2), (5, 4, 2, 4), (7, 5, 2, 8)]:
            spec = get_field(m)
            params = RampParams(L, t, z, spec)
            for _ in range(1000):
                secret = rng.randint(0, spec.order, size=2 * (t - z)).astype(np.uint8)
                tape = RandomTape(rng.randint(0, spec.order, size=2 * z))
                bundle = ramp_encode(secret, tape, params)
                chosen = sorted(rng.choice(np.arange(1, L + 1), size=t, replace=False))
                np.testing.assert_array_equal(ramp_decode(bundle.subset(chosen), params), secret)

    def test_share_at_infinity(self):
        # L = q: server 4 holds the leading coefficient of f(x) = 1 + x
        params = RampParams(4, 2, 1, self.gf4)
        bundle = ramp_encode([1], RandomTape([1]), params)
        self.assertEqual([int(s[0]) for s in bundle.shares], [0, 3, 2, 1])
        for pair in itertools.combinations(range(1, 5), 2):
            np.testing.assert_array_equal(ramp_decode(bundle.subset(pair), params), [1])

    def test_infinity_keeps_thresholds(self):
        # q=4, L=4, t=3, z=1: any single share is uniform, any three decode
        params = RampParams(4, 3, 1, self.gf4)
        for index in range(1, 5):
            for secret in itertools.product(range(4), repeat=2):
                seen = sorted(int(ramp_encode(secret, RandomTape([r]), params).share(index)[0])
                              for r in range(4))
                self.assertEqual(seen, [0, 1, 2, 3])
        for secret in itertools.product(range(4), repeat=2):
            for r in range(4):
                bundle = ramp_encode(secret, RandomTape([r]), params)
                for subset in itertools.combinations(range(1, 5), 3):
                    np.testing.assert_array_equal(ramp_decode(bundle.subset(subset), params), secret)
                np.testing.assert_array_equal(ramp_decode(bundle.subset(range(1, 5)), params), secret)

    def test_every_subset_gf8(self):
        spec = get_field(3)
        params = RampParams(4, 3, 1, spec)
        rng = np.random.RandomState(8)
        for _ in range(200):
            secret = rng.randint(0, 8, size=4).astype(np.uint8)
            bundle = ramp_encode(secret, RandomTape(rng.randint(0, 8, size=2)), params)
            for size in (3, 4):
                for subset in itertools.combinations(range(1, 5), size):
                    np.testing.assert_array_equal(ramp_decode(bundle.subset(subset), params), secret)

    def test_random_roundtrips_every_subset(self):
        rng = np.random.RandomState(1001)
        for L, t, z, m in [(2, 2, 1, 1), (4, 2, 1, 2), (6, 4, 2, 4), (6, 5, 3, 8)]:
            spec = get_field(m)
            params = RampParams(L, t, z, spec)
            for _ in range(20):
                secret = rng.randint(0, spec.order, size=2 * (t - z)).astype(np.uint8)
                bundle = ramp_encode(secret, RandomTape(rng.randint(0, spec.order, size=2 * z)), params)
                for subset in itertools.combinations(range(1, L + 1), t):
                    np.testing.assert_array_equal(ramp_decode(bundle.subset(subset), params), secret)

    def test_seeded_tape_is_deterministic(self):
        first = RandomTape.draw(self.params, 4, seed=42, label='tape|user=1')
        second = RandomTape.draw(self.params, 4, seed=42, label='tape|user=1')
        np.testing.assert_array_equal(first.symbols, second.symbols)
        self.assertEqual(first.source, 'deterministic-seed')
        longer = [RandomTape.draw(self.params, 64, seed=42, label='tape|user={}'.format(u)) for u in (1, 2)]
        self.assertFalse(np.array_equal(longer[0].symbols, longer[1].symbols))
        self.assertEqual(RandomTape.draw(self.params, 4).source, 'system-entropy')

    def test_leakage_profile(self):
        params = RampParams(5, 3, 1, get_field(8))
        profile = [ramp_leakage_profile(params, i, 2) for i in range(6)]
        self.assertEqual(profile, [0, 0, 8, 16, 16, 16])
        with self.assertRaises(ParameterError):
            ramp_leakage_profile(params, 6, 2)

if __name__ == '__main__':
    unittest.main()

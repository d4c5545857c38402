import unittest
from fractions import Fraction

import numpy as np

from pfstore.bounds import (compute_optima, verify_achievement, capacity_frontier,
                            message_lower_bound, check_converse)
from pfstore.fields import get_field
from pfstore.storage import StorageParams, UserParams, FileRecord, keygen, store, load
from pfstore.storage.protocol import ResourceReport
from pfstore.utils.pfstore_error import ParameterError, UsageError


def measured_report(params, user_id=1, strategy='ramp-otp', seed=0, data=None):
    spec = params.spec
    strategy = load(strategy)
    if data is None:
        rng = np.random.RandomState(seed)
        symbols = rng.randint(0, spec.order, size=params.capacity_symbols(user_id)).astype(np.uint8)
        record = FileRecord.from_symbols(user_id, symbols, spec)
    else:
        record = FileRecord(user_id, data)
    ring = keygen(user_id, params.L, params.user(user_id).n_symbols, spec, seed=seed)
    _, report = strategy.store(record, ring, params, strategy.draw_tape(params, user_id, seed=seed))
    return report


class TestOptima(unittest.TestCase):

    def test_single_user(self):
        params = StorageParams.single(5, 3, 1, 1, get_field(8))
        table = compute_optima(params)
        self.assertEqual(table.row(1), (16, 8, 8, 40, 8))
        self.assertEqual(table.to_dict()['storage_bits'], 8)

    def test_multi_user_storage(self):
        params = StorageParams([UserParams(1, 2, 1, 1), UserParams(2, 3, 2, 2)], 3, get_field(2))
        table = compute_optima(params)
        self.assertEqual(table.storage_bits, 6)
        self.assertEqual(table.row(2), (4, 8, 4, 12, 6))

    def test_measured_equals_optimum(self):
        rng = np.random.RandomState(2024)
        for trial in range(20):
            m = int(rng.randint(2, 9))
            L = int(rng.randint(2, min(8, (1 << m) - 1) + 1))
            t = int(rng.randint(2, L + 1))
            z = int(rng.randint(1, t))
            n = int(rng.randint(1, 5))
            params = StorageParams.single(L, t, z, n, get_field(m))
            report = measured_report(params, seed=trial)
            table = compute_optima(params)
            verdicts = verify_achievement(report, table)
            self.assertTrue(all(v.status == 'equal' for v in verdicts), (m, L, t, z, n))
            optimum = table.users[1]
            self.assertEqual(report.file_bits[1], n * m * (t - z))
            self.assertEqual(report.randomness_bits[1], n * m * z)
            self.assertEqual(set(report.message_bits[1].values()), {n * m})
            self.assertEqual(report.message_sum_bits(1), optimum.message_sum_bits)
            self.assertEqual(set(report.storage_bits.values()), {n * m})
            self.assertTrue(all(v.ok for v in check_converse(report, params)))

    def test_short_file(self):
        params = StorageParams.single(4, 3, 1, 4, get_field(8))
        report = measured_report(params, data=b'abc')
        statuses = {(v.quantity, v.status) for v in verify_achievement(report, compute_optima(params))}
        self.assertIn(('file', 'capacity-not-used'), statuses)
        self.assertIn(('file', 'equal'), statuses)

    def test_extra_randomness(self):
        params = StorageParams.single(3, 2, 1, 1, get_field(2))
        report = measured_report(params, strategy='double-randomness')
        bad = [v for v in verify_achievement(report, compute_optima(params)) if not v.ok]
        self.assertEqual([(v.quantity, v.status, v.measured, v.optimum) for v in bad],
                         [('randomness', 'suboptimal', 4, 2)])

    def test_undercount_is_violation(self):
        params = StorageParams.single(3, 2, 1, 1, get_field(2))
        report = ResourceReport(2)
        report.add_user(1, 2, 2, 1, {1: 2, 2: 2, 3: 2})
        for l in (1, 2, 3):
            report.add_storage(l, 2)
        verdicts = verify_achievement(report, compute_optima(params))
        self.assertIn(('randomness', 'violation'), [(v.quantity, v.status) for v in verdicts])
        converse = {v.quantity: v.status for v in check_converse(report, params)}
        self.assertEqual(converse['randomness'], 'violated')

    def test_mismatched_report(self):
        params = StorageParams.single(3, 2, 1, 1, get_field(2))
        with self.assertRaises(UsageError):
            verify_achievement(ResourceReport(4), compute_optima(params))


class TestFrontier(unittest.TestCase):

    def test_rows(self):
        rows = capacity_frontier(8, 5, [1, 2, 3], [1, 2])
        self.assertEqual([(r.t, r.z) for r in rows], [(2, 1), (3, 1), (3, 2)])
        self.assertEqual(rows[1].as_tuple(), (16, 8, 8, 40, 8))

    def test_n_sweep(self):
        rows = capacity_frontier([4, 8], 3, [2], [1])
        self.assertEqual([r.file_bits for r in rows], [4, 8])

    def test_invalid(self):
        with self.assertRaises(ParameterError):
            capacity_frontier(8, 3, [4], [1])
        with self.assertRaises(ParameterError):
            capacity_frontier(8, 3, [1], [1])
        with self.assertRaises(ParameterError):
            capacity_frontier(0, 3, [2], [1])


class TestMessageBound(unittest.TestCase):

    def test_ramp_profile(self):
        # alpha_i = (i - z) n for z <= i <= t, flat afterwards
        self.assertEqual(message_lower_bound([0, 0, 2, 4, 4], 3, 1, 4), 2)
        self.assertEqual(message_lower_bound({1: 0, 2: 2, 3: 2}, 2, 1, 3), 2)

    def test_fractional(self):
        bound = message_lower_bound({1: 0, 2: Fraction(3, 2), 3: 2}, 2, 1, 3)
        self.assertEqual(bound, 1)

    def test_missing_size(self):
        with self.assertRaises(UsageError):
            message_lower_bound({1: 0, 2: 2}, 3, 1, 4)
        with self.assertRaises(ParameterError):
            message_lower_bound([0, 0], 1, 1, 2)

if __name__ == '__main__':
    unittest.main()

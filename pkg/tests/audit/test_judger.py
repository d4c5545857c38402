import os
import unittest
from fractions import Fraction

from pfstore.audit import audit, check_security, check_symmetry, enumerate_strategy
from pfstore.audit.distribution import ProductDistribution
from pfstore.fields import get_field
from pfstore.storage import StorageParams, UserParams
from pfstore.utils.utils import subsets


class TestSingleUserAudit(unittest.TestCase):
    ''' q=4, L=3, t=2, z=1, n=1
    '''

    @classmethod
    def setUpClass(cls):
        cls.params = StorageParams.single(3, 2, 1, 1, get_field(2))
        cls.report = audit(cls.params)

    def test_passes(self):
        self.assertTrue(self.report.passed, self.report.failures())
        self.assertEqual(self.report.strategy_id, 'ramp-otp')

    def test_security_is_exactly_zero(self):
        verdicts = self.report.security_verdicts[1]
        self.assertEqual(sorted(verdicts), [(), (1,), (2,), (3,)])
        for subset in verdicts:
            self.assertEqual(self.report.security[1][subset], Fraction(0))
            self.assertTrue(verdicts[subset])

    def test_two_keys_reveal_the_file(self):
        self.assertEqual(self.report.file_entropy[1], 2)
        for subset in subsets([1, 2, 3], 2):
            self.assertEqual(self.report.security[1][subset], 2)
        self.assertEqual(self.report.security[1][(1, 2, 3)], 2)

    def test_alpha_profile(self):
        self.assertEqual(self.report.alpha_profile(1), {0: 0, 1: 0, 2: 2, 3: 2})
        self.assertEqual(self.report.alpha_profile(1), self.report.predicted_profile(1))

    def test_checks_named(self):
        names = [check.name for check in self.report.checks]
        self.assertIn('alpha-profile[1]', names)
        self.assertIn('message-lower-bound[1]', names)
        self.assertIn('optimal-storage[user=None, server=3]', names)
        self.assertIn('converse-randomness[user=1, server=None]', names)

    def test_to_dict(self):
        data = self.report.to_dict()
        self.assertTrue(data['passed'])
        self.assertEqual(data['failures'], [])
        security = data['users']['1']['security']
        self.assertEqual(len(security), 8)
        self.assertEqual(security[0], {'subset': [], 'size': 0, 'leakage': '0/1', 'verdict': 'PASS'})
        self.assertEqual(security[-1]['verdict'], None)
        self.assertEqual(data['users']['1']['file_entropy'], '2/1')


class TestPartialLeakage(unittest.TestCase):
    ''' q=4, L=4, t=3, z=1, n=1: a file of two symbols
    '''

    @classmethod
    def setUpClass(cls):
        cls.params = StorageParams.single(4, 3, 1, 1, get_field(2))
        cls.report = audit(cls.params)

    def test_passes(self):
        self.assertTrue(self.report.passed, self.report.failures())

    def test_profile(self):
        self.assertEqual(self.report.file_entropy[1], 4)
        self.assertEqual(self.report.alpha_profile(1), {0: 0, 1: 0, 2: 2, 3: 4, 4: 4})

    def test_recoverability(self):
        verdicts = self.report.recoverability[1]
        self.assertEqual(len(verdicts), 15)
        for subset, verdict in verdicts.items():
            self.assertTrue(verdict.ok, subset)
            if len(subset) == 2:
                self.assertEqual(verdict.conditional_entropy, 2)
            if len(subset) >= 3:
                self.assertEqual(verdict.conditional_entropy, 0)
        self.assertEqual(verdicts[(4,)].conditional_entropy, 4)

    def test_symmetry(self):
        self.assertTrue(self.report.symmetry.ok)
        for size in range(5):
            values = {v for u, v in self.report.security[1].items() if len(u) == size}
            self.assertEqual(len(values), 1)

    def test_asymmetric_pad_is_flagged(self):
        report = audit(self.params, 'asymmetric-otp')
        self.assertFalse(report.passed)
        self.assertFalse(report.symmetry.ok)
        self.assertIn((1, 'security', 1), report.symmetry.violations)
        self.assertEqual(report.security[1][(1,)], 0)
        self.assertEqual(report.security[1][(2,)], 2)
        self.assertIn('security[user=1, servers=[3]]', report.failures())
        self.assertNotIn('security[user=1, servers=[1]]', report.failures())


class TestSabotage(unittest.TestCase):

    def setUp(self):
        self.params = StorageParams.single(3, 2, 1, 1, get_field(2))

    def test_missing_pad_leaks_everything(self):
        report = audit(self.params, 'no-otp')
        self.assertFalse(report.passed)
        self.assertEqual(report.security[1][()], 2)
        self.assertIn('security[user=1, servers=[]]', report.failures())
        # without keys the shares alone still follow the ramp profile
        self.assertEqual(report.alpha_profile(1), {0: 0, 1: 0, 2: 2, 3: 2})

    def test_double_randomness_is_only_suboptimal(self):
        report = audit(self.params, 'double-randomness')
        self.assertEqual(report.failures(), ['optimal-randomness[user=1, server=None]'])

    def test_security_without_full_audit(self):
        dist = enumerate_strategy(self.params, 'no-otp')
        report = check_security(dist, self.params)
        self.assertTrue(all(v == 2 for v in report.security[1].values()))
        self.assertTrue(check_symmetry(report).ok)


class TestMultiUserAudit(unittest.TestCase):
    ''' (n, t, z) = (1, 2, 1) and (2, 2, 1) on L=2 servers over GF(2), 4096 joint runs
    '''

    @classmethod
    def setUpClass(cls):
        users = [UserParams(1, 2, 1, 1), UserParams(2, 2, 1, 2)]
        cls.params = StorageParams(users, 2, get_field(1))
        cls.report = audit(cls.params)

    def test_passes(self):
        self.assertTrue(self.report.passed, self.report.failures())

    def test_security_per_user(self):
        for user_id in (1, 2):
            self.assertEqual(len(self.report.security_verdicts[user_id]), 3)
            for subset, ok in self.report.security_verdicts[user_id].items():
                self.assertTrue(ok)
                self.assertEqual(self.report.security[user_id][subset], 0)
            # every key of every user opens both files
            self.assertEqual(self.report.security[user_id][(1, 2)], 3)

    def test_storage_optimum(self):
        names = {check.name: check for check in self.report.checks}
        for server_id in (1, 2):
            check = names['optimal-storage[user=None, server={}]'.format(server_id)]
            self.assertTrue(check.ok)
            self.assertIn('optimum 3', check.detail)


class TestProtectedFiles(unittest.TestCase):
    ''' (n, t, z) = (1, 2, 1) and (1, 3, 2) on L=3 servers over GF(4)

    The factors come from single-user enumerations; the cross-user check of
    the full joint space is TestFullMultiUserAudit.
    '''

    @classmethod
    def setUpClass(cls):
        gf4 = get_field(2)
        users = [UserParams(1, 2, 1, 1), UserParams(2, 3, 2, 1)]
        cls.params = StorageParams(users, 3, gf4)
        factors = [enumerate_strategy(StorageParams([user], 3, gf4)) for user in users]
        cls.report = check_security(ProductDistribution(factors), cls.params)

    def test_security_per_user(self):
        self.assertEqual(len(self.report.security_verdicts[1]), 4)
        self.assertEqual(len(self.report.security_verdicts[2]), 7)
        for user_id in (1, 2):
            for subset, ok in self.report.security_verdicts[user_id].items():
                self.assertTrue(ok)
                self.assertEqual(self.report.security[user_id][subset], 0)

    def test_protected_files(self):
        # user 1 tolerates fewer colluders, so two keys expose its file but not user 2's
        self.assertEqual(self.report.security[1][(1, 2)], 2)
        self.assertEqual(self.report.security[2][(1, 2)], 0)
        self.assertEqual(self.report.security[2][(1, 2, 3)], 2)


@unittest.skipUnless(os.environ.get('PFSTORE_FULL_AUDIT'), 'visits 4^11 joint states; set PFSTORE_FULL_AUDIT=1')
class TestFullMultiUserAudit(unittest.TestCase):
    ''' The two users of TestProtectedFiles through the full joint enumeration
    '''

    @classmethod
    def setUpClass(cls):
        users = [UserParams(1, 2, 1, 1), UserParams(2, 3, 2, 1)]
        cls.params = StorageParams(users, 3, get_field(2))
        cls.report = audit(cls.params)

    def test_passes(self):
        self.assertTrue(self.report.passed, self.report.failures())
        self.assertEqual(self.report.security[1][(1, 2)], 2)
        self.assertEqual(self.report.security[2][(1, 2)], 0)

    def test_storage_optimum(self):
        names = {check.name: check for check in self.report.checks}
        for server_id in (1, 2, 3):
            self.assertIn('optimum 4', names['optimal-storage[user=None, server={}]'.format(server_id)].detail)

if __name__ == '__main__':
    unittest.main()

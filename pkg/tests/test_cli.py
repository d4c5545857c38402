import hashlib
import json
import os
import unittest

from click.testing import CliRunner

from pfstore.cli import cli, key_path, message_path


class TestCli(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(cli, [str(a) for a in args])

    def keygen(self, n=8, L=3, seed=1):
        return self.invoke('keygen', '-L', L, '--n', n, '--seed', seed, '--out', 'keys')

    def test_store_round_trip(self):
        with self.runner.isolated_filesystem():
            with open('file.bin', 'wb') as f:
                f.write(b'hello!')
            result = self.keygen()
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertTrue(os.path.exists(key_path('keys', 1, 3)))

            result = self.invoke('store', 'file.bin', '--keys', 'keys', '-L', 3, '--t', 2, '--z', 1,
                                 '--seed', 2, '--out', 'msgs', '--report', 'report.json')
            self.assertEqual(result.exit_code, 0, result.output)
            with open('report.json') as f:
                report = json.load(f)
            self.assertEqual(report['pad_count'], 2)
            self.assertEqual(report['measured']['users']['1']['file_bits'], 64)
            self.assertTrue(all(v['status'] in ('equal', 'capacity-not-used') for v in report['verdicts']))
            self.assertTrue(os.path.exists(key_path('keys', 1, 1) + '.used'))

            for l in (1, 2, 3):
                result = self.invoke('ingest', message_path('msgs', 1, l), '--key', key_path('keys', 1, l),
                                     '--out', 'share{}.pfs'.format(l))
                self.assertEqual(result.exit_code, 0, result.output)

            result = self.invoke('reconstruct', 'share3.pfs', 'share1.pfs', '--out', 'restored.bin')
            self.assertEqual(result.exit_code, 0, result.output)
            with open('restored.bin', 'rb') as f:
                self.assertEqual(f.read(), b'hello!')
            self.assertIn(hashlib.sha256(b'hello!').hexdigest(), result.output)

            result = self.invoke('reconstruct', 'share2.pfs', '--out', 'restored.bin')
            self.assertEqual(result.exit_code, 3)

    def test_key_reuse_is_refused(self):
        with self.runner.isolated_filesystem():
            with open('file.bin', 'wb') as f:
                f.write(b'once')
            self.keygen()
            args = ('store', 'file.bin', '--keys', 'keys', '-L', 3, '--t', 2, '--z', 1, '--out', 'msgs',
                    '--report', 'report.json')
            self.assertEqual(self.invoke(*args).exit_code, 0)
            result = self.invoke(*args)
            self.assertEqual(result.exit_code, 4)
            self.assertIn('.used', result.output)

    def test_store_errors(self):
        with self.runner.isolated_filesystem():
            with open('big.bin', 'wb') as f:
                f.write(b'123456789')
            result = self.invoke('store', 'big.bin', '--keys', 'keys', '-L', 3, '--t', 2, '--z', 1,
                                 '--out', 'msgs')
            self.assertEqual(result.exit_code, 2)
            self.assertIn('key_u1_s1.pfk', result.output)

            self.keygen()
            result = self.invoke('store', 'big.bin', '--keys', 'keys', '-L', 3, '--t', 2, '--z', 1,
                                 '--out', 'msgs')
            self.assertEqual(result.exit_code, 3)
            self.assertIn('n(t-z)', result.output)
            self.assertFalse(os.path.exists(key_path('keys', 1, 1) + '.used'))

            result = self.invoke('store', 'big.bin', '--keys', 'keys', '-L', 3, '--t', 3, '--z', 3,
                                 '--out', 'msgs')
            self.assertEqual(result.exit_code, 2)

    def test_ingest_errors(self):
        with self.runner.isolated_filesystem():
            with open('file.bin', 'wb') as f:
                f.write(b'abc')
            self.keygen()
            self.invoke('store', 'file.bin', '--keys', 'keys', '-L', 3, '--t', 2, '--z', 1,
                        '--out', 'msgs', '--report', 'report.json')
            result = self.invoke('ingest', message_path('msgs', 1, 1), '--key', key_path('keys', 1, 2),
                                 '--out', 'share.pfs')
            self.assertEqual(result.exit_code, 6)

            with open('junk.pfm', 'wb') as f:
                f.write(b'JUNK' + bytes(40))
            result = self.invoke('ingest', 'junk.pfm', '--key', key_path('keys', 1, 1), '--out', 'share.pfs')
            self.assertEqual(result.exit_code, 6)
            self.assertIn('offset 0', result.output)

    def test_audit(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('audit', '--out', 'audit.json', '--log-dir', 'logs')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('PASS', result.output)
            with open('audit.json') as f:
                document = json.load(f)
            self.assertTrue(document['passed'])
            self.assertEqual(document['users']['1']['file_entropy'], '2/1')
            self.assertTrue(os.path.exists(os.path.join('logs', 'leakage.csv')))

    def test_audit_broken(self):
        result = self.invoke('audit', '--break', 'no-otp')
        self.assertEqual(result.exit_code, 5)
        self.assertIn('FAIL', result.output)

    def test_audit_too_large(self):
        result = self.invoke('audit', '--add-user', 3, 2, 2)
        self.assertEqual(result.exit_code, 2)
        self.assertIn('guard rail', result.output)

    def test_bounds(self):
        result = self.invoke('bounds', '--n', 8, '--L', 5, '--t', '2..3', '--z', 1, '--json')
        self.assertEqual(result.exit_code, 0, result.output)
        rows = json.loads(result.output)
        self.assertEqual([(r['t'], r['file_bits']) for r in rows], [(2, 8), (3, 16)])

        result = self.invoke('bounds', '--n', 8, '--L', 5, '--t', '3', '--z', '1,2')
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(len(result.output.strip().splitlines()), 3)

        result = self.invoke('bounds', '--n', 'x', '--L', 5, '--t', 3, '--z', 1)
        self.assertEqual(result.exit_code, 2)

    def test_demo(self):
        with self.runner.isolated_filesystem():
            scenario = {'field_m': 2, 'L': 3, 'seed': 3,
                        'users': [{'user_id': 1, 't': 3, 'z': 1, 'n': 1}],
                        'collusions': [{'user': 1, 'servers': [1, 2]}]}
            with open('scenario.json', 'w') as f:
                json.dump(scenario, f)
            result = self.invoke('demo', 'scenario.json', '--persist', 'state')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('H(F|view) = 2/1 of 4/1 bits', result.output)
            self.assertTrue(os.path.exists(os.path.join('state', 'server_1', 'keys.bin')))

if __name__ == '__main__':
    unittest.main()

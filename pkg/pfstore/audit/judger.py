''' Verdicts on an enumerated strategy: security, recoverability, symmetry
'''
from collections import namedtuple
from fractions import Fraction

from pfstore.audit.distribution import (entropy, mutual_information, conditional_entropy,
                                        is_uniform)
from pfstore.audit.enumerator import (enumerate_strategy, resolve_strategy, sample_report,
                                      MAX_ATOMS)
from pfstore.bounds.optima import (compute_optima, verify_achievement, check_converse,
                                   message_lower_bound)
from pfstore.sharing.ramp import ramp_leakage_profile
from pfstore.utils.logger import log
from pfstore.utils.utils import all_subsets, format_bits

Check = namedtuple('Check', ['name', 'ok', 'detail'])
RecoverabilityVerdict = namedtuple('RecoverabilityVerdict', ['subset', 'conditional_entropy',
                                                             'expected', 'ok'])
SymmetryVerdict = namedtuple('SymmetryVerdict', ['ok', 'violations'])


class LeakageReport(object):
    ''' Exact leakage tables of one strategy, and every verdict drawn from them

    security[d][U] is I(F_Z; M, K_U): the files of every user whose collusion
    threshold is at least z_d, against all public messages and the keys of
    servers U. alpha[d][U] is I(F_d; M_{d,U}, K_{d,U}).
    '''

    def __init__(self, params, strategy_id='ramp-otp'):
        self.params = params
        self.strategy_id = strategy_id
        self.file_entropy = {}
        self.security = {}
        self.alpha = {}
        self.security_verdicts = {}
        self.recoverability = {}
        self.symmetry = None
        self.checks = []

    def alpha_profile(self, user_id):
        ''' Subset size -> common alpha value, None where sizes disagree
        '''
        by_size = {}
        for subset, value in self.alpha[user_id].items():
            by_size.setdefault(len(subset), set()).add(value)
        return {size: (values.pop() if len(values) == 1 else None) for size, values in sorted(by_size.items())}

    def predicted_profile(self, user_id):
        ramp = self.params.ramp(user_id)
        n_s = self.params.capacity_symbols(user_id)
        return {i: Fraction(ramp_leakage_profile(ramp, i, n_s)) for i in range(self.params.L + 1)}

    def failures(self):
        failed = []
        for user_id, verdicts in sorted(self.security_verdicts.items()):
            failed += ['security[user={}, servers={}]'.format(user_id, list(u))
                       for u, ok in sorted(verdicts.items()) if not ok]
        for user_id, verdicts in sorted(self.recoverability.items()):
            failed += ['recoverability[user={}, servers={}]'.format(user_id, list(t))
                       for t, v in sorted(verdicts.items()) if not v.ok]
        if self.symmetry is not None and not self.symmetry.ok:
            failed.append('symmetry')
        failed += [check.name for check in self.checks if not check.ok]
        return failed

    @property
    def passed(self):
        return not self.failures()

    def to_dict(self):
        users = {}
        for user_id in self.params.user_ids:
            verdicts = self.security_verdicts.get(user_id, {})
            predicted = self.predicted_profile(user_id)
            users[str(user_id)] = {
                'file_entropy': format_bits(self.file_entropy[user_id]),
                'security': [{
                    'subset': list(u), 'size': len(u), 'leakage': format_bits(v),
                    'verdict': None if u not in verdicts else ('PASS' if verdicts[u] else 'FAIL'),
                } for u, v in self.security[user_id].items()],
                'alpha': [{'subset': list(u), 'size': len(u), 'alpha': format_bits(v)}
                          for u, v in self.alpha[user_id].items()],
                'alpha_profile': [{
                    'size': i, 'measured': None if v is None else format_bits(v),
                    'predicted': format_bits(predicted[i]),
                } for i, v in self.alpha_profile(user_id).items()],
                'recoverability': [{
                    'subset': list(r.subset), 'size': len(r.subset),
                    'conditional_entropy': format_bits(r.conditional_entropy),
                    'expected': format_bits(r.expected), 'ok': r.ok,
                } for r in self.recoverability.get(user_id, {}).values()],
            }
        return {
            'strategy': self.strategy_id,
            'parameters': self.params.to_dict(),
            'passed': self.passed,
            'failures': self.failures(),
            'users': users,
            'symmetry': None if self.symmetry is None else {
                'ok': self.symmetry.ok, 'violations': [list(v) for v in self.symmetry.violations]},
            'checks': [{'name': c.name, 'ok': c.ok, 'detail': c.detail} for c in self.checks],
        }


def _messages(params):
    return [('M', d, l) for d in params.user_ids for l in params.server_ids]


def check_security(dist, params):
    ''' Compute both leakage tables and the security verdict for every |U| <= z_d

    Returns:
        (LeakageReport): security tables, alpha tables and file entropies filled in
    '''
    report = LeakageReport(params)
    messages = _messages(params)
    for user_id in params.user_ids:
        z_d = params.user(user_id).z
        protected = [('F', i) for i in params.user_ids if params.user(i).z >= z_d]
        report.file_entropy[user_id] = entropy(dist, [('F', user_id)])
        report.security[user_id] = {}
        report.alpha[user_id] = {}
        report.security_verdicts[user_id] = {}
        for subset in all_subsets(params.server_ids):
            keys = [('K', i, l) for i in params.user_ids for l in subset]
            leakage = mutual_information(dist, protected, messages + keys)
            report.security[user_id][subset] = leakage
            own = [('M', user_id, l) for l in subset] + [('K', user_id, l) for l in subset]
            report.alpha[user_id][subset] = mutual_information(dist, [('F', user_id)], own)
            if len(subset) <= z_d:
                report.security_verdicts[user_id][subset] = leakage == 0
    return report


def check_recoverability(dist, params):
    ''' H(F_d | S_T) for every non-empty server set T

    Sets of at least t_d servers must leave no uncertainty; smaller sets
    must match the ramp profile (t - |T|)/(t - z) H(F), clipped to [0, H(F)].

    Returns:
        (dict): user id -> {T: RecoverabilityVerdict}
    '''
    verdicts = {}
    for user_id in params.user_ids:
        user = params.user(user_id)
        file_entropy = entropy(dist, [('F', user_id)])
        verdicts[user_id] = {}
        for subset in all_subsets(params.server_ids):
            if not subset:
                continue
            remaining = conditional_entropy(dist, [('F', user_id)], [('S', user_id, l) for l in subset])
            share = min(Fraction(1), max(Fraction(0), Fraction(user.t - len(subset), user.t - user.z)))
            expected = share * file_entropy
            verdicts[user_id][subset] = RecoverabilityVerdict(subset, remaining, expected, remaining == expected)
    return verdicts


def check_symmetry(report):
    ''' Equal-size server sets must leak equal amounts, in both tables

    Returns:
        (SymmetryVerdict): violations are (user id, table, subset size)
    '''
    violations = []
    for table_name in ('security', 'alpha'):
        table = getattr(report, table_name)
        for user_id in sorted(table):
            by_size = {}
            for subset, value in table[user_id].items():
                by_size.setdefault(len(subset), set()).add(value)
            violations += [(user_id, table_name, size) for size, values in sorted(by_size.items())
                           if len(values) > 1]
    report.symmetry = SymmetryVerdict(not violations, violations)
    return report.symmetry


def _profile_checks(report, dist, params, resources):
    order = params.spec.order
    checks = []
    for user_id in params.user_ids:
        user = params.user(user_id)
        alpha = report.alpha[user_id]
        monotone = all(alpha[tuple(sorted(u + (l,)))] >= v
                       for u, v in alpha.items() for l in params.server_ids if l not in u)
        checks.append(Check('alpha-monotone[{}]'.format(user_id), monotone, ''))
        at_z = [v for u, v in alpha.items() if len(u) == user.z]
        checks.append(Check('alpha-zero-at-z[{}]'.format(user_id), all(v == 0 for v in at_z), ''))
        at_t = [v for u, v in alpha.items() if len(u) == user.t]
        checks.append(Check('alpha-full-at-t[{}]'.format(user_id),
                            all(v == report.file_entropy[user_id] for v in at_t),
                            'H(F)={}'.format(format_bits(report.file_entropy[user_id]))))

        profile = report.alpha_profile(user_id)
        if all(v is not None for v in profile.values()):
            predicted = report.predicted_profile(user_id)
            checks.append(Check('alpha-profile[{}]'.format(user_id), profile == predicted,
                                ' '.join(format_bits(profile[i]) for i in sorted(profile))))
            floor = message_lower_bound(profile, user.t, user.z, params.L)
            smallest = min(resources.message_bits[user_id].values())
            checks.append(Check('message-lower-bound[{}]'.format(user_id), smallest >= floor,
                                'bound {} measured {}'.format(format_bits(floor), smallest)))

        for server_id in params.server_ids:
            label = ('M', user_id, server_id)
            measured = resources.message_bits[user_id][server_id]
            checks.append(Check('message-uniform[{},{}]'.format(user_id, server_id),
                                is_uniform(dist, [label], order), ''))
            checks.append(Check('message-entropy[{},{}]'.format(user_id, server_id),
                                entropy(dist, [label]) == measured,
                                'r(M)={} bits'.format(measured)))

    for verdict in verify_achievement(resources, compute_optima(params)):
        checks.append(Check('optimal-{}[user={}, server={}]'.format(verdict.quantity, verdict.user_id,
                                                                    verdict.server_id),
                            verdict.ok, '{} measured {} optimum {}'.format(
                                verdict.status, verdict.measured, verdict.optimum)))
    for verdict in check_converse(resources, params):
        checks.append(Check('converse-{}[user={}, server={}]'.format(verdict.quantity, verdict.user_id,
                                                                     verdict.server_id),
                            verdict.ok, 'measured {} bound {}'.format(verdict.measured, verdict.optimum)))
    return checks


def audit(params, strategy='ramp-otp', max_atoms=MAX_ATOMS):
    ''' Enumerate a strategy and run every check on it

    Args:
        params (StorageParams): tiny-scale parameters
        strategy (str or PrivateStorageProtocol): the strategy under audit
        max_atoms (int): enumeration guard rail

    Returns:
        (LeakageReport): with report.passed False on any failed verdict
    '''
    strategy = resolve_strategy(strategy)
    dist = enumerate_strategy(params, strategy, max_atoms=max_atoms)
    report = check_security(dist, params)
    report.strategy_id = strategy.strategy_id
    report.recoverability = check_recoverability(dist, params)
    check_symmetry(report)
    report.checks = _profile_checks(report, dist, params, sample_report(params, strategy))
    if report.passed:
        log.info('audit of %s passed', strategy.strategy_id)
    else:
        log.info('audit of %s failed: %s', strategy.strategy_id, ', '.join(report.failures()))
    return report

''' Optimal resources of private file storage and the matching converse checks

    With n key bits per server, a (t, z) strategy stores at most n(t-z) file
    bits, and at that rate needs at least nz bits of local randomness, n bits
    of public message and n bits of storage per server. All quantities are
    in bits.
'''
from dataclasses import dataclass
from fractions import Fraction

from pfstore.utils.pfstore_error import ParameterError, UsageError


@dataclass(frozen=True)
class UserOptima:
    user_id: int
    file_bits: int
    randomness_bits: int
    message_bits: int
    message_sum_bits: int


class OptimaTable(object):
    ''' Optimal resources per user, and per server storage
    '''

    def __init__(self, field_m, L, users, storage_bits):
        self.field_m = field_m
        self.L = L
        self.users = dict(users)
        self.storage_bits = storage_bits

    def row(self, user_id):
        ''' (file, randomness, message per server, message sum, storage per server)
        '''
        user = self.users[user_id]
        return (user.file_bits, user.randomness_bits, user.message_bits,
                user.message_sum_bits, self.storage_bits)

    def to_dict(self):
        return {
            'field_m': self.field_m,
            'L': self.L,
            'users': {str(u): {
                'file_bits': o.file_bits,
                'randomness_bits': o.randomness_bits,
                'message_bits': o.message_bits,
                'message_sum_bits': o.message_sum_bits,
            } for u, o in sorted(self.users.items())},
            'storage_bits': self.storage_bits,
        }


@dataclass(frozen=True)
class Verdict:
    ''' One measured quantity against its optimum or bound

    status is one of 'equal', 'suboptimal', 'violation', 'capacity-not-used'
    for achievement checks and 'holds' or 'violated' for converse checks.
    '''
    quantity: str
    user_id: object
    server_id: object
    measured: object
    optimum: object
    status: str

    @property
    def ok(self):
        return self.status in ('equal', 'holds', 'capacity-not-used')

    def to_dict(self):
        return {
            'quantity': self.quantity,
            'user_id': self.user_id,
            'server_id': self.server_id,
            'measured': str(self.measured),
            'optimum': str(self.optimum),
            'status': self.status,
        }


@dataclass(frozen=True)
class FrontierRow:
    n_bits: int
    L: int
    t: int
    z: int
    file_bits: int
    randomness_bits: int
    message_bits: int
    message_sum_bits: int
    storage_bits: int

    def as_tuple(self):
        return (self.file_bits, self.randomness_bits, self.message_bits,
                self.message_sum_bits, self.storage_bits)


def compute_optima(params):
    ''' Optimal resources for every user of the parameters

    Args:
        params (StorageParams): the parameters

    Returns:
        (OptimaTable): file n(t-z), randomness nz, message n, message sum Ln
            per user, and storage sum_d n_d per server, in bits
    '''
    m, L = params.spec.m, params.L
    users = {}
    for user in params.users:
        n_bits = user.n_symbols * m
        users[user.user_id] = UserOptima(user.user_id, n_bits * (user.t - user.z), n_bits * user.z,
                                         n_bits, L * n_bits)
    storage = sum(user.n_symbols * m for user in params.users)
    return OptimaTable(m, L, users, storage)


def _compare(quantity, user_id, server_id, measured, optimum, higher_is_worse=True):
    if measured == optimum:
        status = 'equal'
    elif (measured > optimum) == higher_is_worse:
        status = 'suboptimal'
    else:
        status = 'violation'
    return Verdict(quantity, user_id, server_id, measured, optimum, status)


def verify_achievement(report, table):
    ''' Compare a measured ResourceReport with the optima

    A measured value better than the optimum is a 'violation': it can only
    come from a measurement bug. A file shorter than capacity is reported
    as 'capacity-not-used', which is not a failure.

    Returns:
        (list): one Verdict per quantity
    '''
    if report.field_m != table.field_m:
        raise UsageError('Report over GF(2^{}) checked against optima over GF(2^{})'.format(
            report.field_m, table.field_m))
    if sorted(report.user_ids) != sorted(table.users):
        raise UsageError('Report covers users {}, optima cover users {}'.format(
            report.user_ids, sorted(table.users)))
    servers = list(range(1, table.L + 1))
    if sorted(report.storage_bits) != servers:
        raise UsageError('Report covers servers {}, optima cover servers {}'.format(
            sorted(report.storage_bits), servers))

    verdicts = []
    for user_id in report.user_ids:
        optimum = table.users[user_id]
        file_bits = report.file_bits[user_id]
        if file_bits == optimum.file_bits and report.payload_bits[user_id] < file_bits:
            verdicts.append(Verdict('file', user_id, None, report.payload_bits[user_id],
                                    optimum.file_bits, 'capacity-not-used'))
        verdicts.append(_compare('file', user_id, None, file_bits, optimum.file_bits, higher_is_worse=False))
        verdicts.append(_compare('randomness', user_id, None, report.randomness_bits[user_id],
                                 optimum.randomness_bits))
        for server_id in servers:
            verdicts.append(_compare('message', user_id, server_id,
                                     report.message_bits[user_id].get(server_id, 0), optimum.message_bits))
        verdicts.append(_compare('message_sum', user_id, None, report.message_sum_bits(user_id),
                                 optimum.message_sum_bits))
    for server_id in servers:
        verdicts.append(_compare('storage', None, server_id, report.storage_bits[server_id],
                                 table.storage_bits))
    return verdicts


def capacity_frontier(n_bits, L, t_values, z_values):
    ''' Optimal resources over a sweep of thresholds

    Args:
        n_bits (int or list): key bits per server
        L (int): number of servers
        t_values (list): recovery thresholds, each in [1, L]
        z_values (list): collusion thresholds; pairs with z >= t are skipped

    Returns:
        (list): FrontierRow per (n, t, z), in sweep order
    '''
    n_values = [n_bits] if isinstance(n_bits, int) else list(n_bits)
    if any(n < 1 for n in n_values):
        raise ParameterError('Key length must be positive, got {}'.format(n_values))
    for t in t_values:
        if not 1 <= t <= L:
            raise ParameterError('Recovery threshold t={} must lie in [1, L={}]'.format(t, L))
    for z in z_values:
        if z < 1:
            raise ParameterError('Collusion threshold z={} must be at least 1'.format(z))
    rows = [FrontierRow(n, L, t, z, n * (t - z), n * z, n, L * n, n)
            for n in n_values for t in t_values for z in z_values if z < t]
    if not rows:
        raise ParameterError('No pair in t={} and z={} satisfies 1 <= z <= t-1'.format(
            list(t_values), list(z_values)))
    return rows


def message_lower_bound(alphas, t, z, L):
    ''' Per-server public message lower bound from a symmetric leakage profile

    Args:
        alphas (dict or list): subset size i -> leakage alpha_i in bits, for
            i from z up to min(t + 1, L)
        t (int): recovery threshold
        z (int): collusion threshold
        L (int): number of servers

    Returns:
        (Fraction): sum over i in [z, t-1] of [2 a(i+1) - a(i) - a(i+2)]^+,
            with a(L+1) = a(L)
    '''
    if not 1 <= z < t <= L:
        raise ParameterError('Need 1 <= z < t <= L, got z={}, t={}, L={}'.format(z, t, L))
    if not isinstance(alphas, dict):
        alphas = dict(enumerate(alphas))

    def a(i):
        i = min(i, L)
        if i not in alphas or alphas[i] is None:
            raise UsageError('Leakage profile lacks subset size {}'.format(i))
        return Fraction(alphas[i])

    return sum((max(Fraction(0), 2 * a(i + 1) - a(i) - a(i + 2)) for i in range(z, t)), Fraction(0))


def check_converse(report, params):
    ''' Check a measured report against the converse inequalities

    Returns:
        (list): Verdict per inequality, status 'holds' or 'violated'
    '''
    m = params.spec.m
    verdicts = []

    def bound(quantity, user_id, server_id, measured, limit, at_most=False):
        holds = measured <= limit if at_most else measured >= limit
        verdicts.append(Verdict(quantity, user_id, server_id, measured, limit,
                                'holds' if holds else 'violated'))

    storage_floor = Fraction(0)
    for user in params.users:
        d, k = user.user_id, user.t - user.z
        file_bits = report.file_bits[d]
        bound('file', d, None, file_bits, user.n_symbols * m * k, at_most=True)
        bound('randomness', d, None, report.randomness_bits[d], Fraction(user.z * file_bits, k))
        bound('message_sum', d, None, report.message_sum_bits(d), Fraction(params.L * file_bits, k))
        for server_id in params.server_ids:
            bound('message', d, server_id, report.message_bits[d].get(server_id, 0), Fraction(file_bits, k))
        storage_floor += Fraction(file_bits, k)
    for server_id in params.server_ids:
        bound('storage', None, server_id, report.storage_bits.get(server_id, 0), storage_floor)
    return verdicts

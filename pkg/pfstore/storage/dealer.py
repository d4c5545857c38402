''' The key dealer: per-user one-time pads K_1..K_L and their single use
'''
import numpy as np

from pfstore.utils import seeding
from pfstore.utils.logger import log
from pfstore.utils.pfstore_error import (ParameterError, UsageError,
                                         KeyNotFoundError, KeyReuseError)


class KeyRing:
    ''' One user's keys, one per server, each usable once
    '''

    def __init__(self, user_id, entries, spec, epoch=0):
        ''' Initialize a key ring

        Args:
            user_id (int): id of the owning user
            entries (dict): server id -> key symbols
            spec (FieldSpec): the field the symbols live in
            epoch (int): how many times the ring was re-keyed
        '''
        self.user_id = user_id
        self.spec = spec
        self.epoch = epoch
        self.entries = {int(l): spec.check_symbols(key) for l, key in entries.items()}
        lengths = {key.size for key in self.entries.values()}
        if len(lengths) > 1:
            raise ParameterError('Keys of user {} have unequal lengths {}'.format(user_id, sorted(lengths)))
        self.consumed = {l: False for l in self.entries}

    @property
    def n_symbols(self):
        return next(iter(self.entries.values())).size if self.entries else 0

    @property
    def server_ids(self):
        return sorted(self.entries)

    def is_consumed(self, server_id):
        return self.consumed.get(server_id, False)

    def distribute(self, server_id):
        ''' Copy of K_l for installation at server l during setup

        The copy is not an encryption handle and does not consume the key.
        '''
        if server_id not in self.entries:
            raise KeyNotFoundError('User {} holds no key for server {}'.format(self.user_id, server_id))
        return self.entries[server_id].copy()

    def check_ready(self, server_ids, n_symbols):
        ''' Raise unless every listed key exists, is unused and has n_symbols symbols
        '''
        for l in server_ids:
            if l not in self.entries:
                raise KeyNotFoundError('User {} holds no key for server {}'.format(self.user_id, l))
            if self.consumed[l]:
                raise KeyReuseError('Key of user {} for server {} was already used'.format(self.user_id, l))
            if self.entries[l].size != n_symbols:
                raise ParameterError('Key of user {} for server {} holds {} symbols, expected {}'.format(
                    self.user_id, l, self.entries[l].size, n_symbols))


def keygen(user_id, L, n_symbols, spec, seed=None, epoch=0):
    ''' Draw L independent uniform keys of n_symbols symbols each

    Args:
        user_id (int): owning user
        L (int): number of servers
        n_symbols (int): n, the key length in symbols
        spec (FieldSpec): the field
        seed (Optional[int]): None draws from system entropy, otherwise the
            keys are a deterministic function of (seed, user_id, epoch)
        epoch (int): key generation counter

    Returns:
        (KeyRing): a ring with every key unused
    '''
    if L < 1:
        raise ParameterError('Need at least one server, got L={}'.format(L))
    if n_symbols < 1:
        raise ParameterError('Key length must be positive, got n={}'.format(n_symbols))
    label = 'key|user={}|epoch={}'.format(user_id, epoch)
    stream = seeding.symbol_stream(seed, label, L * n_symbols, spec.order)
    entries = {l: stream[(l - 1) * n_symbols:l * n_symbols] for l in range(1, L + 1)}
    log.debug('generated %d keys of %d symbols for user %d (epoch %d)', L, n_symbols, user_id, epoch)
    return KeyRing(user_id, entries, spec, epoch)


def otp_apply(data, key):
    ''' Symbolwise field addition; the pad is its own inverse
    '''
    data = np.asarray(data, dtype=np.uint8)
    key = np.asarray(key, dtype=np.uint8)
    if data.shape != key.shape:
        raise UsageError('Pad length {} does not match data length {}'.format(key.size, data.size))
    return np.bitwise_xor(data, key)


def consume_key(ring, server_id):
    ''' Hand out K_l for encryption exactly once
    '''
    if server_id not in ring.entries:
        raise KeyNotFoundError('User {} holds no key for server {}'.format(ring.user_id, server_id))
    if ring.consumed[server_id]:
        raise KeyReuseError('Key of user {} for server {} was already used'.format(ring.user_id, server_id))
    ring.consumed[server_id] = True
    return ring.entries[server_id].copy()


def rekey(ring, seed=None):
    ''' Fresh keys for the next epoch, after a file was stored with this ring
    '''
    return keygen(ring.user_id, len(ring.entries), ring.n_symbols, ring.spec,
                  seed=seed, epoch=ring.epoch + 1)

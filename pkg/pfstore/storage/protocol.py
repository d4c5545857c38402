''' The private file storage strategy

    A user pads the file to n(t-z) symbols, ramp-encodes it into L shares of
    n symbols and sends M_l = H_l + K_l publicly to every server l. Server l
    keeps S_l = M_l + K_l = H_l and any t servers decode the file.
'''
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from pfstore.sharing.ramp import RampParams, RandomTape, ramp_encode, ramp_decode
from pfstore.storage.dealer import otp_apply, consume_key
from pfstore.storage.records import RecordHeader, PublicMessage
from pfstore.storage.server import server_ingest as _server_ingest
from pfstore.utils import seeding
from pfstore.utils.logger import log
from pfstore.utils.utils import bytes_to_symbols, symbols_to_bytes
from pfstore.utils.pfstore_error import (ParameterError, UsageError, CapacityError,
                                         CorruptionError, ProtocolError,
                                         InsufficientSharesError)


@dataclass(frozen=True)
class UserParams:
    user_id: int
    t: int
    z: int
    n_symbols: int


class StorageParams(object):
    ''' Users with their (t_d, z_d, n_d) over one pool of L servers and one field
    '''

    def __init__(self, users, L, spec):
        ''' Initialize and validate the parameters

        Args:
            users (list): UserParams, one per user
            L (int): number of servers
            spec (FieldSpec): the field shared by all users
        '''
        self.users = tuple(users)
        self.L = L
        self.spec = spec
        if not self.users:
            raise ParameterError('At least one user is required')
        self._by_id = {}
        self._ramps = {}
        for user in self.users:
            if user.user_id in self._by_id:
                raise ParameterError('User id {} appears twice'.format(user.user_id))
            if not 0 <= user.user_id <= 0xFFFF:
                raise ParameterError('User id {} does not fit in 16 bits'.format(user.user_id))
            if not 1 <= user.n_symbols < 1 << 32:
                raise ParameterError('Key length n={} of user {} must be positive'.format(
                    user.n_symbols, user.user_id))
            self._ramps[user.user_id] = RampParams(L, user.t, user.z, spec)
            self._by_id[user.user_id] = user

    @classmethod
    def single(cls, L, t, z, n_symbols, spec, user_id=1):
        return cls([UserParams(user_id, t, z, n_symbols)], L, spec)

    @property
    def user_ids(self):
        return [user.user_id for user in self.users]

    @property
    def server_ids(self):
        return list(range(1, self.L + 1))

    def user(self, user_id):
        if user_id not in self._by_id:
            raise UsageError('Unknown user {}, known users are {}'.format(user_id, self.user_ids))
        return self._by_id[user_id]

    def ramp(self, user_id):
        self.user(user_id)
        return self._ramps[user_id]

    def capacity_symbols(self, user_id):
        ''' n_d(t_d - z_d), the largest file user_id can store
        '''
        user = self.user(user_id)
        return user.n_symbols * (user.t - user.z)

    def header_for(self, user_id, server_id, plaintext_bits, pad_count):
        user = self.user(user_id)
        return RecordHeader(self.spec.m, user_id, server_id, user.t, user.z, self.L,
                            user.n_symbols, plaintext_bits, pad_count)

    def check_header(self, header):
        ''' Raise ProtocolError unless a record header fits these parameters
        '''
        if header.user_id not in self._by_id:
            raise ProtocolError('Record of unknown user {}'.format(header.user_id))
        user = self._by_id[header.user_id]
        expected = (self.spec.m, user.t, user.z, self.L, user.n_symbols)
        found = (header.m, header.t, header.z, header.L, header.n_symbols)
        if expected != found:
            raise ProtocolError('Record header (m, t, z, L, n) = {} does not match parameters {}'.format(
                found, expected))
        if not 1 <= header.server_id <= self.L:
            raise ProtocolError('Record of server {} outside [1, {}]'.format(header.server_id, self.L))

    def to_dict(self):
        return {
            'field_m': self.spec.m,
            'L': self.L,
            'users': [{'user_id': u.user_id, 't': u.t, 'z': u.z, 'n': u.n_symbols} for u in self.users],
        }

    def __repr__(self):
        return 'StorageParams({})'.format(self.to_dict())


class FileRecord(object):
    ''' A user's file F: bytes plus the number of meaningful bits
    '''

    def __init__(self, user_id, data, bit_length=None):
        data = bytes(data)
        if bit_length is None:
            bit_length = len(data) * 8
        if not 0 <= bit_length <= len(data) * 8:
            raise UsageError('Bit length {} does not fit in {} bytes'.format(bit_length, len(data)))
        self.user_id = user_id
        self.bit_length = bit_length
        # Canonical form: exactly ceil(bits/8) bytes, unused low bits zero
        self.data = symbols_to_bytes(bytes_to_symbols(data, bit_length, 1), bit_length, 1)

    @classmethod
    def from_symbols(cls, user_id, symbols, spec, bit_length=None):
        symbols = spec.check_symbols(symbols)
        if bit_length is None:
            bit_length = symbols.size * spec.m
        return cls(user_id, symbols_to_bytes(symbols, bit_length, spec.m), bit_length)

    def to_symbols(self, m):
        return bytes_to_symbols(self.data, self.bit_length, m)

    def pad(self, user, spec):
        ''' Symbols of the file padded to exactly n(t-z)

        Returns:
            (tuple): padded symbols and the pad count
        '''
        capacity = user.n_symbols * (user.t - user.z)
        if self.bit_length > capacity * spec.m:
            raise CapacityError(
                'File of {} bits exceeds the capacity n(t-z) = {}*({}-{}) = {} symbols of {} bits, '
                'i.e. {} bits'.format(self.bit_length, user.n_symbols, user.t, user.z, capacity,
                                      spec.m, capacity * spec.m))
        symbols = self.to_symbols(spec.m)
        pad_count = capacity - symbols.size
        if pad_count > 0xFFFF:
            raise ParameterError('Padding of {} symbols does not fit the 16-bit pad field'.format(pad_count))
        fill = np.full(pad_count, pad_count % spec.order, dtype=np.uint8)
        return np.concatenate([symbols, fill]), pad_count

    @classmethod
    def unpad(cls, user_id, symbols, header, spec):
        ''' Strip the recorded padding from decoded symbols
        '''
        symbols = np.asarray(symbols, dtype=np.uint8)
        used = symbols.size - header.pad_count
        if used < 0 or used != -(-header.plaintext_bits // spec.m):
            raise CorruptionError('Pad count {} is inconsistent with {} bits in {} symbols'.format(
                header.pad_count, header.plaintext_bits, symbols.size))
        if np.any(symbols[used:] != header.pad_count % spec.order):
            raise CorruptionError('Padding symbols of user {} are corrupted'.format(user_id))
        return cls.from_symbols(user_id, symbols[:used], spec, header.plaintext_bits)

    def __eq__(self, other):
        return (isinstance(other, FileRecord) and self.user_id == other.user_id
                and self.bit_length == other.bit_length and self.data == other.data)

    def __repr__(self):
        return 'FileRecord(user={}, bits={})'.format(self.user_id, self.bit_length)


class ResourceReport(object):
    ''' Resource usage measured from the objects a run actually produced
    '''

    def __init__(self, field_m):
        self.field_m = field_m
        self.file_bits = {}
        self.payload_bits = {}
        self.randomness_bits = {}
        self.message_bits = {}
        self.storage_bits = {}

    @property
    def user_ids(self):
        return sorted(self.file_bits)

    def add_user(self, user_id, file_bits, payload_bits, randomness_bits, message_bits):
        if user_id in self.file_bits:
            raise UsageError('Report already holds user {}'.format(user_id))
        self.file_bits[user_id] = int(file_bits)
        self.payload_bits[user_id] = int(payload_bits)
        self.randomness_bits[user_id] = int(randomness_bits)
        self.message_bits[user_id] = {l: int(bits) for l, bits in message_bits.items()}

    def add_storage(self, server_id, bits):
        self.storage_bits[server_id] = self.storage_bits.get(server_id, 0) + int(bits)

    def message_sum_bits(self, user_id):
        return sum(self.message_bits[user_id].values())

    def merge(self, other):
        if other.field_m != self.field_m:
            raise UsageError('Cannot merge reports over GF(2^{}) and GF(2^{})'.format(
                self.field_m, other.field_m))
        for user_id in other.user_ids:
            self.add_user(user_id, other.file_bits[user_id], other.payload_bits[user_id],
                          other.randomness_bits[user_id], other.message_bits[user_id])
        for server_id, bits in other.storage_bits.items():
            self.add_storage(server_id, bits)
        return self

    def to_dict(self):
        return {
            'field_m': self.field_m,
            'users': {str(u): {
                'file_bits': self.file_bits[u],
                'payload_bits': self.payload_bits[u],
                'randomness_bits': self.randomness_bits[u],
                'message_bits': {str(l): b for l, b in sorted(self.message_bits[u].items())},
                'message_sum_bits': self.message_sum_bits(u),
            } for u in self.user_ids},
            'storage_bits': {str(l): b for l, b in sorted(self.storage_bits.items())},
        }


_StoreJob = namedtuple('_StoreJob', ['user', 'file', 'padded', 'pad_count', 'tape', 'bundle'])


class PrivateStorageProtocol(object):
    ''' Ramp sharing under one-time pads, the strategy every other one is measured against

    Subclasses change mask, unmask or the tape length to build broken
    strategies; the audit harness must catch them.
    '''
    strategy_id = 'ramp-otp'

    def tape_length(self, params, user_id):
        ''' Symbols of local randomness R_d the encoder consumes, n_d z_d
        '''
        user = params.user(user_id)
        return user.n_symbols * user.z

    def draw_tape(self, params, user_id, seed=None, label=None):
        label = label or 'tape|user={}'.format(user_id)
        symbols = seeding.symbol_stream(seed, label, self.tape_length(params, user_id), params.spec.order)
        return RandomTape(symbols, 'system-entropy' if seed is None else 'deterministic-seed')

    def encoder_tape(self, tape, params, user_id):
        ''' The part of the drawn tape that reaches the ramp encoder
        '''
        return tape

    def mask(self, server_id, share, key):
        return otp_apply(share, key)

    def unmask(self, server_id, payload, key):
        return otp_apply(payload, key)

    def server_ingest(self, msg, server_key):
        ''' g_l for this strategy
        '''
        return _server_ingest(msg, server_key,
                              unmask=lambda payload, key: self.unmask(msg.server_id, payload, key))

    def store(self, file, ring, params, tape):
        ''' Encode one user's file into L public messages

        Args:
            file (FileRecord): the file, at most n(t-z) symbols long
            ring (KeyRing): the user's unused keys for servers 1..L
            params (StorageParams): the parameters
            tape (RandomTape): exactly tape_length symbols

        Returns:
            (tuple): the messages ordered by server and the ResourceReport
        '''
        job = self._prepare(file, ring, params, tape)
        return self._emit(job, ring, params)

    def multi_user_store(self, files, rings, params, tapes):
        ''' Store one file per user with independent per-user pipelines

        Every user is validated before any key is consumed.

        Returns:
            (tuple): dict server id -> messages in user order, and the ResourceReport
        '''
        files = list(files)
        owners = [f.user_id for f in files]
        if len(set(owners)) != len(owners):
            raise UsageError('More than one file for a user: {}'.format(owners))
        if sorted(owners) != sorted(params.user_ids):
            raise UsageError('Files cover users {}, parameters name users {}'.format(
                sorted(owners), sorted(params.user_ids)))
        for user_id in owners:
            if user_id not in rings or user_id not in tapes:
                raise UsageError('No key ring or tape for user {}'.format(user_id))
        jobs = [self._prepare(f, rings[f.user_id], params, tapes[f.user_id])
                for f in sorted(files, key=lambda f: params.user_ids.index(f.user_id))]

        messages = {l: [] for l in params.server_ids}
        report = ResourceReport(params.spec.m)
        for job in jobs:
            user_messages, user_report = self._emit(job, rings[job.user.user_id], params)
            for msg in user_messages:
                messages[msg.server_id].append(msg)
            report.merge(user_report)
        log.debug('stored files of %d users on %d servers', len(jobs), params.L)
        return messages, report

    def reconstruct(self, shares, params):
        ''' Decode a user's file from at least t of its stored shares

        The lowest t server ids are decoded; further shares are not read.
        '''
        shares = list(shares)
        if not shares:
            raise InsufficientSharesError('No shares given', missing=1)
        header = shares[0].header
        for share in shares[1:]:
            if not share.header.same_file(header):
                raise ProtocolError('Share of server {} (user {}) does not match the share of server {} '
                                    '(user {})'.format(share.server_id, share.user_id,
                                                       shares[0].server_id, header.user_id))
        for share in shares:
            params.check_header(share.header)
        server_ids = [share.server_id for share in shares]
        if len(set(server_ids)) != len(server_ids):
            raise ProtocolError('Duplicate shares among servers {}'.format(server_ids))

        ramp = params.ramp(header.user_id)
        if len(shares) < ramp.t:
            missing = ramp.t - len(shares)
            raise InsufficientSharesError('Need at least t={} shares, got {}: {} more needed'.format(
                ramp.t, len(shares), missing), missing=missing)
        chosen = sorted(shares, key=lambda s: s.server_id)[:ramp.t]
        symbols = ramp_decode({s.server_id: s.payload for s in chosen}, ramp)
        log.info('reconstructed %d bits of user %d from servers %s', header.plaintext_bits,
                 header.user_id, [s.server_id for s in chosen])
        return FileRecord.unpad(header.user_id, symbols, header, params.spec)

    def _prepare(self, file, ring, params, tape):
        user = params.user(file.user_id)
        if ring.user_id != file.user_id:
            raise UsageError('Key ring of user {} used for a file of user {}'.format(
                ring.user_id, file.user_id))
        if ring.spec.m != params.spec.m:
            raise UsageError('Keys over GF(2^{}) used with parameters over GF(2^{})'.format(
                ring.spec.m, params.spec.m))
        padded, pad_count = file.pad(user, params.spec)
        expected = self.tape_length(params, user.user_id)
        if len(tape) != expected:
            raise ParameterError('Tape of user {} holds {} symbols, the strategy needs exactly {}'.format(
                user.user_id, len(tape), expected))
        ring.check_ready(params.server_ids, user.n_symbols)
        # encoding validates the tape symbols, so it happens before any key is consumed
        bundle = ramp_encode(padded, self.encoder_tape(tape, params, user.user_id), params.ramp(user.user_id))
        return _StoreJob(user, file, padded, pad_count, tape, bundle)

    def _emit(self, job, ring, params):
        user_id, m, bundle = job.user.user_id, params.spec.m, job.bundle
        messages = []
        report = ResourceReport(m)
        for l in params.server_ids:
            key = consume_key(ring, l)
            header = params.header_for(user_id, l, job.file.bit_length, job.pad_count)
            messages.append(PublicMessage(header, self.mask(l, bundle.share(l), key)))
            report.add_storage(l, bundle.share(l).size * m)
        report.add_user(user_id, job.padded.size * m, job.file.bit_length, len(job.tape) * m,
                        {msg.server_id: msg.payload.size * m for msg in messages})
        log.debug('user %d: %d file symbols (%d pad) into %d messages of %d symbols',
                  user_id, job.padded.size, job.pad_count, len(messages), bundle.share_length)
        return messages, report


_default = PrivateStorageProtocol()


def store(file, ring, params, tape):
    return _default.store(file, ring, params, tape)


def server_ingest(msg, server_key):
    return _default.server_ingest(msg, server_key)


def reconstruct(shares, params):
    return _default.reconstruct(shares, params)


def multi_user_store(files, rings, params, tapes):
    return _default.multi_user_store(files, rings, params, tapes)

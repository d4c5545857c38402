''' In-memory deployment: L servers behind a broadcast public channel
'''
import os
import re
from collections import namedtuple
from dataclasses import dataclass
from typing import Optional
from fractions import Fraction

from pfstore.audit.distribution import entropy, conditional_entropy
from pfstore.audit.enumerator import enumerate_strategy, state_count
from pfstore.envs import Env
from pfstore.storage.protocol import FileRecord
from pfstore.storage.server import ServerState
from pfstore.utils.logger import log
from pfstore.utils.utils import format_bits
from pfstore.utils.pfstore_error import SetupError, UsageError, FormatError

DEFAULT_SIM_CONFIG = {
        'sim_exact_atoms': 1 << 16,
        }

AdversaryView = namedtuple('AdversaryView', ['messages', 'keys', 'shares'])

_SERVER_DIR = re.compile(r'^server_(\d+)$')


class ChannelTranscript(object):
    ''' Append-only log of every public message, readable by everyone
    '''

    def __init__(self):
        self._messages = []

    def append(self, msg):
        self._messages.append(msg)

    @property
    def messages(self):
        return tuple(self._messages)

    def for_user(self, user_id):
        return [msg for msg in self._messages if msg.user_id == user_id]

    def __len__(self):
        return len(self._messages)

    def __iter__(self):
        return iter(self._messages)


@dataclass(frozen=True)
class AttackSummary:
    ''' What a coalition of servers learns about one user's file

    residual_entropy is only set when the deployment is small enough to
    enumerate; otherwise the summary holds structural facts only.
    '''
    user_id: int
    colluders: tuple
    transcript_messages: int
    keys_seen: int
    shares_seen: int
    share_bits: int
    recovered: Optional[bool]
    exact: bool
    file_entropy: Optional[Fraction] = None
    residual_entropy: Optional[Fraction] = None

    def to_dict(self):
        return {
            'user_id': self.user_id,
            'colluders': list(self.colluders),
            'transcript_messages': self.transcript_messages,
            'keys_seen': self.keys_seen,
            'shares_seen': self.shares_seen,
            'share_bits': self.share_bits,
            'recovered': self.recovered,
            'exact': self.exact,
            'file_entropy': None if self.file_entropy is None else format_bits(self.file_entropy),
            'residual_entropy': None if self.residual_entropy is None else format_bits(self.residual_entropy),
        }


class StorageEnv(Env):
    ''' Simulated storage network
    '''

    def __init__(self, config):
        ''' Initialize the simulated network
        '''
        self.name = 'simnet'
        self.default_sim_config = DEFAULT_SIM_CONFIG
        super().__init__(config)
        self.params = None
        self.rings = {}
        self.servers = {}
        self.transcript = ChannelTranscript()
        self.files = {}
        self.report = None
        self.run_count = 0
        self._distribution = None

    def deploy(self, params, rings, server_ids=None):
        ''' Start L servers and install every user's keys

        Args:
            params (StorageParams): the parameters
            rings (dict): user id -> unused KeyRing
            server_ids (Optional[list]): ids to start, 1..L by default

        Returns:
            (StorageEnv): self, deployed with an empty transcript
        '''
        server_ids = list(params.server_ids if server_ids is None else server_ids)
        if len(set(server_ids)) != len(server_ids):
            raise SetupError('Duplicate server ids in {}'.format(server_ids))
        if sorted(server_ids) != params.server_ids:
            raise SetupError('Servers {} do not match the L={} evaluation points {}'.format(
                server_ids, params.L, params.server_ids))

        servers = {l: ServerState(l) for l in server_ids}
        for user in params.users:
            ring = rings.get(user.user_id)
            if ring is None or ring.user_id != user.user_id:
                raise SetupError('No key ring for user {}'.format(user.user_id))
            for l in server_ids:
                if l not in ring.entries:
                    raise SetupError('Missing key of user {} for server {}'.format(user.user_id, l))
                if ring.is_consumed(l):
                    raise SetupError('Key of user {} for server {} is already used'.format(user.user_id, l))
                if ring.entries[l].size != user.n_symbols:
                    raise SetupError('Key of user {} for server {} holds {} symbols, expected {}'.format(
                        user.user_id, l, ring.entries[l].size, user.n_symbols))
                servers[l].install_key(user.user_id, ring.distribute(l), params.spec.m)

        self.params = params
        self.rings = dict(rings)
        self.servers = servers
        self.transcript = ChannelTranscript()
        self.files = {}
        self.report = None
        self._distribution = None
        log.info('deployed %d servers for %d users', params.L, len(params.users))
        return self

    def run_store_scenario(self, files, tapes=None):
        ''' Every user stores one file; each server ingests its own messages

        Args:
            files (dict): user id -> FileRecord or bytes
            tapes (Optional[dict]): user id -> RandomTape, drawn from the seed by default

        Returns:
            (tuple): the transcript and the servers by id
        '''
        if self.params is None:
            raise SetupError('Deploy the network before storing files')
        records = {}
        for user_id, data in files.items():
            records[user_id] = data if isinstance(data, FileRecord) else FileRecord(user_id, data)
        if tapes is None:
            tapes = {user_id: self.strategy.draw_tape(
                        self.params, user_id, seed=self.seed_value,
                        label='tape|user={}|run={}'.format(user_id, self.run_count))
                     for user_id in records}

        grouped, report = self.strategy.multi_user_store(list(records.values()), self.rings, self.params, tapes)
        order = self.params.user_ids
        messages = sorted((msg for batch in grouped.values() for msg in batch),
                          key=lambda msg: (order.index(msg.user_id), msg.server_id))
        for msg in messages:
            self.transcript.append(msg)
        for msg in messages:
            self.servers[msg.server_id].ingest(msg, self.strategy)

        self.files.update(records)
        self.report = report
        self.run_count += 1
        log.info('transcript holds %d messages', len(self.transcript))
        return self.transcript, self.servers

    def replay(self, transcript):
        ''' Feed a transcript into fresh servers holding the deployed keys

        Returns:
            (dict): server id -> ServerState
        '''
        if self.params is None:
            raise SetupError('Deploy the network before replaying a transcript')
        servers = {l: ServerState(l) for l in self.params.server_ids}
        for user in self.params.users:
            for l in self.params.server_ids:
                servers[l].install_key(user.user_id, self.rings[user.user_id].distribute(l), self.params.spec.m)
        for msg in transcript:
            servers[msg.server_id].ingest(msg, self.strategy)
        return servers

    def storage_bits(self):
        return {l: server.storage_bits() for l, server in sorted(self.servers.items())}

    def adversary_view(self, colluders):
        ''' The whole transcript plus the colluders' keys and shares
        '''
        keys, shares = {}, {}
        for l in colluders:
            server = self.servers[l]
            for user_id, record in server.keys.items():
                keys[(user_id, l)] = record.material.copy()
            for user_id, share in server.shares.items():
                shares[(user_id, l)] = share
        return AdversaryView(self.transcript.messages, keys, shares)

    def collusion_attack(self, colluders, user_id):
        ''' Pool the view of a set of servers against one user's file

        At enumerable scale the exact H(F | view) is computed; at production
        scale only counts and sizes are reported.

        Returns:
            (AttackSummary): the summary
        '''
        if self.params is None or not len(self.transcript):
            raise UsageError('Run a store scenario before an attack')
        colluders = tuple(sorted(set(colluders)))
        unknown = [l for l in colluders if l not in self.servers]
        if unknown:
            raise UsageError('Unknown servers {}'.format(unknown))
        user = self.params.user(user_id)
        view = self.adversary_view(colluders)

        recovered = None
        own = [view.shares[(user_id, l)] for l in colluders if (user_id, l) in view.shares]
        if len(own) >= user.t:
            recovered = self.strategy.reconstruct(own, self.params) == self.files.get(user_id)

        exact = state_count(self.params, self.strategy) <= self.sim_config['sim_exact_atoms']
        file_entropy = residual = None
        if exact:
            dist = self._exact_distribution()
            labels = [('M', msg.user_id, msg.server_id) for msg in view.messages]
            labels += [('K', d, l) for d, l in sorted(view.keys)]
            labels += [('S', d, l) for d, l in sorted(view.shares)]
            file_entropy = entropy(dist, [('F', user_id)])
            residual = conditional_entropy(dist, [('F', user_id)], labels)

        summary = AttackSummary(user_id, colluders, len(view.messages), len(view.keys), len(view.shares),
                                sum(s.payload.size * s.header.m for s in view.shares.values()),
                                recovered, exact, file_entropy, residual)
        log.info('servers %s against user %d: recovered=%s exact=%s', list(colluders), user_id, recovered, exact)
        return summary

    def persist(self, directory):
        ''' Write server_<id>/keys.bin and server_<id>/shares.bin for every server
        '''
        for l, server in sorted(self.servers.items()):
            path = os.path.join(directory, 'server_{}'.format(l))
            os.makedirs(path, exist_ok=True)
            with open(os.path.join(path, 'keys.bin'), 'wb') as f:
                f.write(server.key_bytes())
            with open(os.path.join(path, 'shares.bin'), 'wb') as f:
                f.write(server.share_bytes())
        log.info('persisted %d servers to %s', len(self.servers), directory)

    def restore(self, directory):
        ''' Load every server_<id> directory written by persist

        Returns:
            (dict): server id -> ServerState
        '''
        servers = {}
        for name in sorted(os.listdir(directory)):
            match = _SERVER_DIR.match(name)
            if not match:
                continue
            l = int(match.group(1))
            path = os.path.join(directory, name)
            with open(os.path.join(path, 'keys.bin'), 'rb') as f:
                key_bytes = f.read()
            with open(os.path.join(path, 'shares.bin'), 'rb') as f:
                share_bytes = f.read()
            try:
                servers[l] = ServerState.from_bytes(l, key_bytes, share_bytes)
            except FormatError as e:
                raise FormatError('{} in {}'.format(e, path)) from e
        if not servers:
            raise FormatError('No server_<id> directories in {}'.format(directory))
        self.servers = servers
        return servers

    def _exact_distribution(self):
        if self._distribution is None:
            self._distribution = enumerate_strategy(self.params, self.strategy)
        return self._distribution

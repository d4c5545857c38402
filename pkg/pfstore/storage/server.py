''' Storage servers: the ingest map g_l and the per-server state
'''
from pfstore.storage.dealer import otp_apply
from pfstore.storage.records import (KeyRecord, StoredShare, decode_key_record,
                                     share_from_bytes, read_all)
from pfstore.utils.logger import log
from pfstore.utils.pfstore_error import ProtocolError, SetupError, FormatError


def server_ingest(msg, server_key, unmask=None):
    ''' Turn the public message M_l into the stored share S_l = M_l + K_l

    Args:
        msg (PublicMessage): the message addressed to this server
        server_key (numpy.array): this server's copy of the user's key
        unmask (Optional[callable]): (payload, key) -> payload, otp_apply by default

    Returns:
        (StoredShare): the share with a header identical to the message's
    '''
    if msg.payload.size != len(server_key):
        raise ProtocolError('Message for server {} holds {} symbols, the key {}'.format(
            msg.server_id, msg.payload.size, len(server_key)))
    unmask = unmask or otp_apply
    return StoredShare(msg.header, unmask(msg.payload, server_key))


class ServerState:
    ''' One server: installed keys, stored shares and an event log
    '''

    def __init__(self, server_id):
        ''' Initialize an empty server

        Args:
            server_id (int): l, also the evaluation point of its shares
        '''
        self.server_id = server_id
        self.keys = {}
        self.shares = {}
        self.events = []

    def install_key(self, user_id, material, m):
        ''' Accept K_{d,l} during setup
        '''
        if user_id in self.keys:
            raise SetupError('Server {} already holds a key of user {}'.format(self.server_id, user_id))
        self.keys[user_id] = KeyRecord(user_id, self.server_id, m, material.copy())
        self.events.append(('install', user_id, int(material.size)))

    def ingest(self, msg, strategy=None):
        ''' Store the share of one user from its public message

        Only the message addressed to this server and this server's own key
        are ever read here.
        '''
        if msg.server_id != self.server_id:
            raise ProtocolError('Server {} received a message for server {}'.format(
                self.server_id, msg.server_id))
        if msg.user_id not in self.keys:
            raise ProtocolError('Server {} holds no key of user {}'.format(self.server_id, msg.user_id))
        if msg.user_id in self.shares:
            raise ProtocolError('Server {} already stores a share of user {}'.format(
                self.server_id, msg.user_id))
        key = self.keys[msg.user_id].material
        if strategy is None:
            share = server_ingest(msg, key)
        else:
            share = strategy.server_ingest(msg, key)
        self.shares[msg.user_id] = share
        self.events.append(('ingest', msg.user_id, int(share.payload.size)))
        log.info('server %d stored %d symbols for user %d', self.server_id, share.payload.size, msg.user_id)
        return share

    def storage_bits(self):
        ''' Bits held per the storage accounting: S_{l,d} once ingested, K_{d,l} before
        '''
        total = 0
        for user_id, key in self.keys.items():
            if user_id in self.shares:
                share = self.shares[user_id]
                total += share.payload.size * share.header.m
            else:
                total += key.material.size * key.m
        return int(total)

    def key_bytes(self):
        return b''.join(self.keys[u].to_bytes() for u in sorted(self.keys))

    def share_bytes(self):
        return b''.join(self.shares[u].to_bytes() for u in sorted(self.shares))

    @classmethod
    def from_bytes(cls, server_id, key_bytes, share_bytes):
        ''' Rebuild a server from its persisted key and share records
        '''
        server = cls(server_id)
        for record in read_all(key_bytes, decode_key_record):
            if record.server_id != server_id:
                raise FormatError('Key record of server {} in the files of server {}'.format(
                    record.server_id, server_id))
            server.keys[record.user_id] = record
        for share in read_all(share_bytes, share_from_bytes):
            if share.server_id != server_id:
                raise FormatError('Share record of server {} in the files of server {}'.format(
                    share.server_id, server_id))
            server.shares[share.user_id] = share
        return server

    def __repr__(self):
        return 'ServerState(server={}, users={}, shares={})'.format(
            self.server_id, sorted(self.keys), sorted(self.shares))

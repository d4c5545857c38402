''' Deliberately broken strategies

    Each one still stores and reconstructs files correctly, so only the
    leakage audit or the resource check can tell it apart from ramp-otp.
'''
from pfstore.sharing.ramp import RandomTape
from pfstore.storage.protocol import PrivateStorageProtocol


class NoPadProtocol(PrivateStorageProtocol):
    ''' Sends the raw shares: M_l = H_l, and the server stores M_l as it is
    '''
    strategy_id = 'no-otp'

    def mask(self, server_id, share, key):
        return share.copy()

    def unmask(self, server_id, payload, key):
        return payload.copy()


class AsymmetricPadProtocol(PrivateStorageProtocol):
    ''' Pads every share except the one for server 1
    '''
    strategy_id = 'asymmetric-otp'
    unpadded_server = 1

    def mask(self, server_id, share, key):
        if server_id == self.unpadded_server:
            return share.copy()
        return super().mask(server_id, share, key)

    def unmask(self, server_id, payload, key):
        if server_id == self.unpadded_server:
            return payload.copy()
        return super().unmask(server_id, payload, key)


class DoubleRandomnessProtocol(PrivateStorageProtocol):
    ''' Draws 2nz tape symbols where nz suffice; the extra half is discarded
    '''
    strategy_id = 'double-randomness'

    def tape_length(self, params, user_id):
        return 2 * super().tape_length(params, user_id)

    def encoder_tape(self, tape, params, user_id):
        used = super().tape_length(params, user_id)
        return RandomTape(tape.symbols[:used], tape.source)

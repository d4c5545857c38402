''' Register storage strategies
'''
from pfstore.storage.dealer import KeyRing, keygen, otp_apply, consume_key, rekey
from pfstore.storage.records import PublicMessage, StoredShare, KeyRecord, RecordHeader
from pfstore.storage.server import ServerState
from pfstore.storage.protocol import (UserParams, StorageParams, FileRecord, ResourceReport,
                                      PrivateStorageProtocol, store, server_ingest,
                                      reconstruct, multi_user_store)
from pfstore.storage.registration import register, load, strategy_registry

register(
    strategy_id='ramp-otp',
    entry_point='pfstore.storage.protocol:PrivateStorageProtocol',
)

register(
    strategy_id='no-otp',
    entry_point='pfstore.storage.sabotage:NoPadProtocol',
)

register(
    strategy_id='asymmetric-otp',
    entry_point='pfstore.storage.sabotage:AsymmetricPadProtocol',
)

register(
    strategy_id='double-randomness',
    entry_point='pfstore.storage.sabotage:DoubleRandomnessProtocol',
)

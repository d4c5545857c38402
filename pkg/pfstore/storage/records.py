''' PFS1 binary records: keys, public messages and stored shares

    Every record starts with the magic b'PFS1', a type byte and a version
    byte. All integers are big-endian and every symbol takes one byte.

    key record      magic | 'K' | version | m | user u16 | server u16 | n u32 | n symbols
    message record  magic | 'M' | version | m | user u16 | server u16 | t u8 | z u8 | L u8
                    | n u32 | plaintext bits u64 | pad count u16 | n symbols
    share record    same as a message record with type 'S'
'''
import struct
from dataclasses import dataclass, replace

import numpy as np

from pfstore.utils.pfstore_error import FormatError

MAGIC = b'PFS1'
VERSION = 1

KEY_RECORD = 0x4B
MESSAGE_RECORD = 0x4D
SHARE_RECORD = 0x53

_PREFIX = struct.Struct('>4sBB')
_KEY_HEADER = struct.Struct('>4sBBBHHI')
_DATA_HEADER = struct.Struct('>4sBBBHHBBBIQH')


@dataclass(frozen=True)
class RecordHeader:
    ''' The header shared by message and share records
    '''
    m: int
    user_id: int
    server_id: int
    t: int
    z: int
    L: int
    n_symbols: int
    plaintext_bits: int
    pad_count: int

    def for_server(self, server_id):
        return replace(self, server_id=server_id)

    def same_file(self, other):
        ''' True if both headers describe shares of one stored file
        '''
        return replace(self, server_id=0) == replace(other, server_id=0)

    def pack(self, record_type):
        return _DATA_HEADER.pack(MAGIC, record_type, VERSION, self.m, self.user_id, self.server_id,
                                 self.t, self.z, self.L, self.n_symbols, self.plaintext_bits,
                                 self.pad_count)


class _PayloadRecord(object):
    record_type = None

    def __init__(self, header, payload):
        self.header = header
        self.payload = np.array(payload, dtype=np.uint8).reshape(-1)

    @property
    def user_id(self):
        return self.header.user_id

    @property
    def server_id(self):
        return self.header.server_id

    def to_bytes(self):
        return self.header.pack(self.record_type) + self.payload.tobytes()

    @classmethod
    def from_bytes(cls, buffer, offset=0):
        ''' Decode one record

        Returns:
            (tuple): the record and the offset just past it
        '''
        record_type, header, payload, end = decode_data_record(buffer, offset, cls.record_type)
        return cls(header, payload), end

    def __eq__(self, other):
        return (type(self) is type(other) and self.header == other.header
                and np.array_equal(self.payload, other.payload))

    def __repr__(self):
        return '{}(user={}, server={}, n={})'.format(
            type(self).__name__, self.user_id, self.server_id, self.payload.size)


class PublicMessage(_PayloadRecord):
    ''' M_{d,l}: sent over the public channel to server l
    '''
    record_type = MESSAGE_RECORD


class StoredShare(_PayloadRecord):
    ''' S_{l,d}: what server l keeps for user d
    '''
    record_type = SHARE_RECORD


@dataclass(frozen=True)
class KeyRecord:
    user_id: int
    server_id: int
    m: int
    material: object

    def to_bytes(self):
        material = np.asarray(self.material, dtype=np.uint8)
        header = _KEY_HEADER.pack(MAGIC, KEY_RECORD, VERSION, self.m, self.user_id,
                                  self.server_id, material.size)
        return header + material.tobytes()


def _check_prefix(buffer, offset, expected_type):
    if len(buffer) - offset < _PREFIX.size:
        raise FormatError('Truncated record prefix', offset=len(buffer))
    magic, record_type, version = _PREFIX.unpack_from(buffer, offset)
    if magic != MAGIC:
        raise FormatError('Foreign magic {!r}, expected {!r}'.format(magic, MAGIC), offset=offset)
    if version != VERSION:
        raise FormatError('Unsupported record version {}'.format(version), offset=offset + 5)
    if expected_type is not None and record_type != expected_type:
        raise FormatError('Record type {!r} where {!r} was expected'.format(
            chr(record_type), chr(expected_type)), offset=offset + 4)
    return record_type


def _read_payload(buffer, start, m, count):
    end = start + count
    if len(buffer) < end:
        raise FormatError('Truncated payload: {} of {} symbols present'.format(
            max(0, len(buffer) - start), count), offset=len(buffer))
    payload = np.frombuffer(bytes(buffer[start:end]), dtype=np.uint8).copy()
    if payload.size and int(payload.max()) >= 1 << m:
        bad = int(np.argmax(payload >= (1 << m)))
        raise FormatError('Symbol {} does not fit in {} bits'.format(int(payload[bad]), m),
                          offset=start + bad)
    return payload, end


def _check_m(m, offset):
    if not 1 <= m <= 8:
        raise FormatError('Field width m={} outside [1, 8]'.format(m), offset=offset)


def decode_key_record(buffer, offset=0):
    ''' Decode one key record

    Returns:
        (tuple): KeyRecord and the offset just past it
    '''
    _check_prefix(buffer, offset, KEY_RECORD)
    if len(buffer) - offset < _KEY_HEADER.size:
        raise FormatError('Truncated key header', offset=len(buffer))
    _, _, _, m, user_id, server_id, n_symbols = _KEY_HEADER.unpack_from(buffer, offset)
    _check_m(m, offset + 6)
    material, end = _read_payload(buffer, offset + _KEY_HEADER.size, m, n_symbols)
    return KeyRecord(user_id, server_id, m, material), end


def decode_data_record(buffer, offset=0, expected_type=None):
    ''' Decode one message or share record

    Returns:
        (tuple): record type, RecordHeader, payload and the offset just past it
    '''
    record_type = _check_prefix(buffer, offset, expected_type)
    if record_type not in (MESSAGE_RECORD, SHARE_RECORD):
        raise FormatError('Record type {!r} is not a message or share'.format(chr(record_type)),
                          offset=offset + 4)
    if len(buffer) - offset < _DATA_HEADER.size:
        raise FormatError('Truncated record header', offset=len(buffer))
    fields = _DATA_HEADER.unpack_from(buffer, offset)
    header = RecordHeader(*fields[3:])
    _check_m(header.m, offset + 6)
    payload, end = _read_payload(buffer, offset + _DATA_HEADER.size, header.m, header.n_symbols)
    return record_type, header, payload, end


def read_all(buffer, decoder):
    ''' Decode back-to-back records until the buffer is exhausted

    Args:
        buffer (bytes): concatenated records
        decoder (callable): (buffer, offset) -> (record, next offset)
    '''
    records, offset = [], 0
    while offset < len(buffer):
        record, offset = decoder(buffer, offset)
        records.append(record)
    return records


def message_from_bytes(buffer, offset=0):
    return PublicMessage.from_bytes(buffer, offset)


def share_from_bytes(buffer, offset=0):
    return StoredShare.from_bytes(buffer, offset)

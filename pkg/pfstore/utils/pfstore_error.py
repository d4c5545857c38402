'''
    File name: utils/pfstore_error.py

    Every failure raised by the package derives from PFStoreError. The
    exit_code attribute is what the command line returns for it.
'''


class PFStoreError(Exception):
    exit_code = 1


class UsageError(PFStoreError, ValueError):
    exit_code = 2


class ParameterError(UsageError):
    pass


class FieldDomainError(UsageError):
    pass


class InexactEntropyError(UsageError):
    pass


class RankError(PFStoreError):
    exit_code = 2


class ScaleError(PFStoreError):
    exit_code = 2

    def __init__(self, message, state_count=None):
        super().__init__(message)
        self.state_count = state_count


class SetupError(PFStoreError):
    exit_code = 2


class KeyNotFoundError(PFStoreError, KeyError):
    exit_code = 2

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class CapacityError(PFStoreError):
    exit_code = 3


class InsufficientSharesError(PFStoreError):
    exit_code = 3

    def __init__(self, message, missing=0):
        super().__init__(message)
        self.missing = missing


class CorruptionError(PFStoreError):
    exit_code = 3


class KeyReuseError(PFStoreError):
    exit_code = 4


class AuditFailure(PFStoreError):
    exit_code = 5


class ProtocolError(PFStoreError):
    exit_code = 6


class FormatError(PFStoreError):
    exit_code = 6

    def __init__(self, message, offset=None):
        if offset is not None:
            message = '{} (at byte offset {})'.format(message, offset)
        super().__init__(message)
        self.offset = offset

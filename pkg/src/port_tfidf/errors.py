"""Exception hierarchy.

Every error carries the process exit code the CLI should use: 2 for bad
input, 3 for a well-formed input that yields no usable result.
"""


class PortTfidfError(Exception):
    exit_code = 1


class InputError(PortTfidfError):
    exit_code = 2


class DomainError(PortTfidfError):
    exit_code = 3


class MalformedRecord(InputError):
    pass


class FieldOutOfRange(InputError):
    pass


class UnsupportedProtocol(InputError):
    pass


class EmptyInput(InputError):
    pass


class InvalidSpec(InputError):
    pass


class EmptyCorpus(DomainError):
    pass


class EmptyDocument(DomainError):
    pass


class NoSurvivingPorts(DomainError):
    pass


class InsufficientHistory(DomainError):
    pass


class RangeOutOfCorpus(DomainError):
    pass


class NoSamples(DomainError):
    pass


class EmptyRange(DomainError):
    pass


class BlockOutOfRange(DomainError):
    pass

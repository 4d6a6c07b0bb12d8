"""Exception hierarchy shared by all qwcrypt modules."""


class QwcError(Exception):
    """Base class for every error raised by qwcrypt."""


class PgmError(QwcError, ValueError):
    """Malformed or unsupported PGM input."""


class PgmMagicError(PgmError):
    pass


class PgmDepthError(PgmError):
    pass


class PgmTruncatedError(PgmError):
    pass


class DimensionError(QwcError, ValueError):
    pass


class DomainError(QwcError, ValueError):
    pass


class KeyParamError(QwcError, ValueError):
    pass


class LengthError(QwcError, ValueError):
    pass


class CipherFormatError(QwcError, ValueError):
    """The cipher container is truncated or its header is inconsistent."""


class CorrelationError(QwcError, ValueError):
    pass


class CircuitError(QwcError, ValueError):
    """Invalid gate, layout mismatch or oversize register."""


class DecodeError(QwcError, ValueError):
    """A state vector is not of GQIR form."""

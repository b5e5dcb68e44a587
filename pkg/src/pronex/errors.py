"""Exception types shared across the toolkit.

Exit-code mapping (see cli): UsageError/ValidationError terminate with 2,
ProtocolError/TransportError with 1.
"""


class PronexError(Exception):
    """Base class for all toolkit errors."""


class UsageError(PronexError):
    """Caller violated an operation's precondition."""


class ValidationError(PronexError):
    """Input data is structurally malformed (bad file, dangling reference)."""


class ProtocolError(PronexError):
    """A scorer broke the wire protocol (bad id, non-finite score, bad JSON)."""


class TransportError(PronexError):
    """The scorer process itself failed.

    `completed` carries the number of responses received before the failure,
    so partial progress can be reported.
    """

    def __init__(self, message, completed=0):
        super().__init__(message)
        self.completed = completed

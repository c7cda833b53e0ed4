"""
Error types: every failure carries a process exit code and a human-readable detail,
the same way API errors carry an HTTP status and a message.
"""


class GfinvError(Exception):
    """Base error. `exit_code` is what the CLI returns when this escapes a command."""

    exit_code = 1

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail or self.__class__.__name__


# ── Field construction ─────────────────────────────────────────

class NonPrime(GfinvError):
    pass


class Reducible(GfinvError):
    pass


class DegreeMismatch(GfinvError):
    pass


class FieldMismatch(GfinvError):
    pass


# ── Enumeration / subspaces ────────────────────────────────────

class CapExceeded(GfinvError):
    exit_code = 2


class EmptySet(GfinvError):
    pass


class ZeroScalar(GfinvError):
    pass


class NotADivisor(GfinvError):
    pass


class PreconditionViolated(GfinvError):
    pass


# ── Certification ──────────────────────────────────────────────

class SingularMap(GfinvError):
    pass


class ZeroB(GfinvError):
    pass


class ZeroAlpha(GfinvError):
    pass


class AlphaNotInFCircle(GfinvError):
    pass


class WrongCharacteristic(GfinvError):
    pass


class ConsistencyError(GfinvError):
    """A runtime cross-check between an algebraic shortcut and exhaustive evaluation failed."""


# ── Input files ────────────────────────────────────────────────

class ParseError(GfinvError):
    pass


class WrongLength(ParseError):
    pass


class OutOfRangeEntry(ParseError):
    pass

"""Exception hierarchy shared by every module.

The CLI maps each class onto an exit code, so operations raise rather than
return sentinel values.
"""


class StructRamseyError(Exception):
    """Base class for all errors raised by the package."""


class InputError(StructRamseyError, ValueError):
    """Malformed input: bad tuples, signature mismatch, non-embeddings, ..."""


class NoHostError(StructRamseyError):
    """The ambient structure contains no copy (or embedding) of the host pattern."""


class ResourceGuardError(StructRamseyError):
    """A configured search or enumeration limit was exceeded."""

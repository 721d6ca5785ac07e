class RaagError(Exception):
    """Base class of every error raised by raag_stabilisers."""


class InputError(RaagError, ValueError):
    """
    Malformed or inconsistent input: unknown vertices, bad literals,
    mismatched graphs or patterns, sets that should be closed but are not.
    """


class IllegalAtomError(InputError):
    pass


class PreconditionError(RaagError, ValueError):
    pass


class NotAStabiliserError(RaagError):
    """An automorphism moves some G(cl(x)) off itself."""


class DomainError(RaagError):
    """The automorphism does not belong to the conjugate-stabiliser."""


class ConsistencyError(RaagError):
    """A constructed result failed its own verification."""

"""Exception types shared across the toolkit.

The CLI maps these onto process exit codes, so library code should raise the
most specific type that applies rather than bare ValueError/RuntimeError.
"""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition (config errors too)."""


class ResourceLimitError(RuntimeError):
    """A request exceeds a hard resource cap (window length, section size)."""


class UnsupportedGeneratorError(RuntimeError):
    """The generator lacks a property the operation requires."""


class UnsupportedRequestError(RuntimeError):
    """The request is well formed but cannot be served at the accuracy asked."""


class UnsupportedSetError(RuntimeError):
    """The point-set kind is outside the operation's domain."""

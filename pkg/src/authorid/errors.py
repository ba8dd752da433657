"""Exception types shared across the authorid package."""


class AuthorIdError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(AuthorIdError):
    """Input violates a documented precondition or invariant."""


class NotFoundError(AuthorIdError):
    """A referenced user, paper, or author does not exist."""


class ConflictError(AuthorIdError):
    """The operation would violate a uniqueness rule (duplicate claim, second author id, ...)."""


class UnmappableNameError(ValidationError):
    """A name contains no letters that survive the ASCII dumb-down."""


class NotAcceptableError(AuthorIdError):
    """No offered representation satisfies the Accept header."""


class CorpusFormatError(AuthorIdError):
    """An ingest file is malformed or internally inconsistent.

    The message names the offending file and line where applicable.
    """

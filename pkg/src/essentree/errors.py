"""Exception types shared across the package."""


class EssentreeError(Exception):
    """Base class for all errors raised by essentree."""


class TermSyntaxError(EssentreeError, ValueError):
    """Malformed term text. ``offset`` is the character offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class SignatureError(EssentreeError, ValueError):
    """Ill-formed signature or a term that does not fit its signature."""


class InvalidPosition(EssentreeError, LookupError):
    """A position that does not address a node of the given term."""


class AutomatonError(EssentreeError, ValueError):
    """An automaton failed validation or could not be loaded.

    ``diagnostics`` lists every violation found.
    """

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        self.diagnostics = list(diagnostics or [])
        if self.diagnostics:
            message = message + ": " + "; ".join(self.diagnostics)
        super().__init__(message)


class UnboundVariable(EssentreeError, KeyError):
    """A run was requested over a term with a variable the assignment does not bind."""


class SearchBudgetExceeded(EssentreeError):
    """An exhaustive search would exceed the configured run budget."""


class PreconditionViolation(EssentreeError, ValueError):
    """The inputs do not satisfy the hypotheses of the check being requested."""

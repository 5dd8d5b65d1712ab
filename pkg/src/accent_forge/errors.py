"""Exception types shared across the package."""


class AccentForgeError(Exception):
    """Base class for all toolkit errors."""


class LabelError(AccentForgeError):
    """A label string violates the notation grammar.

    ``phrase_index`` is set when the error was detected while parsing a
    multi-phrase utterance, so callers can point at the offending phrase.
    """

    def __init__(self, message: str, phrase_index: int | None = None):
        if phrase_index is not None:
            message = f"phrase {phrase_index}: {message}"
        super().__init__(message)
        self.phrase_index = phrase_index


class CodecError(AccentForgeError):
    """Display/interchange symbol conversion failed."""


class LexiconError(AccentForgeError):
    """A lexicon source file is malformed."""

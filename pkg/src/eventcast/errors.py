"""Exception types shared across the package.

Everything that stems from bad user input derives from ValidationError so
the CLI can map it to a single exit code; plain I/O failures stay OSError.
"""


class ValidationError(Exception):
    """Input failed a domain check (bad pattern, bad stream, bad parameters)."""


class StreamFormatError(ValidationError):
    """A stream file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class PatternSyntaxError(ValidationError):
    """Pattern text failed to parse; carries the 0-based character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CompileError(ValidationError):
    """Pattern is degenerate and cannot be compiled (empty-word or empty language)."""


class ModelError(ValidationError):
    """Symbol model construction or chain building failed."""


class HorizonError(ValidationError):
    """The requested confidence mass is not reachable within the horizon."""

    def __init__(self, message: str, achievable: float):
        super().__init__(message)
        self.achievable = achievable

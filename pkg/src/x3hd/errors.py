"""Exception types shared across the package."""


class InternalError(RuntimeError):
    """An internal invariant was violated; indicates a bug, not bad input."""


class ParseError(ValueError):
    """Instance text could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class LimitError(RuntimeError):
    """An enumeration limit would be exceeded; raise the limit to proceed."""

"""Exception types raised by the package."""


class UsageError(ValueError):
    """Mismatched lengths, out-of-range indices or invalid arguments."""


class ConstructionError(RuntimeError):
    """An LDPC code could not be built for the requested degree constraints."""


class AlistParseError(ValueError):
    """Malformed alist text.  ``line`` is the 1-based offending line, if known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedSizeError(ValueError):
    """Problem size beyond what a brute-force routine accepts."""

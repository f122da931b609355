"""Exception hierarchy shared across the package."""


class CherrypickError(Exception):
    """Base class for package errors."""


class InputError(CherrypickError):
    """Malformed or out-of-contract user input (CLI exit code 2)."""


class ParseError(InputError):
    """CSV or set-specification parse failure; carries a line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NoApplicableMethod(CherrypickError):
    """No exact or shortcut route can bound the requested quantity (exit code 3)."""


class CapExceeded(NoApplicableMethod):
    """Problem size exceeds the hard cap of the requested exact algorithm."""


class ConvergenceError(CherrypickError):
    """An iterative numeric kernel failed to reach tolerance (exit code 4)."""

"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class ParseError(InvalidInputError):
    """Malformed input file. ``line`` is 1-based and counts the header."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class CostGuardError(InvalidInputError):
    """Raised when a brute-force oracle is asked to do too much work."""

class LangError(Exception):
    """Base class for errors raised while reading or transforming mini-C programs."""


class ParseError(LangError):
    def __init__(self, message, line=0, col=0):
        self.line = line
        self.col = col
        super().__init__(f"{message} at line {line}, column {col}")


class ScopeError(LangError):
    """Undeclared names, duplicate declarations, or a missing main function."""


class RenameError(LangError):
    """The variable mapping does not fit the program being renamed."""

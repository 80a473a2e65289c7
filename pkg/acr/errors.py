"""
Exception hierarchy shared by the acr package.

Every error raised on purpose by the library derives from AcrError, so callers
can catch the whole family at once while still matching the builtin base
(ValueError, KeyError, ...) that best describes the failure.
"""

from typing import Optional


class AcrError(Exception):
    """Base class for all acr errors"""


class DimensionError(AcrError, ValueError):
    """Matrix or vector shapes do not fit together"""


class DomainError(AcrError, ValueError):
    """An input lies outside the positive orthant (or another required domain)"""


class UnknownVariableError(AcrError, KeyError):
    """A polynomial variable name is not part of the ring"""


class BuildError(AcrError, ValueError):
    """A network or power-law system could not be constructed"""


class SingularPointError(AcrError, ArithmeticError):
    """The augmented Jacobian is singular at the requested point"""


class OracleFailure(AcrError, RuntimeError):
    """Newton correction did not converge"""


class ParseError(AcrError, ValueError):
    """
    Syntax error in a network, matrix or points file.

    Positions are 1-based. The rendered message shows the offending line with
    a caret under the column.
    """

    def __init__(self, message: str, line: int, column: int, snippet: str = "",
                 source: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.snippet = snippet
        self.source = source
        super().__init__(self.render())

    def render(self) -> str:
        where = f"{self.source}:" if self.source else ""
        text = f"{where}{self.line}:{self.column}: {self.message}"
        if self.snippet:
            text += f"\n    {self.snippet}\n    {' ' * (self.column - 1)}^"
        return text

    def with_source(self, source: str) -> "ParseError":
        return ParseError(self.message, self.line, self.column, self.snippet, source)

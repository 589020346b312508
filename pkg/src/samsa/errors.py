"""Exception hierarchy shared by the whole package.

Everything raised on purpose derives from SamsaError, so callers (and the
CLI) can catch one type and report cleanly.  Parsers additionally guarantee
that *any* malformed input surfaces as a ParseError subclass rather than a
bare KeyError/AttributeError escaping from the guts.
"""


class SamsaError(Exception):
    """Base class for all errors raised by this package."""


class MalformedGraph(SamsaError):
    """A graph operation hit a structural problem (e.g. a cycle)."""


class MalformedScene(SamsaError):
    """A unit that should be a scene has a contradictory shape."""


class ImplicitUnitError(SamsaError):
    """An operation that needs surface material was given an implicit unit."""


class ParseError(SamsaError):
    """Input document could not be parsed.

    ``line`` is set when the underlying reader can attribute the failure
    to a line number (XML), otherwise it is None.
    """

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UnknownCategory(ParseError):
    """An edge carried a label outside the closed category set."""


class DanglingRef(ParseError):
    """An edge or root referenced a node that does not exist."""


class InvalidPassage(ParseError):
    """A parsed document failed structural validation."""

    def __init__(self, issues):
        self.issues = list(issues)
        detail = "; ".join(str(i) for i in self.issues)
        super().__init__(f"passage failed validation: {detail}")


class RangeError(SamsaError):
    """An index in an external file fell outside the valid range."""


class DuplicateSource(SamsaError):
    """An alignment mapped the same source token twice."""


class EmptyOutput(SamsaError):
    """The system output contained no sentences."""


class NoScenes(SamsaError):
    """The source annotation contains no scene, so the score is undefined."""


class DomainError(SamsaError):
    """A statistics routine was fed values outside its domain."""

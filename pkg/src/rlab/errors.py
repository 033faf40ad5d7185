"""Exception types shared across the library."""


class RlabError(Exception):
    """Base class for all library errors."""


class DomainError(RlabError):
    """An argument lies outside the mathematically valid range."""


class NonEvaluableProfile(RlabError):
    """An exponent profile could not be evaluated on (0, 1)."""


class ExponentOutOfRange(RlabError):
    """A sampled exponent value p(s) <= 1 was detected."""


class IndexOutOfTable(RlabError):
    """A coefficient index exceeds the degree range of a moment table."""


class HypothesisNotMet(RlabError):
    """A diagnostic's precondition on the domain is violated."""


class ParseError(RlabError):
    """Expression-DSL syntax error; carries the offending position."""

    def __init__(self, message: str, source: str, position: int):
        self.source = source
        self.position = position
        caret = " " * position + "^"
        super().__init__(f"{message}\n  {source}\n  {caret}")

"""Error types raised by the clusteracc package."""


class ClusterAccError(Exception):
    """Base class for all package errors."""


class ParseError(ClusterAccError, ValueError):
    """Malformed clusters-per-line input."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class EmptyClusteringError(ParseError):
    def __init__(self, message="empty clustering"):
        super().__init__(message)


class UniverseMismatchError(ClusterAccError, ValueError):
    """The two clusterings do not cover the same node universe."""

    def __init__(self, only_first, only_second):
        self.only_first = only_first
        self.only_second = only_second
        super().__init__(
            f"universe mismatch: {only_first} node(s) only in the first "
            f"clustering, {only_second} node(s) only in the second")


class DegenerateInputError(ClusterAccError, ValueError):
    """The metric is undefined for the given input."""


class SaturatedExpectationError(DegenerateInputError):
    """Chance-corrected index with expected agreement equal to one."""

    def __init__(self, message="undefined (expected agreement saturates)"):
        super().__init__(message)

"""Exception hierarchy.

Everything raised on bad *data* derives from :class:`DataError` so the CLI
can map it to its own exit code.
"""


class LineSmoothError(Exception):
    """Base class for all package errors."""


class DataError(LineSmoothError, ValueError):
    """Input data (series, files, samples) violates a contract."""


class EmptyOrTooShort(DataError):
    pass


class NonFinite(DataError):
    def __init__(self, index: int):
        super().__init__(f"non-finite value at index {index}")
        self.index = index


class GridMismatch(DataError):
    pass


class LengthMismatch(DataError):
    pass


class LevelOutOfRange(DataError):
    pass


class DegreeTooLargeForWindow(DataError):
    pass


class ZeroCutoff(DataError):
    pass


class ZeroVariance(DataError):
    pass


class TooShort(DataError):
    pass


class NonPositiveTolerance(DataError):
    pass


class DatasetTooShort(DataError):
    pass


class AllLevelsFailed(DataError):
    pass


class DegenerateSamples(DataError):
    pass


class BadInterval(DataError):
    pass


class InconsistentMethodSets(DataError):
    pass


class ParseError(DataError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NonMonotonicTime(DataError):
    def __init__(self, line: int):
        super().__init__(f"line {line}: time column is not strictly increasing")
        self.line = line

"""Exception hierarchy shared by the library and the command line."""


class NewsflowError(Exception):
    """Base class for all errors raised by newsflow."""


class ConfigError(NewsflowError, ValueError):
    """Invalid parameters, schedules, grids or flags."""


class SeriesParseError(NewsflowError, ValueError):
    """Malformed series CSV. ``line`` is 1-based, or None for whole-input problems."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AnalysisError(NewsflowError, ValueError):
    """The requested statistic is undefined for the given data."""


class SeriesTooShortError(AnalysisError):
    pass


class ConstantSeriesError(AnalysisError):
    pass

"""Multiagent news-diffusion simulator with R/S and wavelet analysis tools."""
from .errors import (
    AnalysisError,
    ConfigError,
    ConstantSeriesError,
    NewsflowError,
    SeriesParseError,
    SeriesTooShortError,
)
from .timeseries import Series, read_series_csv, write_series_csv

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "ConfigError",
    "ConstantSeriesError",
    "NewsflowError",
    "SeriesParseError",
    "SeriesTooShortError",
    "Series",
    "read_series_csv",
    "write_series_csv",
]

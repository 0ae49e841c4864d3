"""Rescaled-range (R/S) statistics and the single-scale Hurst exponent.

For a series xi(1..N) with mean m, the cumulative deviation is
X(t) = sum_{u<=t} (xi(u) - m), the range is R = max X - min X, and S is the
population standard deviation.  The Hurst exponent is read off the relation
R/S = (N/2)**H, i.e. H = ln(R/S) / ln(N/2), and the fractal dimension is 2 - H.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, ConstantSeriesError, SeriesTooShortError
from .timeseries import Series

log = logging.getLogger(__name__)

__all__ = [
    "HurstReport",
    "cumulative_deviation",
    "rs_statistic",
    "hurst_point",
    "hurst_dynamics",
    "fractal_dimension",
]

DEFAULT_MIN_N = 20


def _values(series) -> np.ndarray:
    if isinstance(series, Series):
        return series.values
    return np.asarray(series, dtype=np.float64).reshape(-1)


@dataclass(frozen=True)
class HurstReport:
    n: int
    mean: float
    range: float
    stddev: float
    rs: float
    hurst: float
    fractal_dim: float

    @property
    def out_of_range(self) -> bool:
        """True when H falls outside [0, 1]; the estimate is reported unclamped."""
        return not 0.0 <= self.hurst <= 1.0

    def to_dict(self) -> dict:
        return asdict(self)


def cumulative_deviation(series) -> np.ndarray:
    x = _values(series)
    if x.size < 1:
        raise SeriesTooShortError("series is empty")
    return np.cumsum(x - x.mean())


def rs_statistic(series) -> tuple[float, float]:
    """``(range, stddev)`` of a series with at least two values."""
    x = _values(series)
    if x.size < 2:
        raise SeriesTooShortError(f"R/S needs at least 2 values, got {x.size}")
    if np.all(x == x[0]):
        # the computed mean of a constant series can be off by an ulp
        return 0.0, 0.0
    d = x - x.mean()
    X = np.cumsum(d)
    with np.errstate(over="ignore", under="ignore"):
        s = float(np.sqrt(np.mean(d * d)))
    if s == 0.0 or not np.isfinite(s):
        # squares under/overflowed; rescale by the largest deviation
        m = np.abs(d).max()
        s = float(m * np.sqrt(np.mean((d / m) ** 2)))
    return float(X.max() - X.min()), s


def fractal_dimension(h: float) -> float:
    return 2.0 - h


def hurst_point(series) -> HurstReport:
    x = _values(series)
    n = x.size
    if n < 3:
        raise SeriesTooShortError(f"Hurst exponent needs at least 3 values, got {n}")
    if np.all(x == x[0]):
        raise ConstantSeriesError("series is constant; R/S is undefined")
    r, s = rs_statistic(x)
    if s == 0.0:
        raise ConstantSeriesError("series has zero standard deviation; R/S is undefined")
    rs = r / s
    h = float(np.log(rs) / np.log(n / 2.0))
    return HurstReport(n=n, mean=float(x.mean()), range=r, stddev=s, rs=rs,
                       hurst=h, fractal_dim=fractal_dimension(h))


def hurst_dynamics(series, mode: str = "prefix", window: int | None = None,
                   min_n: int = DEFAULT_MIN_N) -> Series:
    """Hurst exponent as a function of time.

    ``prefix``: the value at the tick of the t-th sample (t >= min_n) is the
    estimate over samples 1..t.  ``window``: the estimate over the trailing
    ``window`` samples.  Output ticks are the input ticks of the last sample
    used.  Leading ticks with no valid estimate (constant data) are dropped;
    an interior constant window repeats the previous estimate.
    """
    x = _values(series)
    origin = series.origin_tick if isinstance(series, Series) else 0
    if min_n < 3:
        raise ConfigError(f"min_n must be >= 3, got {min_n}")
    if mode == "window":
        if window is None or window < min_n:
            raise ConfigError(f"window must be >= min_n ({min_n}), got {window}")
        first = window
    elif mode == "prefix":
        first = min_n
    else:
        raise ConfigError(f"mode must be 'prefix' or 'window', got {mode!r}")
    if x.size < first:
        raise SeriesTooShortError(f"series has {x.size} values, needs at least {first}")

    out: list[float] = []
    start_tick = None
    held = 0
    for t in range(first, x.size + 1):
        chunk = x[:t] if mode == "prefix" else x[t - window:t]
        try:
            h = hurst_point(chunk).hurst
        except ConstantSeriesError:
            if start_tick is None:
                continue
            h = out[-1]
            held += 1
        if start_tick is None:
            start_tick = origin + t - 1
        out.append(h)
    if start_tick is None:
        raise ConstantSeriesError("no valid Hurst estimate: every prefix/window is constant")
    if held:
        log.warning("hurst_dynamics: %d constant windows held the previous estimate", held)
    return Series(out, origin_tick=start_tick)

"""Continuous wavelet transform with derivative-of-Gaussian wavelets.

The mother wavelet of order n is

    psi_n(t) = (-1)**n / sqrt(Gamma(n + 1/2)) * d^n/dt^n exp(-t**2 / 2)
             = He_n(t) * exp(-t**2 / 2) / sqrt(Gamma(n + 1/2))

with He_n the probabilists' Hermite polynomial, which gives unit L2 norm and
zero integral for n >= 1.  The transform is the rectangle-rule sum over the
sample ticks,

    W[i, b] = a_i**-0.5 * sum_t f(t) * psi((t - b) / a_i),   b = 0..N-1,

with the series zero outside [0, N-1].  Coefficients with |t - b| > 8a carry
negligible kernel weight, so shifts within about 8a of either end (the cone
of influence) are dominated by the zero padding.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import hermite_e

from .errors import ConfigError, SeriesParseError
from .timeseries import Series

__all__ = [
    "WaveletSpec",
    "Scaleogram",
    "wavelet_eval",
    "default_scales",
    "parse_scale_spec",
    "cwt",
    "magnitude",
    "write_scaleogram_csv",
    "read_scaleogram_csv",
]

# exp(-x**2 / 2) underflows to exactly 0.0 beyond |x| ~ 38.6, so kernels are
# truncated there without changing any computed coefficient
_KERNEL_HALF_WIDTH = 40.0


@dataclass(frozen=True)
class WaveletSpec:
    order: int = 1

    def __post_init__(self):
        if self.order not in (1, 2, 3, 4):
            raise ConfigError(f"wavelet order must be 1..4, got {self.order!r}")

    @property
    def norm(self) -> float:
        return 1.0 / math.sqrt(math.gamma(self.order + 0.5))


@dataclass(frozen=True, eq=False)
class Scaleogram:
    """Coefficients ``[n_scales, n_shifts]``; ``shifts`` are ticks 0..N-1 of the input."""

    coefficients: np.ndarray
    scales: np.ndarray
    shifts: np.ndarray

    def __post_init__(self):
        c = self.coefficients
        if c.shape != (self.scales.size, self.shifts.size):
            raise ValueError(f"coefficient shape {c.shape} does not match grids "
                             f"({self.scales.size}, {self.shifts.size})")
        if not np.all(np.isfinite(c)):
            raise ValueError("scaleogram contains non-finite coefficients")


def wavelet_eval(spec: WaveletSpec, t):
    t = np.asarray(t, dtype=np.float64)
    coef = np.zeros(spec.order + 1)
    coef[-1] = 1.0
    out = spec.norm * hermite_e.hermeval(t, coef) * np.exp(-0.5 * t * t)
    return float(out) if out.ndim == 0 else out


def _check_grid(scales) -> np.ndarray:
    a = np.asarray(scales, dtype=np.float64).reshape(-1)
    if a.size == 0:
        raise ConfigError("scale grid is empty")
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise ConfigError("scales must be finite and positive")
    if np.any(np.diff(a) <= 0):
        raise ConfigError("scales must be strictly increasing")
    return a


def default_scales(n: int, count: int = 64) -> np.ndarray:
    """``count`` log-spaced scales from 1 to ``n / 4`` (at least 2)."""
    return np.geomspace(1.0, max(n / 4.0, 2.0), count)


def parse_scale_spec(text: str) -> np.ndarray:
    """Parse ``"min:max:count"`` into a log-spaced grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"scale spec must be min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"scale spec must be min:max:count, got {text!r}") from None
    if not lo > 0:
        raise ConfigError(f"scale min must be > 0, got {parts[0]}")
    if not lo < hi or not math.isfinite(hi):
        raise ConfigError(f"scale min must be < max, got {parts[0]} and {parts[1]}")
    if count < 2:
        raise ConfigError(f"scale count must be >= 2, got {count}")
    return np.geomspace(lo, hi, count)


def cwt(series, spec: WaveletSpec | None = None, scales=None, center: bool = True) -> Scaleogram:
    """Scaleogram of ``series``; ``center`` subtracts the series mean first."""
    spec = spec or WaveletSpec()
    f = series.values if isinstance(series, Series) else np.asarray(series, dtype=np.float64)
    n = f.size
    if n < 2:
        raise ConfigError(f"cwt needs at least 2 samples, got {n}")
    a_grid = _check_grid(default_scales(n) if scales is None else scales)
    if center:
        f = f - f.mean()

    out = np.empty((a_grid.size, n))
    for i, a in enumerate(a_grid):
        half = min(n - 1, int(math.ceil(_KERNEL_HALF_WIDTH * a)))
        k = np.arange(-half, half + 1, dtype=np.float64)
        kernel = wavelet_eval(spec, k / a)
        # kernel[j] is psi at offset j - half; correlate's lag b - half lands
        # at index b + half of the full output
        full = np.correlate(f, kernel, mode="full")
        out[i] = full[half: half + n] / math.sqrt(a)
    return Scaleogram(out, a_grid, np.arange(n))


def magnitude(scaleogram) -> np.ndarray:
    c = scaleogram.coefficients if isinstance(scaleogram, Scaleogram) else np.asarray(scaleogram)
    return np.abs(c)


def write_scaleogram_csv(sg: Scaleogram) -> bytes:
    buf = io.StringIO()
    buf.write(",".join(["scale"] + [f"b{b}" for b in sg.shifts.tolist()]) + "\n")
    for a, row in zip(sg.scales.tolist(), sg.coefficients.tolist()):
        buf.write(",".join([repr(a)] + [repr(v) for v in row]) + "\n")
    return buf.getvalue().encode("utf-8")


def read_scaleogram_csv(data: bytes | str) -> Scaleogram:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = [ln.rstrip("\r") for ln in data.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SeriesParseError("empty scaleogram CSV")
    header = lines[0].split(",")
    if header[0] != "scale" or len(header) < 2:
        raise SeriesParseError("header must be 'scale,b0,b1,...'", 1)
    try:
        shifts = np.array([int(h[1:]) for h in header[1:]])
    except ValueError:
        raise SeriesParseError("header must be 'scale,b0,b1,...'", 1) from None
    scales, rows = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise SeriesParseError(f"expected {len(header)} columns, got {len(cells)}", lineno)
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            raise SeriesParseError("non-numeric cell", lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise SeriesParseError("non-finite cell", lineno)
        scales.append(vals[0])
        rows.append(vals[1:])
    if not rows:
        raise SeriesParseError("scaleogram has no rows")
    return Scaleogram(np.array(rows), np.array(scales), shifts)

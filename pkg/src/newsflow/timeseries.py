"""Per-tick volume series and their CSV form.

The CSV layout is two numeric columns ``tick,value`` with an optional header
row.  Ticks must be contiguous integers: every analysis downstream assumes
unit sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SeriesParseError

__all__ = ["Series", "read_series_csv", "write_series_csv"]


@dataclass(frozen=True, eq=False)
class Series:
    """Finite real values indexed by consecutive integer ticks."""

    values: np.ndarray
    origin_tick: int = 0

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ValueError("series must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "origin_tick", int(self.origin_tick))

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.origin_tick == other.origin_tick and np.array_equal(self.values, other.values)

    __hash__ = None  # type: ignore[assignment]

    @property
    def ticks(self) -> np.ndarray:
        return np.arange(self.origin_tick, self.origin_tick + len(self))

    def tolist(self) -> list[float]:
        return self.values.tolist()


def _format_value(v: float) -> str:
    # integral values print without a trailing ".0"; everything else via repr,
    # which round-trips exactly
    if v.is_integer() and abs(v) < 2**53 and not (v == 0 and math.copysign(1.0, v) < 0):
        return str(int(v))
    return repr(v)


def write_series_csv(series: Series) -> bytes:
    lines = ["tick,value"]
    for tick, v in zip(series.ticks.tolist(), series.values.tolist()):
        lines.append(f"{tick},{_format_value(v)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_row(text: str, lineno: int) -> tuple[int, float]:
    cells = text.split(",")
    if len(cells) != 2:
        raise SeriesParseError(f"expected 2 columns, got {len(cells)}", lineno)
    tick_s, value_s = (c.strip() for c in cells)
    try:
        tick = int(tick_s)
    except ValueError:
        raise SeriesParseError(f"non-integer tick {tick_s!r}", lineno) from None
    try:
        value = float(value_s)
    except ValueError:
        raise SeriesParseError(f"non-numeric value {value_s!r}", lineno) from None
    if not math.isfinite(value):
        raise SeriesParseError(f"non-finite value {value_s!r}", lineno)
    return tick, value


def read_series_csv(data: bytes | str) -> Series:
    """Parse ``tick,value`` CSV into a :class:`Series`.

    Raises :class:`SeriesParseError` naming the offending line for
    non-numeric cells, NaN/inf tokens, tick gaps or an empty body.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SeriesParseError(f"input is not UTF-8: {exc}") from None
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    ticks: list[int] = []
    values: list[float] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.rstrip("\r")
        if lineno == 1 and text.replace(" ", "").lower() == "tick,value":
            continue
        if not text.strip():
            raise SeriesParseError("blank line", lineno)
        tick, value = _parse_row(text, lineno)
        if ticks and tick != ticks[-1] + 1:
            if tick <= ticks[-1]:
                raise SeriesParseError(f"tick {tick} is not increasing", lineno)
            raise SeriesParseError(f"gap: expected tick {ticks[-1] + 1}, got {tick}", lineno)
        ticks.append(tick)
        values.append(value)

    if not values:
        raise SeriesParseError("empty body: no data rows")
    return Series(values, origin_tick=ticks[0])

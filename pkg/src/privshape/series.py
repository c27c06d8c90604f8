"""Time-series values, z-score normalization, and symbolic compression.

A raw series is z-normalized, averaged over fixed-width segments, and each
segment mean is mapped to a symbol through standard-normal quantile
breakpoints.  Collapsing adjacent repeated symbols afterwards yields the
short "essential shape" sequence the rest of the pipeline works on.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

SYMBOL_CHARS = "abcdefghijklmnopqrstuvwxyz"

# y-axis bin edges for the SAX-free variant: 0.33-wide intervals mirrored
# around zero, outermost values clamped into the edge bins (8 bins total).
VALUE_BIN_EDGES = (-0.99, -0.66, -0.33, 0.0, 0.33, 0.66, 0.99)
VALUE_BIN_COUNT = len(VALUE_BIN_EDGES) + 1

_STD_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """An ordered run of real values with an optional class label."""

    values: np.ndarray
    label: int | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("a time series needs at least one value")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class SaxAlphabet:
    """Symbol alphabet with standard-normal quantile breakpoints.

    Breakpoint i is the inverse normal CDF at (i+1)/size, so the bins have
    equal probability under N(0, 1).  A value exactly on a breakpoint falls
    into the higher bin.
    """

    size: int
    breakpoints: tuple[float, ...]

    @classmethod
    def of_size(cls, t: int) -> "SaxAlphabet":
        if t < 2:
            raise ValueError(f"alphabet size must be >= 2, got {t}")
        points = tuple(inverse_normal_cdf((i + 1) / t) for i in range(t - 1))
        return cls(size=t, breakpoints=points)

    def symbol_for(self, value: float) -> int:
        return bisect_right(self.breakpoints, value)


@dataclass(frozen=True)
class SymbolSequence:
    """Ordered symbol indices; ``compressed`` marks run-collapsed sequences."""

    symbols: tuple[int, ...]
    compressed: bool = False

    def __post_init__(self):
        syms = tuple(int(s) for s in self.symbols)
        if any(s < 0 for s in syms):
            raise ValueError("symbol indices must be non-negative")
        if self.compressed and any(a == b for a, b in zip(syms, syms[1:])):
            raise ValueError("compressed sequence has adjacent repeats")
        object.__setattr__(self, "symbols", syms)

    def __len__(self) -> int:
        return len(self.symbols)

    def render(self) -> str:
        if all(s < len(SYMBOL_CHARS) for s in self.symbols):
            return "".join(SYMBOL_CHARS[s] for s in self.symbols)
        return ".".join(str(s) for s in self.symbols)

    @classmethod
    def from_string(cls, text: str, compressed: bool = False) -> "SymbolSequence":
        if "." in text:
            syms = tuple(int(part) for part in text.split("."))
        else:
            syms = tuple(SYMBOL_CHARS.index(ch) for ch in text)
        return cls(syms, compressed=compressed)


def inverse_normal_cdf(p: float) -> float:
    """Quantile function of N(0, 1) by rational approximation.

    Absolute error below 1e-8 on (0, 1); good for any breakpoint we build.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must be in (0, 1), got {p}")
    # Coefficients of the standard central/tail rational approximations.
    a = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
    b = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01)
    c = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
         -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
    d = (7.784695709041462e-03, 3.224671290700398e-01,
         2.445134137142996e+00, 3.754408661907416e+00)
    p_low, p_high = 0.02425, 1 - 0.02425
    if p < p_low:
        q = math.sqrt(-2 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1)
    elif p <= p_high:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1)
    else:
        q = math.sqrt(-2 * math.log(1 - p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1)
    # One Halley refinement step sharpens the tail estimates well below 1e-9.
    err = _normal_cdf(x) - p
    u = err * math.sqrt(2 * math.pi) * math.exp(x * x / 2)
    return x - u / (1 + x * u / 2)


def _normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2))


def normalize(series: TimeSeries) -> TimeSeries:
    """Z-score a series to zero mean and unit population std.

    A constant series maps to all zeros.
    """
    arr = series.values
    mu = float(arr.mean())
    sd = float(arr.std())
    if sd < _STD_FLOOR:
        return TimeSeries(np.zeros_like(arr), label=series.label)
    return TimeSeries((arr - mu) / sd, label=series.label)


def sax(series: TimeSeries, w: int, alphabet: SaxAlphabet) -> SymbolSequence:
    """Map a (normalized) series to ceil(m/w) symbols via segment means.

    Segment i averages values w*i .. w*(i+1)-1; the final segment averages
    whatever values remain.
    """
    if w < 1:
        raise ValueError(f"segment length must be >= 1, got {w}")
    arr = series.values
    if arr.size == 0:
        raise ValueError("cannot transform an empty series")
    starts = np.arange(0, arr.size, w)
    sums = np.add.reduceat(arr, starts)
    counts = np.minimum(starts + w, arr.size) - starts
    means = sums / counts
    symbols = tuple(alphabet.symbol_for(float(v)) for v in means)
    return SymbolSequence(symbols, compressed=False)


def compress(seq: SymbolSequence) -> SymbolSequence:
    """Collapse adjacent duplicate runs to a single symbol.  Idempotent."""
    out: list[int] = []
    for s in seq.symbols:
        if not out or out[-1] != s:
            out.append(s)
    return SymbolSequence(tuple(out), compressed=True)


def quantize(series: TimeSeries, edges: tuple[float, ...] = VALUE_BIN_EDGES) -> SymbolSequence:
    """Bin every value directly (no segment averaging); used by the no-SAX
    ablation.  Values beyond the outermost edges land in the edge bins."""
    symbols = tuple(int(i) for i in np.digitize(series.values, edges))
    return SymbolSequence(symbols, compressed=False)


def transform_series(
    series: TimeSeries,
    t: int,
    w: int,
    *,
    no_sax: bool = False,
    no_compress: bool = False,
) -> SymbolSequence:
    """Full front-end pipeline for one series: normalize, symbolize, compress.

    With ``no_sax`` the values are binned individually into the fixed
    0.33-wide bins (alphabet size 8) instead of segment-mean SAX.
    """
    normed = normalize(series)
    if no_sax:
        seq = quantize(normed)
    else:
        seq = sax(normed, w, SaxAlphabet.of_size(t))
    if no_compress:
        return seq
    return compress(seq)


def effective_alphabet_size(t: int, no_sax: bool) -> int:
    """Protocol-visible symbol count: 8 fixed bins when SAX is disabled."""
    return VALUE_BIN_COUNT if no_sax else t

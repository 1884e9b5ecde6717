"""Uniformly sampled signals, CSV I/O, and delay-window pairing.

A :class:`Signal` is an immutable, uniformly sampled real-valued series.
An :class:`AlignedPair` packages an output signal of length ``N`` together
with the input slice of length ``N + M - 1`` that covers a delay search
window of ``M`` bins starting at ``delta_t_min_samples`` sample periods.

CSV files are UTF-8 with a ``time,value`` header, ``.`` decimal separator,
LF or CRLF line endings, and no thousands separators.  Timestamps are in
seconds, amplitudes in application units.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySignal,
    IncompatibleSampling,
    InsufficientCoverage,
    NonUniformSampling,
    ParseError,
    RangeNotMultipleOfPeriod,
)

# Relative deviation of any inter-sample gap from the median gap above which
# a file is rejected as non-uniformly sampled.
GAP_TOLERANCE = 1e-3

# Absolute slack (seconds) when checking that delay bounds and start-time
# offsets sit on the sample grid.
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Signal:
    """Immutable uniformly sampled series.

    samples: amplitudes (finite floats, length >= 1)
    sample_period: seconds between consecutive samples (> 0)
    start_time: timestamp of samples[0] in seconds
    """

    samples: np.ndarray
    sample_period: float
    start_time: float = 0.0

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise EmptySignal(f"samples must be 1-D, got shape {arr.shape}")
        if arr.size < 1:
            raise EmptySignal("signal must contain at least one sample")
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal samples must be finite (no NaN/Inf)")
        period = float(self.sample_period)
        if not (math.isfinite(period) and period > 0):
            raise ValueError(f"sample_period must be > 0, got {self.sample_period}")
        start = float(self.start_time)
        if not math.isfinite(start):
            raise ValueError("start_time must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_period", period)
        object.__setattr__(self, "start_time", start)

    def __len__(self) -> int:
        return self.samples.size

    def times(self) -> np.ndarray:
        """Timestamps of all samples, in seconds."""
        return self.start_time + np.arange(self.samples.size) * self.sample_period

    @property
    def end_time(self) -> float:
        return self.start_time + (self.samples.size - 1) * self.sample_period


@dataclass(frozen=True)
class AlignedPair:
    """Input/output signals prepared for a delay search window.

    The window spans ``m_bins`` integer delays starting at
    ``delta_t_min_samples`` (which may be negative).  The input must hold
    exactly ``len(output) + m_bins - 1`` samples and start
    ``(delta_t_min_samples + m_bins - 1)`` periods before the output.
    """

    input: Signal
    output: Signal
    delta_t_min_samples: int
    m_bins: int

    def __post_init__(self):
        object.__setattr__(self, "delta_t_min_samples", int(self.delta_t_min_samples))
        object.__setattr__(self, "m_bins", int(self.m_bins))
        if self.m_bins < 1:
            raise ValueError(f"m_bins must be >= 1, got {self.m_bins}")
        if self.input.sample_period != self.output.sample_period:
            raise IncompatibleSampling(
                f"sample periods differ: {self.input.sample_period} vs "
                f"{self.output.sample_period}"
            )
        n_in, n_out = len(self.input), len(self.output)
        if n_in != n_out + self.m_bins - 1:
            raise ValueError(
                f"input length {n_in} != output length {n_out} + m_bins {self.m_bins} - 1"
            )
        t = self.sample_period
        expected_start = self.output.start_time - (self.delta_t_min_samples + self.m_bins - 1) * t
        if abs(self.input.start_time - expected_start) > GRID_TOLERANCE:
            raise ValueError(
                f"input start_time {self.input.start_time} != expected {expected_start}"
            )

    @property
    def sample_period(self) -> float:
        return self.output.sample_period

    @property
    def n(self) -> int:
        """Number of output samples."""
        return len(self.output)

    def delay_seconds(self, j) -> float:
        """Delay represented by bin ``j``, in seconds."""
        return (self.delta_t_min_samples + j) * self.sample_period


def load_csv(path) -> Signal:
    """Read a ``time,value`` CSV into a Signal.

    The sample period is the median inter-sample gap; any gap deviating
    from the median by more than 0.1% rejects the file as non-uniform.
    """
    times: list[float] = []
    values: list[float] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty file, expected 'time,value' header", row=1)
        header = [h.strip().lower() for h in header]
        if header[:2] != ["time", "value"]:
            raise ParseError(f"expected header 'time,value', got {','.join(header)}", row=1)
        for rownum, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise ParseError("expected two columns", row=rownum)
            try:
                t = float(row[0])
                v = float(row[1])
            except ValueError as exc:
                raise ParseError(str(exc), row=rownum) from None
            if not (math.isfinite(t) and math.isfinite(v)):
                raise ParseError("non-finite entry", row=rownum)
            if times and t <= times[-1]:
                raise ParseError(
                    f"timestamps must be strictly increasing ({t} after {times[-1]})",
                    row=rownum,
                )
            times.append(t)
            values.append(v)
    if not values:
        raise ParseError("no data rows", row=2)
    if len(values) == 1:
        raise ParseError("need at least two rows to determine the sample period", row=2)
    gaps = np.diff(np.asarray(times))
    period = float(np.median(gaps))
    deviation = float(np.max(np.abs(gaps - period)))
    if deviation > GAP_TOLERANCE * period:
        raise NonUniformSampling(
            f"max gap deviation {deviation:.3e}s exceeds "
            f"{GAP_TOLERANCE * period:.3e}s (0.1% of median gap {period:.3e}s)"
        )
    return Signal(np.asarray(values), period, start_time=times[0])


def save_csv(signal: Signal, path) -> None:
    """Write a Signal as ``time,value`` rows.

    Floats are written with shortest round-trip repr, so a reload
    reproduces amplitudes exactly.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("time,value\n")
        t0, dt = signal.start_time, signal.sample_period
        for k, v in enumerate(signal.samples):
            fh.write(f"{t0 + k * dt!r},{float(v)!r}\n")


def _as_grid_samples(value_s: float, period: float, name: str) -> int:
    n = round(value_s / period)
    if abs(n * period - value_s) > GRID_TOLERANCE:
        raise RangeNotMultipleOfPeriod(
            f"{name}={value_s}s is not a multiple of the sample period {period}s"
        )
    return n


def make_aligned_pair(
    input_signal: Signal,
    output_signal: Signal,
    delta_t_min: float,
    delta_t_max: float,
    pad: str = "error",
) -> AlignedPair:
    """Slice the input around the output to cover [delta_t_min, delta_t_max).

    Both bounds are in seconds and must sit on the sample grid.  The number
    of delay bins is ``M = round((delta_t_max - delta_t_min) / T)``.  With
    ``pad="edge"`` missing coverage is filled by replicating the first/last
    input sample; with ``pad="error"`` it raises ``InsufficientCoverage``.
    """
    if pad not in ("error", "edge"):
        raise ValueError(f"pad must be 'error' or 'edge', got {pad!r}")
    t = output_signal.sample_period
    if input_signal.sample_period != t:
        raise IncompatibleSampling(
            f"sample periods differ: {input_signal.sample_period} vs {t}"
        )
    if not delta_t_max > delta_t_min:
        raise ValueError(f"delta_t_max ({delta_t_max}) must exceed delta_t_min ({delta_t_min})")
    dt_min_samples = _as_grid_samples(delta_t_min, t, "delta_t_min")
    m_bins = _as_grid_samples(delta_t_max - delta_t_min, t, "delta_t_max - delta_t_min")

    required_start = output_signal.start_time - (dt_min_samples + m_bins - 1) * t
    offset = (required_start - input_signal.start_time) / t
    start_idx = round(offset)
    if abs(start_idx - offset) > GRID_TOLERANCE / t:
        raise IncompatibleSampling(
            "input and output sample grids are offset by a non-integer number of periods"
        )
    n_needed = len(output_signal) + m_bins - 1
    end_idx = start_idx + n_needed

    missing_head = max(0, -start_idx)
    missing_tail = max(0, end_idx - len(input_signal))
    if missing_head or missing_tail:
        if pad == "error":
            raise InsufficientCoverage(
                f"input misses {missing_head} leading and {missing_tail} trailing "
                f"samples for the requested delay window",
                missing_samples=missing_head + missing_tail,
            )
        core = input_signal.samples[max(0, start_idx):min(len(input_signal), end_idx)]
        sliced = np.concatenate([
            np.full(missing_head, input_signal.samples[0]),
            core,
            np.full(missing_tail, input_signal.samples[-1]),
        ])
    else:
        sliced = input_signal.samples[start_idx:end_idx]

    input_slice = Signal(sliced, t, start_time=required_start)
    return AlignedPair(input_slice, output_signal, dt_min_samples, m_bins)


def aligned_pair_from_arrays(
    f,
    g,
    delta_t_min_samples: int = 0,
    m_bins: int | None = None,
    sample_period: float = 1.0,
    output_start_time: float = 0.0,
) -> AlignedPair:
    """Build an AlignedPair directly from sample arrays.

    ``f`` must have ``len(g) + m_bins - 1`` samples; ``m_bins`` defaults to
    the value implied by the lengths.  Start times are derived so the pair
    invariants hold exactly.
    """
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if m_bins is None:
        m_bins = f.size - g.size + 1
    t = sample_period
    input_start = output_start_time - (delta_t_min_samples + m_bins - 1) * t
    return AlignedPair(
        Signal(f, t, start_time=input_start),
        Signal(g, t, start_time=output_start_time),
        delta_t_min_samples,
        m_bins,
    )

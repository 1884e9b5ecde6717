"""Shared fixtures and reference implementations for the test suite."""

from __future__ import annotations

import numpy as np

import etvo


def motion_signal(n: int, sample_period: float = 1e-3, seed: int = 0) -> etvo.Signal:
    """Hand-motion-like trace: a few incommensurate sinusoids with a quiet
    stretch in the middle, normalized to roughly unit scale."""
    rng = np.random.default_rng(seed)
    tt = np.arange(n) * sample_period
    x = (0.9 * np.sin(2 * np.pi * 0.4 * tt + rng.uniform(0, 6)) +
         0.5 * np.sin(2 * np.pi * 1.1 * tt + rng.uniform(0, 6)) +
         0.3 * np.sin(2 * np.pi * 2.3 * tt + rng.uniform(0, 6)))
    env = np.ones(n)
    lo, hi = n // 3, n // 2
    ramp = min(200, lo)
    if hi > lo:
        env[lo:hi] = 0.05
        env[lo - ramp:lo] = np.linspace(1.0, 0.05, ramp)
        env[hi:hi + ramp] = np.linspace(0.05, 1.0, min(ramp, n - hi))[: n - hi]
    return etvo.Signal(x * env, sample_period)


def random_pair(rng, n_max: int = 10, m_max: int = 4, dt_min_range=(0, 0)):
    """Small random aligned pair with amplitudes uniform in [-1, 1]."""
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    dtm = int(rng.integers(dt_min_range[0], dt_min_range[1] + 1))
    f = rng.uniform(-1, 1, n + m - 1)
    g = rng.uniform(-1, 1, n)
    return etvo.aligned_pair_from_arrays(f, g, dtm, m)


def pure_delay_pair(d: int, m: int = 4, n: int = 50, seed: int = 0,
                    delta_t_min_samples: int = 0, sample_period: float = 1e-3):
    """Output is the input delayed by exactly d sample periods; d must be a
    representable bin (delta_t_min_samples <= d < delta_t_min_samples + m)."""
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(n + m - 1)
    j = d - delta_t_min_samples
    assert 0 <= j < m
    g = f[m - 1 - j: m - 1 - j + n].copy()
    return etvo.aligned_pair_from_arrays(f, g, delta_t_min_samples, m, sample_period)


def time_aligned_input_slice(pair) -> etvo.Signal:
    """Input samples at the output timestamps (clamped for positive-only
    delay windows), as a Signal for the DTW baseline."""
    f = pair.input.samples
    n, m = pair.n, pair.m_bins
    start = min(max(pair.delta_t_min_samples + m - 1, 0), len(f) - n)
    return etvo.Signal(f[start:start + n], pair.sample_period, pair.output.start_time)


def dtw_adjustment_count(offsets, sample_period: float) -> int:
    """Adjustment events on a DTW offset series: maximal same-direction runs
    of nonzero change, mirroring how the aligner's events are counted."""
    bins = np.rint(np.asarray(offsets) / sample_period).astype(int)
    sign = np.sign(np.diff(bins))
    runs = 0
    prev = 0
    for s in sign:
        if s != 0 and s != prev:
            runs += 1
        prev = s
    return runs

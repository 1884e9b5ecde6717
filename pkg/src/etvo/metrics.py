"""Scalar session-quality metrics derived from an alignment.

EDD (effective delay derivative) is the mean absolute first difference of
the ETO series: how much the estimated delay churns per sample interval.
ERMSE (effective RMSE) is the RMS of the value-offset series: the residual
amplitude error once timing has been accounted for.  Together they replace
a single RMSE number that silently mixes the two degradation axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .alignment import AlignmentConfig, AlignmentResult, count_adjustments
from .errors import NegativeEvo, TooShort
from .signals import AlignedPair, Signal


@dataclass(frozen=True)
class TunedPenalties:
    """Penalty recipe derived from the signal's average speed.

    p_prop is the sample period times the mean absolute velocity (one
    delay step should cost about as much squared error as it could cause),
    p_fixed twice that, p_slack equal to p_prop.  ``degenerate`` flags a
    constant signal, where every penalty collapses to zero.
    """

    p_prop: float
    p_fixed: float
    p_slack: float
    degenerate: bool = False


@dataclass(frozen=True)
class MetricReport:
    """Scalar metrics for one aligned pair under one configuration."""

    edd: float                      # seconds of delay change per sample interval
    ermse: float                    # amplitude units
    rmse_constant_delay: float      # best achievable RMSE without warping
    best_constant_delay: float      # seconds
    n_adjustments: int
    config_echo: AlignmentConfig

    def to_json_dict(self) -> dict:
        return {
            "edd_s_per_sample": self.edd,
            "ermse": self.ermse,
            "rmse_const_delay": self.rmse_constant_delay,
            "best_const_delay_s": self.best_constant_delay,
            "n_adjustments": self.n_adjustments,
            "config": asdict(self.config_echo),
        }


def edd(eto) -> float:
    """Mean absolute first difference of the ETO series.

    Uses all N-1 first differences with divisor N-1, so one adjustment
    contributes the same regardless of where in the series it occurs.
    """
    eto = np.asarray(eto, dtype=np.float64)
    if eto.size < 2:
        raise TooShort("EDD needs at least two samples")
    return float(np.abs(np.diff(eto)).mean())


def ermse(evo) -> float:
    """Root mean square of the value-offset series."""
    evo = np.asarray(evo, dtype=np.float64)
    if evo.size == 0:
        raise TooShort("ERMSE needs a non-empty series")
    if np.any(evo < 0):
        raise NegativeEvo("value-offset series contains negative entries")
    return float(math.sqrt(evo.mean()))


def best_constant_delay_rmse(pair: AlignedPair) -> tuple[float, float]:
    """Brute force over the delay bins: the single constant delay with the
    lowest RMSE, ties going to the smaller delay."""
    f = pair.input.samples
    g = pair.output.samples
    n, m = pair.n, pair.m_bins
    best_j = 0
    best_mse = math.inf
    for j in range(m):
        seg = f[m - 1 - j: m - 1 - j + n]
        mse = float(((g - seg) ** 2).mean())
        if mse < best_mse:
            best_mse = mse
            best_j = j
    return pair.delay_seconds(best_j), math.sqrt(best_mse)


def auto_tune(signal: Signal) -> TunedPenalties:
    """Penalty recipe from the signal's mean absolute velocity."""
    x = signal.samples
    if x.size < 2:
        raise TooShort("auto tuning needs at least two samples")
    t = signal.sample_period
    v_avg = float(np.abs(np.diff(x)).mean()) / t
    p_prop = t * v_avg
    return TunedPenalties(
        p_prop=p_prop,
        p_fixed=2.0 * p_prop,
        p_slack=p_prop,
        degenerate=(p_prop == 0.0),
    )


def compute_report(pair: AlignedPair, result: AlignmentResult,
                   cfg: AlignmentConfig) -> MetricReport:
    best_delay, best_rmse = best_constant_delay_rmse(pair)
    return MetricReport(
        edd=edd(result.eto) if result.eto.size >= 2 else 0.0,
        ermse=ermse(result.evo),
        rmse_constant_delay=best_rmse,
        best_constant_delay=best_delay,
        n_adjustments=count_adjustments(result.w),
        config_echo=cfg,
    )

"""Effective time/value offset extraction for networked control signals.

The package aligns an output signal against an input signal over a bounded
delay window, penalizing delay adjustments so the extracted per-sample time
offset (ETO) tracks what the channel actually did instead of chasing every
sample of noise.  The residual per-sample value offset (EVO) and the scalar
metrics EDD/ERMSE quantify timing churn and amplitude error separately.
Also included: a classic DTW baseline, a network channel simulator, and an
exhaustive oracle for verifying the dynamic program on small instances.
"""

from .alignment import (
    AlignmentConfig,
    AlignmentResult,
    DirectionMatrix,
    align,
    backtrack,
    compute_evo,
    count_adjustments,
    delta,
    fast_forward,
    path_cost,
    reference_forward,
    reference_path,
)
from .channel import (
    ChannelConfig,
    PacketLog,
    add_awgn,
    apply_deadband,
    ge_loss_sequence,
    jitter_sequence,
    make_channel_pair,
    simulate,
)
from .dtw import DtwResult, dtw_align
from .errors import EtvoError
from .metrics import (
    MetricReport,
    TunedPenalties,
    auto_tune,
    best_constant_delay_rmse,
    compute_report,
    edd,
    ermse,
)
from .oracle import brute_force_align, count_paths, enumerate_paths
from .signals import (
    AlignedPair,
    Signal,
    aligned_pair_from_arrays,
    load_csv,
    make_aligned_pair,
    save_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedPair",
    "AlignmentConfig",
    "AlignmentResult",
    "ChannelConfig",
    "DirectionMatrix",
    "DtwResult",
    "EtvoError",
    "MetricReport",
    "PacketLog",
    "Signal",
    "TunedPenalties",
    "add_awgn",
    "align",
    "aligned_pair_from_arrays",
    "apply_deadband",
    "auto_tune",
    "backtrack",
    "best_constant_delay_rmse",
    "brute_force_align",
    "compute_evo",
    "compute_report",
    "count_adjustments",
    "count_paths",
    "delta",
    "dtw_align",
    "edd",
    "enumerate_paths",
    "ermse",
    "fast_forward",
    "ge_loss_sequence",
    "jitter_sequence",
    "load_csv",
    "make_aligned_pair",
    "make_channel_pair",
    "path_cost",
    "reference_forward",
    "reference_path",
    "save_csv",
    "simulate",
]

"""Network degradation pipeline for generating input/output signal pairs.

Stages, in order: perceptual deadband (suppress sends below a Weber
fraction of the last sent value), bursty Gilbert-Elliott packet loss,
per-packet delay with correlated jitter, zero-order-hold reconstruction at
the receiver (a late stale packet never overwrites newer data), and
finally additive white Gaussian noise on the reconstructed signal.

Each stage draws from its own RNG stream derived from the config seed, so
toggling one impairment does not perturb the noise realization of another.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import ZeroPowerSignal
from .signals import AlignedPair, Signal, make_aligned_pair

_STAGE_GE, _STAGE_JITTER, _STAGE_AWGN = 0, 1, 2

STATUS_DELIVERED = "delivered"
STATUS_LOST = "lost"
STATUS_SUPPRESSED = "suppressed"


@dataclass(frozen=True)
class ChannelConfig:
    """Impairment parameters; all probabilities in [0, 1].

    awgn_snr_db of ``None`` disables the noise stage.  jitter_correlation
    is the lag-1 autocorrelation of the per-packet delay; the driving noise
    is scaled so the stationary delay std equals jitter_std regardless of
    the correlation.
    """

    mean_latency: float = 0.0
    jitter_std: float = 0.0
    jitter_correlation: float = 0.0
    ge_p: float = 0.0
    ge_r: float = 1.0
    loss_in_bad: float = 1.0
    deadband_fraction: float = 0.0
    awgn_snr_db: float | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("ge_p", "ge_r", "loss_in_bad"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if not 0.0 <= self.jitter_correlation < 1.0:
            raise ValueError(
                f"jitter_correlation must be in [0, 1), got {self.jitter_correlation}"
            )
        if self.mean_latency < 0 or self.jitter_std < 0 or self.deadband_fraction < 0:
            raise ValueError("latency, jitter, and deadband must be >= 0")

    def to_json(self) -> str:
        d = asdict(self)
        if d["awgn_snr_db"] is None:
            d["awgn_snr_db"] = "off"
        return json.dumps(d, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ChannelConfig":
        d = json.loads(text)
        snr = d.get("awgn_snr_db")
        if snr in (None, "off"):
            d["awgn_snr_db"] = None
        return cls(**d)


@dataclass(frozen=True)
class PacketLog:
    """One record per input sample tick.

    send_time is always populated; arrival_time is NaN for lost or
    suppressed packets; value is NaN when the deadband suppressed the send.
    """

    send_time: np.ndarray
    arrival_time: np.ndarray
    value: np.ndarray
    status: np.ndarray  # array of status strings

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["send_time", "arrival_time", "value", "status"])
            for t, a, v, s in zip(self.send_time, self.arrival_time, self.value, self.status):
                writer.writerow([
                    repr(float(t)),
                    "" if math.isnan(a) else repr(float(a)),
                    "" if math.isnan(v) else repr(float(v)),
                    s,
                ])


def _stage_rng(seed, stage: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(3)[stage])


def ge_loss_sequence(n: int, p: float, r: float, loss_in_bad: float = 1.0,
                     seed=0) -> np.ndarray:
    """Two-state Markov loss: Good->Bad with probability p, Bad->Good with
    probability r, packets lost in Bad with probability loss_in_bad.
    Starts in Good.  Returns a boolean array, True = lost."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    transitions = rng.random(n).tolist()
    loss_draw = rng.random(n).tolist()
    lost = np.zeros(n, dtype=bool)
    bad = False
    for k in range(n):
        if bad:
            if loss_draw[k] < loss_in_bad:
                lost[k] = True
            if transitions[k] < r:
                bad = False
        elif transitions[k] < p:
            bad = True
    return lost


def jitter_sequence(n: int, mean_latency: float, jitter_std: float, rho: float,
                    seed=0) -> np.ndarray:
    """AR(1) per-packet delay around the mean latency, clamped at zero.

    The innovation is scaled by sqrt(1 - rho^2) so the stationary std is
    jitter_std for any correlation.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n).tolist()
    d = [0.0] * n
    prev = mean_latency + jitter_std * z[0]
    d[0] = prev
    scale = math.sqrt(1.0 - rho * rho) * jitter_std
    for k in range(1, n):
        prev = mean_latency + rho * (prev - mean_latency) + scale * z[k]
        d[k] = prev
    return np.maximum(np.asarray(d), 0.0)


def apply_deadband(signal: Signal, fraction: float) -> np.ndarray:
    """Weber-law transmit mask: sample k is sent iff it deviates from the
    most recently *sent* value by more than fraction times that value's
    magnitude.  Sample 0 is always sent."""
    x = signal.samples
    mask = np.zeros(x.size, dtype=bool)
    mask[0] = True
    if fraction <= 0:
        mask[:] = True
        return mask
    last = x[0]
    for k in range(1, x.size):
        if abs(x[k] - last) > fraction * abs(last):
            mask[k] = True
            last = x[k]
    return mask


def add_awgn(signal: Signal, snr_db: float, seed=0) -> Signal:
    """Additive white Gaussian noise at the requested SNR relative to the
    signal's mean square power."""
    x = signal.samples
    power = float((x ** 2).mean())
    if power <= 0.0:
        raise ZeroPowerSignal("cannot set an SNR against a zero-power signal")
    noise_std = math.sqrt(power / 10.0 ** (snr_db / 10.0))
    rng = np.random.default_rng(seed)
    noisy = x + noise_std * rng.standard_normal(x.size)
    return Signal(noisy, signal.sample_period, signal.start_time)


def _reconstruct(values: np.ndarray, delivered: np.ndarray, arrival: np.ndarray,
                 t0: float, period: float, n_out: int) -> np.ndarray:
    """Zero-order hold over the latest-sent packet that has arrived by each
    output tick; the first input value before anything arrives."""
    best = np.full(n_out, -1, dtype=np.int64)
    idx = np.nonzero(delivered)[0]
    if idx.size:
        # first output tick at or after the arrival, with a small guard for
        # arrivals that land exactly on the grid
        slots = np.ceil((arrival[idx] - t0) / period - 1e-9).astype(np.int64)
        slots = np.maximum(slots, 0)
        in_range = slots < n_out
        np.maximum.at(best, slots[in_range], idx[in_range])
    best = np.maximum.accumulate(best)
    out = np.where(best >= 0, values[np.maximum(best, 0)], values[0])
    return out


def simulate(input_signal: Signal, cfg: ChannelConfig) -> tuple[Signal, PacketLog]:
    """Run the full pipeline; the output shares the input's time grid.

    Deterministic for a given (input, cfg): stage RNG streams are derived
    from cfg.seed with fixed offsets.
    """
    x = input_signal.samples
    n = x.size
    t0 = input_signal.start_time
    period = input_signal.sample_period
    send_times = input_signal.times()

    mask = apply_deadband(input_signal, cfg.deadband_fraction)
    lost = ge_loss_sequence(
        n, cfg.ge_p, cfg.ge_r, cfg.loss_in_bad,
        seed=np.random.SeedSequence(cfg.seed).spawn(3)[_STAGE_GE],
    )
    delays = jitter_sequence(
        n, cfg.mean_latency, cfg.jitter_std, cfg.jitter_correlation,
        seed=np.random.SeedSequence(cfg.seed).spawn(3)[_STAGE_JITTER],
    )

    delivered = mask & ~lost
    arrival = np.where(delivered, send_times + delays, np.nan)
    out = _reconstruct(x, delivered, arrival, t0, period, n)

    output = Signal(out, period, start_time=t0)
    if cfg.awgn_snr_db is not None:
        output = add_awgn(
            output, cfg.awgn_snr_db,
            seed=np.random.SeedSequence(cfg.seed).spawn(3)[_STAGE_AWGN],
        )

    status = np.where(
        mask, np.where(lost, STATUS_LOST, STATUS_DELIVERED), STATUS_SUPPRESSED
    )
    log = PacketLog(
        send_time=send_times,
        arrival_time=arrival,
        value=np.where(mask, x, np.nan),
        status=status,
    )
    return output, log


def make_channel_pair(input_signal: Signal, cfg: ChannelConfig, delta_t_min: float,
                      delta_t_max: float) -> tuple[AlignedPair, PacketLog]:
    """Simulate the channel and trim the output so the original input fully
    covers the requested delay window with no padding."""
    out_full, log = simulate(input_signal, cfg)
    t = input_signal.sample_period
    dt_min_samples = round(delta_t_min / t)
    m_bins = round((delta_t_max - delta_t_min) / t)
    # first output index whose input window starts at or after input[0]
    k0 = max(0, dt_min_samples + m_bins - 1)
    head = k0 - (dt_min_samples + m_bins - 1)
    n_out = min(len(input_signal) - (m_bins - 1) - head, len(out_full) - k0)
    if n_out < 1:
        raise ValueError("input too short for the requested delay window")
    out_sig = Signal(
        out_full.samples[k0:k0 + n_out], t,
        start_time=out_full.start_time + k0 * t,
    )
    pair = make_aligned_pair(input_signal, out_sig, delta_t_min, delta_t_max, pad="error")
    return pair, log

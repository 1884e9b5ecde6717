import numpy as np
import pytest

import etvo
from etvo.alignment import AlignmentConfig
from etvo.errors import NegativeEvo, TooShort
from helpers import pure_delay_pair, random_pair


# --- EDD ------------------------------------------------------------------

def test_edd_constant_series():
    assert etvo.edd(np.full(10, 0.015)) == 0.0


def test_edd_arithmetic():
    assert etvo.edd(np.array([0.0, 1.0, 1.0, 3.0]) * 1e-3) == pytest.approx(1e-3)


def test_edd_too_short():
    with pytest.raises(TooShort):
        etvo.edd([0.01])


def test_edd_time_reversal_invariant():
    rng = np.random.default_rng(1)
    eto = rng.uniform(0, 0.05, 50)
    assert etvo.edd(eto) == pytest.approx(etvo.edd(eto[::-1]), rel=1e-12)


# --- ERMSE ------------------------------------------------------------------

def test_ermse_zeros():
    assert etvo.ermse(np.zeros(5)) == 0.0


def test_ermse_arithmetic():
    assert etvo.ermse(np.array([4.0, 0.0, 0.0, 0.0])) == 1.0


def test_ermse_rejects_negative():
    with pytest.raises(NegativeEvo):
        etvo.ermse(np.array([1.0, -0.1]))


def test_ermse_single_bin_equals_plain_rmse():
    rng = np.random.default_rng(2)
    f = rng.standard_normal(40)
    g = f + rng.standard_normal(40) * 0.3
    pair = etvo.aligned_pair_from_arrays(f, g, 0, 1)
    cfg = AlignmentConfig(0, 1, 0.1, 0.1, 0.1)
    res = etvo.align(pair, cfg)
    direct = float(np.sqrt(((g - f) ** 2).mean()))
    assert etvo.ermse(res.evo) == pytest.approx(direct, rel=1e-12)


# --- constant-delay baseline ---------------------------------------------------

def test_best_constant_delay_pure_shift():
    pair = pure_delay_pair(1, m=4, n=60, seed=3)
    delay, rmse = etvo.best_constant_delay_rmse(pair)
    assert delay == pytest.approx(pair.sample_period)
    assert rmse == pytest.approx(0.0, abs=1e-15)


def test_best_constant_delay_under_noise():
    rng = np.random.default_rng(4)
    m, n, d = 6, 20_000, 3
    f = np.cumsum(rng.standard_normal(n + m - 1)) * 0.1
    noise_std = 0.05 * f.std()
    g = f[m - 1 - d: m - 1 - d + n] + rng.normal(0, noise_std, n)
    pair = etvo.aligned_pair_from_arrays(f, g, 0, m)
    delay, rmse = etvo.best_constant_delay_rmse(pair)
    assert delay == pytest.approx(d * pair.sample_period)
    assert rmse == pytest.approx(noise_std, rel=0.05)


def test_best_constant_delay_tie_prefers_smaller():
    pair = etvo.aligned_pair_from_arrays(np.zeros(6), np.zeros(4), 0, 3)
    delay, rmse = etvo.best_constant_delay_rmse(pair)
    assert delay == 0.0 and rmse == 0.0


def test_huge_prop_penalty_reaches_constant_delay_limit():
    rng = np.random.default_rng(5)
    m, n = 8, 800
    f = np.sin(np.arange(n + m - 1) * 0.01) + 0.1 * rng.standard_normal(n + m - 1)
    g = f[m - 1 - 4: m - 1 - 4 + n] + 0.05 * rng.standard_normal(n)
    pair = etvo.aligned_pair_from_arrays(f, g, 0, m)
    power = float((g ** 2).mean())
    p = 1e6 * power
    cfg = AlignmentConfig(0, m, p, 2 * p, p)
    res = etvo.align(pair, cfg)
    assert etvo.edd(res.eto) == 0.0
    _, best_rmse = etvo.best_constant_delay_rmse(pair)
    assert etvo.ermse(res.evo) == pytest.approx(best_rmse, rel=1e-9)


# --- tuning ---------------------------------------------------------------------

def test_auto_tune_ramp():
    sig = etvo.Signal([0.0, 1.0, 2.0, 3.0], 1.0)
    tuned = etvo.auto_tune(sig)
    assert tuned.p_prop == 1.0
    assert tuned.p_fixed == 2.0
    assert tuned.p_slack == 1.0
    assert not tuned.degenerate


def test_auto_tune_constant_signal_degenerate():
    tuned = etvo.auto_tune(etvo.Signal(np.full(10, 3.3), 1e-3))
    assert tuned.p_prop == 0.0 and tuned.p_fixed == 0.0 and tuned.p_slack == 0.0
    assert tuned.degenerate


def test_auto_tune_scales_linearly():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(50)
    a = etvo.auto_tune(etvo.Signal(x, 1e-3))
    b = etvo.auto_tune(etvo.Signal(4.0 * x, 1e-3))
    assert b.p_prop == pytest.approx(4.0 * a.p_prop, rel=1e-12)


def test_auto_tune_too_short():
    with pytest.raises(TooShort):
        etvo.auto_tune(etvo.Signal([1.0], 1e-3))


# --- warping only reduces error -----------------------------------------------

def test_unpenalized_ermse_never_exceeds_constant_delay():
    rng = np.random.default_rng(7)
    for _ in range(25):
        pair = random_pair(rng, n_max=10, m_max=4)
        cfg = AlignmentConfig(pair.delta_t_min_samples, pair.m_bins, 0.0, 0.0, 0.0)
        res = etvo.align(pair, cfg)
        _, best_rmse = etvo.best_constant_delay_rmse(pair)
        assert etvo.ermse(res.evo) <= best_rmse + 1e-12


# --- the shift-vs-smooth demonstration ------------------------------------------

def _shift_smooth_instance(shift=15, width=41, m=40, n_out=700):
    t = 1e-3
    n_in = n_out + m - 1
    tt = np.arange(n_in) * t
    x = np.exp(-0.5 * ((tt - 0.35) / 0.03) ** 2)
    g_shift = x[np.arange(n_out) + (m - 1) - shift]
    kern = np.ones(width) / width
    g_smooth = np.convolve(x, kern, mode="same")[np.arange(n_out) + (m - 1)]
    f_aligned = x[m - 1: m - 1 + n_out]
    pair_shift = etvo.aligned_pair_from_arrays(x, g_shift, 0, m, t)
    pair_smooth = etvo.aligned_pair_from_arrays(x, g_smooth, 0, m, t)
    rmse = lambda g: float(np.sqrt(((g - f_aligned) ** 2).mean()))
    return pair_shift, pair_smooth, rmse(g_shift), rmse(g_smooth)


def test_rmse_misleads_but_ermse_does_not():
    # a shifted pulse looks worse than a heavily smoothed one to plain RMSE,
    # while after alignment the residual error ordering flips
    pair_shift, pair_smooth, rmse_shift, rmse_smooth = _shift_smooth_instance()
    assert rmse_shift > rmse_smooth

    ermses = []
    for pair in (pair_shift, pair_smooth):
        tuned = etvo.auto_tune(pair.input)
        cfg = AlignmentConfig.for_pair(pair, tuned.p_prop, tuned.p_fixed, tuned.p_slack)
        ermses.append(etvo.ermse(etvo.align(pair, cfg).evo))
    assert ermses[0] < ermses[1]


def test_metric_report_serialization():
    pair = pure_delay_pair(1, m=3, n=30, seed=8)
    cfg = AlignmentConfig(0, 3, 0.01, 0.02, 0.01)
    res = etvo.align(pair, cfg)
    report = etvo.compute_report(pair, res, cfg)
    d = report.to_json_dict()
    assert set(d) == {"edd_s_per_sample", "ermse", "rmse_const_delay",
                      "best_const_delay_s", "n_adjustments", "config"}
    assert d["edd_s_per_sample"] == 0.0
    assert d["ermse"] == 0.0
    assert d["best_const_delay_s"] == pytest.approx(pair.sample_period)
    assert d["config"]["p_prop"] == 0.01

"""Figure rendering for the CLI report paths.

All functions write PNG files next to the delimited outputs and return the
written path.  Rendering is optional at the CLI level; the CSV/JSON outputs
stay authoritative.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_alignment(times, eto_s, evo, input_vals, output_vals, path) -> str:
    fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True)
    axes[0].plot(times, input_vals, label="input", lw=1.0)
    axes[0].plot(times, output_vals, label="output", lw=1.0, alpha=0.8)
    axes[0].set_ylabel("amplitude")
    axes[0].legend(loc="upper right")
    axes[1].plot(times, np.asarray(eto_s) * 1e3, color="tab:red", lw=1.0)
    axes[1].set_ylabel("ETO [ms]")
    axes[2].plot(times, evo, color="tab:purple", lw=1.0)
    axes[2].set_ylabel("EVO [amp$^2$]")
    axes[2].set_xlabel("time [s]")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return str(path)


def plot_compare(times, eto_s, dtw_offset_s, input_vals, output_vals, path) -> str:
    fig, axes = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
    axes[0].plot(times, input_vals, label="input", lw=1.0)
    axes[0].plot(times, output_vals, label="output", lw=1.0, alpha=0.8)
    axes[0].set_ylabel("amplitude")
    axes[0].legend(loc="upper right")
    axes[1].plot(times, np.asarray(dtw_offset_s) * 1e3, label="DTW offset", lw=1.0,
                 color="tab:orange")
    axes[1].plot(times, np.asarray(eto_s) * 1e3, label="ETO", lw=1.2, color="tab:red")
    axes[1].set_ylabel("time offset [ms]")
    axes[1].set_xlabel("time [s]")
    axes[1].legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return str(path)


def plot_sweep(p_props, edds, ermses, path) -> str:
    fig, ax1 = plt.subplots(figsize=(7, 5))
    ax1.loglog(p_props, np.maximum(edds, 1e-18), "o-", color="tab:red", label="EDD")
    ax1.set_xlabel("proportional penalty")
    ax1.set_ylabel("EDD [s/sample]", color="tab:red")
    ax2 = ax1.twinx()
    ax2.semilogx(p_props, ermses, "s-", color="tab:blue", label="ERMSE")
    ax2.set_ylabel("ERMSE [amplitude]", color="tab:blue")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return str(path)

"""Classic dynamic time warping between two equal-length signals.

Kept deliberately plain: squared Euclidean sample distance, full cumulative
matrix, both boundary points pinned.  This is the comparison baseline whose
start/end artifacts and unconstrained delay adjustments motivate the
penalized aligner in :mod:`etvo.alignment`, so no banding or other speedups
are applied.  The forward pass is vectorized over anti-diagonals, which
keeps a few thousand samples comfortable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySignal, IncompatibleSampling, LengthMismatch
from .signals import Signal


@dataclass(frozen=True)
class DtwResult:
    """Minimum-cost warp path between two length-N series.

    cost: total squared-distance along the optimal path
    warp_path: (K, 2) int array of (input index, output index), K in [N, 2N-1]
    time_offset: (input index - output index) * sample_period per path point
    """

    cost: float
    warp_path: np.ndarray
    time_offset: np.ndarray

    @property
    def k(self) -> int:
        return self.warp_path.shape[0]

    def offset_per_output_index(self) -> np.ndarray:
        """Per-output-sample offset: at output index k, the offset of the
        last path point whose output coordinate equals k."""
        n = int(self.warp_path[-1, 1]) + 1
        out = np.empty(n)
        for w0, w1, off in zip(self.warp_path[:, 0], self.warp_path[:, 1], self.time_offset):
            out[w1] = off
        return out


def _cumulative_matrix(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Padded (N+1, N+1) cumulative matrix, cell (i, j) stored at [i+1, j+1]."""
    n = f.size
    dist = (f[:, None] - g[None, :]) ** 2
    acc = np.full((n + 1, n + 1), np.inf)
    acc[1, 1] = dist[0, 0]
    for d in range(1, 2 * n - 1):
        lo = max(0, d - n + 1)
        hi = min(d, n - 1)
        ii = np.arange(lo, hi + 1)
        jj = d - ii
        best = np.minimum(np.minimum(acc[ii, jj + 1], acc[ii + 1, jj]), acc[ii, jj])
        acc[ii + 1, jj + 1] = dist[ii, jj] + best
    return acc


def _backtrack(acc: np.ndarray) -> np.ndarray:
    """Walk from (N-1, N-1) to (0, 0).

    Tie rule (the recurrence does not determine it): prefer the diagonal
    predecessor; between the two single steps prefer the one whose new
    offset i-j is smaller in magnitude, and prefer advancing the input
    when that still ties.  Deterministic by construction.
    """
    n = acc.shape[0] - 1
    i = j = n - 1
    path = [(i, j)]
    while i > 0 or j > 0:
        diag = acc[i, j]
        up = acc[i, j + 1]      # predecessor (i-1, j)
        left = acc[i + 1, j]    # predecessor (i, j-1)
        best = min(diag, up, left)
        if diag == best:
            i -= 1
            j -= 1
        elif up < left:
            i -= 1
        elif left < up:
            j -= 1
        elif abs((i - 1) - j) <= abs(i - (j - 1)):
            i -= 1
        else:
            j -= 1
        path.append((i, j))
    path.reverse()
    return np.asarray(path, dtype=np.int64)


def dtw_align(f: Signal, g: Signal) -> DtwResult:
    """Align two equal-length signals, minimizing cumulative squared distance.

    The returned cost is the global minimum over all warp paths that start
    at (0, 0), end at (N-1, N-1), and advance each coordinate by 0 or 1 per
    step (never both 0).
    """
    if isinstance(f, Signal) and isinstance(g, Signal):
        if f.sample_period != g.sample_period:
            raise IncompatibleSampling(
                f"sample periods differ: {f.sample_period} vs {g.sample_period}"
            )
        period = f.sample_period
        fa, ga = f.samples, g.samples
    else:
        fa = np.asarray(f, dtype=np.float64)
        ga = np.asarray(g, dtype=np.float64)
        period = 1.0
    if fa.size == 0 or ga.size == 0:
        raise EmptySignal("cannot align empty series")
    if fa.size != ga.size:
        raise LengthMismatch(f"lengths differ: {fa.size} vs {ga.size}")

    if fa.size == 1:
        path = np.array([[0, 0]], dtype=np.int64)
        cost = float((fa[0] - ga[0]) ** 2)
    else:
        acc = _cumulative_matrix(fa, ga)
        cost = float(acc[-1, -1])
        path = _backtrack(acc)
    offsets = (path[:, 0] - path[:, 1]).astype(np.float64) * period
    return DtwResult(cost=cost, warp_path=path, time_offset=offsets)

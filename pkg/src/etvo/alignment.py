"""Penalized delay-tracking alignment (the ETVO dynamic program).

The aligner matches each output sample ``g[i]`` to one input sample
``f[i - j + M - 1]`` where ``j`` is a delay bin in ``[0, M-1]``.  Per time
step the delay bin may stay (forward move), rise by exactly one as part of
a diagonal run, or drop by any amount within the step.  Every adjustment
(a maximal diagonal run, or a single multi-bin drop) is charged
``p_fixed + k * p_prop`` for magnitude ``k``, plus ``p_slack`` added to the
stored cost *after* the branch comparison.  Because the slack term is
excluded from the comparison itself, the recurrence with ``p_slack > 0`` is
a deterministic heuristic rather than a global argmin; with ``p_slack == 0``
it is exactly optimal over all monotone paths.

Two forward passes are provided:

* :func:`reference_forward` evaluates the branch minima directly per cell,
  O(N * M^2), keeping full cost tables.  It exists to validate the fast pass.
* :func:`fast_forward` is the streaming O(N * M) pass.  It keeps one running
  downward candidate, M diagonal candidates, and M forward lane costs, and
  emits a direction matrix for backtracking.

Both passes perform the same float operations in the same order, so their
costs and paths agree bit for bit on identical input.

Tie rules (fixed, documented): the forward branch wins any tie with an
adjustment branch; between the two adjustment branches the diagonal wins.
Within a branch minimum, the farther source wins ties (resets use a strict
comparison).

ETO (effective time offset) is the per-sample delay in seconds,
``(delta_t_min_samples + w[i]) * T``.  EVO (effective value offset) is the
per-sample residual squared distance; when the delay drops between samples
``i`` and ``i+1`` all distances of the dropped bins are attributed to
sample ``i``, so the EVO series sums to the path's total distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CorruptDirectionMatrix, InvalidPath
from .signals import AlignedPair

_FWD, _DOWN, _DIAG = 0, 1, 2


@dataclass(frozen=True)
class AlignmentConfig:
    """Delay window plus adjustment penalties.

    delta_t_min_samples: smallest searched delay, in sample periods (may be
        negative); m_bins: number of delay bins (>= 1).
    p_prop: cost per delay step changed; p_fixed: cost per adjustment event;
    p_slack: hysteresis cost added after an adjustment wins.  All penalties
    are in squared-amplitude units and must be finite and >= 0.
    """

    delta_t_min_samples: int
    m_bins: int
    p_prop: float
    p_fixed: float
    p_slack: float = 0.0

    def __post_init__(self):
        if self.m_bins < 1:
            raise ValueError(f"m_bins must be >= 1, got {self.m_bins}")
        for name in ("p_prop", "p_fixed", "p_slack"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    @classmethod
    def for_pair(cls, pair: AlignedPair, p_prop: float, p_fixed: float,
                 p_slack: float = 0.0) -> "AlignmentConfig":
        return cls(pair.delta_t_min_samples, pair.m_bins, p_prop, p_fixed, p_slack)


@dataclass(frozen=True)
class DirectionMatrix:
    """Backtracking jumps chosen by the forward pass.

    entries[j, i] describes how cell (time i, bin j) was reached:
    0 = forward from (i-1, j); d > 0 = drop within time step i from bin
    j + d; d < 0 = diagonal run of length -d from (i + d, j + d).
    j_start is the arg-min bin of the final column costs (ties go to the
    smallest delay), final_costs the full final column.
    """

    entries: np.ndarray
    j_start: int
    final_costs: np.ndarray

    @property
    def m_bins(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def total_cost(self) -> float:
        return float(self.final_costs[self.j_start])


@dataclass(frozen=True)
class AlignmentResult:
    """Warp path with its derived series and costs.

    w[i] is the delay bin of output sample i; eto the same in seconds;
    evo the per-sample residual squared distance.  total_cost includes all
    penalties, distance_cost only the accumulated sample distances.
    """

    w: np.ndarray
    eto: np.ndarray
    evo: np.ndarray
    total_cost: float
    distance_cost: float

    @property
    def n_adjustments(self) -> int:
        return count_adjustments(self.w)


def delta(pair: AlignedPair, i: int, j: int) -> float:
    """Squared distance between output sample i and the input sample it
    maps to under delay bin j."""
    g = pair.output.samples
    f = pair.input.samples
    d = g[i] - f[i - j + pair.m_bins - 1]
    return float(d * d)


@dataclass(frozen=True)
class ReferenceTables:
    """Full bookkeeping kept by the direct forward pass."""

    cost: np.ndarray        # (N, M) cumulative cost including the cell distance
    pre_cost: np.ndarray    # (N, M) cumulative cost before the cell distance
    branch: np.ndarray      # (N, M) 0 forward / 1 drop / 2 diagonal
    jump: np.ndarray        # (N, M) same encoding as DirectionMatrix entries
    j_start: int

    @property
    def total_cost(self) -> float:
        return float(self.cost[-1, self.j_start])


def reference_forward(pair: AlignedPair, cfg: AlignmentConfig) -> ReferenceTables:
    """Direct per-cell evaluation of the three-branch recurrence.

    For every cell the downward and diagonal branch minima are rebuilt from
    scratch by replaying the candidate scan, which makes the pass
    O(N * M^2) but keeps the arithmetic identical to the streaming pass.
    """
    f = pair.input.samples.tolist()
    g = pair.output.samples.tolist()
    n, m = pair.n, pair.m_bins
    p_prop, p_fixed, p_slack = cfg.p_prop, cfg.p_fixed, cfg.p_slack
    inf = math.inf

    dist = [[0.0] * m for _ in range(n)]
    for i in range(n):
        gi = g[i]
        base = i + m - 1
        row = dist[i]
        for j in range(m):
            dv = gi - f[base - j]
            row[j] = dv * dv

    pre = [[0.0] * m for _ in range(n)]
    cost = [[0.0] * m for _ in range(n)]
    branch = [[_FWD] * m for _ in range(n)]
    jump = [[0] * m for _ in range(n)]

    for i in range(n):
        for j in range(m - 1, -1, -1):
            fwd = cost[i - 1][j] if i > 0 else 0.0

            down = inf
            down_idx = -1
            for jp in range(m - 1, j, -1):
                b = pre[i][jp]
                if down > b:
                    down = b
                    down_idx = jp
                down = down + dist[i][jp] + p_prop
            diag = inf
            diag_idx = -1
            for k in range(min(i, j), 0, -1):
                b = pre[i - k][j - k]
                if diag > b:
                    diag = b
                    diag_idx = j - k
                diag = diag + dist[i - k][j - k] + p_prop

            if down < diag and down < fwd - p_fixed:
                pre[i][j] = down + p_fixed + p_slack
                branch[i][j] = _DOWN
                jump[i][j] = down_idx - j
            elif diag < fwd - p_fixed and diag <= down:
                pre[i][j] = diag + p_fixed + p_slack
                branch[i][j] = _DIAG
                jump[i][j] = diag_idx - j
            else:
                pre[i][j] = fwd
            cost[i][j] = pre[i][j] + dist[i][j]

    final = cost[n - 1]
    j_start = 0
    for j in range(1, m):
        if final[j] < final[j_start]:
            j_start = j
    return ReferenceTables(
        cost=np.asarray(cost),
        pre_cost=np.asarray(pre),
        branch=np.asarray(branch, dtype=np.int8),
        jump=np.asarray(jump, dtype=np.int64),
        j_start=j_start,
    )


def reference_path(tables: ReferenceTables) -> np.ndarray:
    """Recover the warp path from the reference tables.

    Written as a segment walker rather than the countdown loop used by
    :func:`backtrack` so the two can cross-check each other.
    """
    branch = tables.branch
    jump = tables.jump
    n, m = branch.shape
    w = np.empty(n, dtype=np.int64)
    i, j = n - 1, tables.j_start
    while i >= 0:
        while branch[i][j] == _DOWN:
            j += jump[i][j]
        if branch[i][j] == _DIAG:
            k = -int(jump[i][j])
            w[i] = j
            for s in range(1, k):
                w[i - s] = j - s
            i -= k
            j -= k
        else:
            w[i] = j
            i -= 1
    return w


def fast_forward(pair: AlignedPair, cfg: AlignmentConfig) -> DirectionMatrix:
    """Streaming forward pass, O(N * M) time, O(M) working state.

    Running candidates: ``c_down``/``idx_down`` hold the best drop source
    within the current time step, ``c_diag``/``idx_diag`` the best diagonal
    run source per bin, ``c_fwd`` the finalized lane costs of the previous
    step.  Candidates reset (strictly) whenever the lane they shadow became
    cheaper, and every candidate accrues the local distance plus ``p_prop``
    per step it spans.
    """
    f = pair.input.samples.tolist()
    g = pair.output.samples.tolist()
    n, m = pair.n, pair.m_bins
    p_prop, p_fixed, p_slack = cfg.p_prop, cfg.p_fixed, cfg.p_slack
    inf = math.inf

    c_fwd = [0.0] * m
    c_diag = [inf] * m
    idx_diag = [0] * m
    rows = np.zeros((n, m), dtype=np.int64)

    for i in range(n):
        gi = g[i]
        base = i + m - 1
        c_down = inf
        idx_down = 0
        c_diag[0] = inf
        row = rows[i]
        for j in range(m - 1, -1, -1):
            dv = gi - f[base - j]
            dv = dv * dv
            cf = c_fwd[j]
            cd = c_diag[j]

            if c_down < cd and c_down < cf - p_fixed:
                cf = c_down + p_fixed + p_slack
                c_fwd[j] = cf
                row[j] = idx_down - j
            elif cd < cf - p_fixed and cd <= c_down:
                cf = cd + p_fixed + p_slack
                c_fwd[j] = cf
                row[j] = idx_diag[j] - j

            if c_down > cf:
                c_down = cf
                idx_down = j
            if cd > cf:
                cd = cf
                c_diag[j] = cf
                idx_diag[j] = j

            if j + 1 < m:
                c_diag[j + 1] = cd + dv + p_prop
                idx_diag[j + 1] = idx_diag[j]
            c_down = c_down + dv + p_prop
            c_fwd[j] = cf + dv

    final = np.asarray(c_fwd)
    j_start = 0
    for j in range(1, m):
        if c_fwd[j] < c_fwd[j_start]:
            j_start = j
    return DirectionMatrix(entries=rows.T, j_start=j_start, final_costs=final)


def backtrack(dmatrix: DirectionMatrix, cfg: AlignmentConfig,
              sample_period: float) -> tuple[np.ndarray, np.ndarray]:
    """Extract the warp path and the ETO series from a direction matrix.

    Drops are resolved within their time step (the entry at the landing bin
    points back up to the source bin); a diagonal entry of -k replays k
    descending steps, after which the run's source cell is resolved like
    any other cell.  Raises ``CorruptDirectionMatrix`` if a jump leaves the
    valid index range.
    """
    entries = dmatrix.entries
    m, n = entries.shape
    j = dmatrix.j_start
    if not 0 <= j < m:
        raise CorruptDirectionMatrix(f"j_start {j} outside [0, {m - 1}]")
    w = np.empty(n, dtype=np.int64)
    run = 0
    i = n - 1
    while i >= 0:
        if run > 0:
            j -= 1
            run -= 1
            if j < 0:
                raise CorruptDirectionMatrix(f"diagonal run left bin range at time {i}")
            if run == 0:
                j, run = _resolve_cell(entries, i, j)
        else:
            j, run = _resolve_cell(entries, i, j)
        w[i] = j
        i -= 1
    if run != 0:
        raise CorruptDirectionMatrix("diagonal run crossed the first time step")
    eto = (cfg.delta_t_min_samples + w) * sample_period
    return w, eto


def _resolve_cell(entries: np.ndarray, i: int, j: int) -> tuple[int, int]:
    """Follow same-step drop jumps at (i, j); returns the final bin and the
    pending diagonal run length (0 if none)."""
    m = entries.shape[0]
    d = int(entries[j, i])
    hops = 0
    while d > 0:
        j += d
        hops += 1
        if j >= m or hops > m:
            raise CorruptDirectionMatrix(f"drop jump left bin range at time {i}")
        d = int(entries[j, i])
    run = 0
    if d < 0:
        run = -d
        if j - run < 0 or i - run < 0:
            raise CorruptDirectionMatrix(f"diagonal run out of range at time {i}")
    return j, run


def compute_evo(pair: AlignedPair, w: np.ndarray) -> np.ndarray:
    """Per-sample residual squared distance along a warp path.

    Sample i normally contributes its own matched distance; when the delay
    drops between i and i+1, the distances of every bin passed through
    (inclusive bounds) are attributed to sample i.  The series sums to the
    path's total distance.
    """
    w = np.asarray(w, dtype=np.int64)
    _check_path(w, pair.m_bins)
    f = pair.input.samples
    g = pair.output.samples
    n, m = pair.n, pair.m_bins

    idx = np.arange(n) - w + (m - 1)
    evo = (g - f[idx]) ** 2
    drops = np.nonzero(w[:-1] > w[1:])[0]
    for i in drops:
        lo, hi = int(w[i + 1]), int(w[i])
        # f indices run i - hi + m - 1 .. i - lo + m - 1 for bins hi .. lo
        seg = f[i - hi + m - 1: i - lo + m]
        evo[i] = float(((g[i] - seg) ** 2).sum())
    return evo


def count_adjustments(w: np.ndarray) -> int:
    """Number of adjustment events in a path: each drop between adjacent
    samples is one event; each maximal run of +1 rises is one event."""
    w = np.asarray(w)
    diffs = np.diff(w)
    n_drops = int(np.count_nonzero(diffs < 0))
    ups = diffs == 1
    n_runs = int(np.count_nonzero(ups & ~np.concatenate([[False], ups[:-1]])))
    return n_drops + n_runs


def path_cost(pair: AlignedPair, w: np.ndarray, cfg: AlignmentConfig) -> tuple[float, float]:
    """Distance and penalty cost of an arbitrary valid path.

    The penalty charges each adjustment event ``p_fixed + magnitude *
    p_prop + p_slack``, where a drop's magnitude is its bin count and a
    rise run's magnitude is its length.  Raises ``InvalidPath`` if ``w``
    violates monotonicity/continuity.
    """
    w = np.asarray(w, dtype=np.int64)
    _check_path(w, pair.m_bins)
    distance = float(compute_evo(pair, w).sum())

    diffs = np.diff(w)
    penalty = 0.0
    per_event = cfg.p_fixed + cfg.p_slack
    drops = diffs[diffs < 0]
    penalty += drops.size * per_event + float(-drops.sum()) * cfg.p_prop
    ups = diffs == 1
    n_runs = int(np.count_nonzero(ups & ~np.concatenate([[False], ups[:-1]])))
    penalty += n_runs * per_event + float(np.count_nonzero(ups)) * cfg.p_prop
    return distance, penalty


def _check_path(w: np.ndarray, m_bins: int) -> None:
    if w.size == 0:
        raise InvalidPath("empty path")
    if w.min() < 0 or w.max() >= m_bins:
        raise InvalidPath(f"path leaves bin range [0, {m_bins - 1}]")
    if np.any(w[1:] > w[:-1] + 1):
        raise InvalidPath("delay may rise by at most one bin per step")


def align(pair: AlignedPair, cfg: AlignmentConfig) -> AlignmentResult:
    """Run the full pipeline: forward pass, backtracking, EVO extraction."""
    if cfg.m_bins != pair.m_bins or cfg.delta_t_min_samples != pair.delta_t_min_samples:
        raise ValueError(
            f"config window ({cfg.delta_t_min_samples}, {cfg.m_bins}) does not match "
            f"pair window ({pair.delta_t_min_samples}, {pair.m_bins})"
        )
    dmatrix = fast_forward(pair, cfg)
    w, eto = backtrack(dmatrix, cfg, pair.sample_period)
    evo = compute_evo(pair, w)
    total = dmatrix.total_cost
    _, penalty = path_cost(pair, w, cfg)
    return AlignmentResult(
        w=w,
        eto=eto,
        evo=evo,
        total_cost=total,
        distance_cost=total - penalty,
    )

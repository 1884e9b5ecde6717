"""Exhaustive verification of the aligner on small instances.

Enumerates every monotone warp path (the delay may rise by at most one bin
per step and drop freely) and minimizes distance plus penalties directly.
The distance accounting, index arithmetic, and penalty bookkeeping here are
written from scratch against the definitions, sharing no code with
:mod:`etvo.alignment`, so index bugs on either side surface as cost
mismatches.

Only a zero slack penalty is supported: with slack the forward recurrence
is a deterministic heuristic rather than a global minimum, so exhaustive
search is not the right cross-check there (the streaming pass is validated
against the direct pass instead).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SlackUnsupported, TooLarge
from .signals import AlignedPair

ENUMERATION_BUDGET = 10_000_000


def count_paths(n: int, m: int) -> int:
    """Number of monotone paths, by the step recursion over reachable bins."""
    counts = [1] * m
    for _ in range(n - 1):
        # bin j' is reachable from every previous bin j >= j' - 1
        suffix = [0] * (m + 1)
        for j in range(m - 1, -1, -1):
            suffix[j] = suffix[j + 1] + counts[j]
        counts = [suffix[max(0, jp - 1)] for jp in range(m)]
        if sum(counts) > ENUMERATION_BUDGET:
            raise TooLarge(
                f"path count exceeds the {ENUMERATION_BUDGET} enumeration budget"
            )
    return sum(counts)


def enumerate_paths(n: int, m: int) -> np.ndarray:
    """All monotone paths as an array of shape (count, n), lexicographic.

    Raises ``TooLarge`` when the count exceeds the enumeration budget.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    count_paths(n, m)  # enforce the budget before allocating
    paths = np.arange(m, dtype=np.int64).reshape(-1, 1)
    for _ in range(n - 1):
        last = paths[:, -1]
        n_ext = np.minimum(last + 2, m)
        repeated = np.repeat(paths, n_ext, axis=0)
        starts = np.cumsum(n_ext) - n_ext
        nxt = np.arange(int(n_ext.sum()), dtype=np.int64) - np.repeat(starts, n_ext)
        paths = np.column_stack([repeated, nxt])
    return paths


@dataclass(frozen=True)
class OracleResult:
    w: np.ndarray
    cost: float
    n_paths: int


def brute_force_align(pair: AlignedPair, cfg) -> OracleResult:
    """Minimum of distance + penalties over every enumerated path.

    Ties go to the lexicographically smallest path.  ``cfg`` only needs
    ``p_prop``, ``p_fixed``, ``p_slack`` attributes; the window is taken
    from the pair.
    """
    if cfg.p_slack != 0:
        raise SlackUnsupported("the exhaustive oracle requires p_slack == 0")
    n, m = len(pair.output), pair.m_bins
    paths = enumerate_paths(n, m)
    cost = path_costs(pair, paths, cfg.p_prop, cfg.p_fixed)
    best = int(np.argmin(cost))
    return OracleResult(w=paths[best].copy(), cost=float(cost[best]), n_paths=paths.shape[0])


def path_costs(pair: AlignedPair, paths: np.ndarray, p_prop: float,
               p_fixed: float) -> np.ndarray:
    """Vectorized distance + penalty for a batch of paths.

    Distance: each sample contributes the squared error of its matched
    input sample; a drop between samples i and i+1 additionally charges
    sample i with every bin passed through.  Penalties: each drop is one
    event of its bin magnitude; each maximal run of unit rises is one event
    of its length; an event costs p_fixed plus magnitude * p_prop.
    """
    f = pair.input.samples
    g = pair.output.samples
    n, m = g.size, pair.m_bins
    # dist[i, j]: output sample i vs input delayed by bin j
    dist = np.stack([(g - f[m - 1 - j: m - 1 - j + n]) ** 2 for j in range(m)], axis=1)
    prefix = np.cumsum(dist, axis=1)

    rows = np.arange(n)
    contrib = dist[rows[None, :], paths]
    if n > 1:
        cur, nxt = paths[:, :-1], paths[:, 1:]
        drop = nxt < cur
        if drop.any():
            p_idx, b_idx = np.nonzero(drop)
            hi = cur[p_idx, b_idx]
            lo = nxt[p_idx, b_idx]
            upper = prefix[b_idx, hi]
            lower = np.where(lo > 0, prefix[b_idx, np.maximum(lo - 1, 0)], 0.0)
            contrib[p_idx, b_idx] = upper - lower
    total = contrib.sum(axis=1)

    if n > 1:
        diffs = paths[:, 1:] - paths[:, :-1]
        drops = diffs < 0
        total += drops.sum(axis=1) * p_fixed + np.where(drops, -diffs, 0).sum(axis=1) * p_prop
        ups = diffs == 1
        run_starts = ups & ~np.concatenate(
            [np.zeros((paths.shape[0], 1), dtype=bool), ups[:, :-1]], axis=1
        )
        total += run_starts.sum(axis=1) * p_fixed + ups.sum(axis=1) * p_prop
    return total

"""Pure NumPy survival kernels; drop-in fallback for the compiled extension.

Both kernels propagate probability mass over (ones-so-far, automaton-state)
pairs.  `survival` runs one chain conditioned on a fixed total count with
sequential sampling weights; `extend` advances, for every count at once, the
per-count conditional state distributions one time step per row.
"""

from __future__ import annotations

import numpy as np


def survival(n: int, m: int, next0, next1) -> float:
    """P(no pattern occurrence | exactly m ones among n trials)."""
    E = len(next0)
    if n == 0:
        return 1.0
    cur = np.zeros((m + 1, E))
    cur[0, 0] = 1.0
    ls = np.arange(m + 1, dtype=np.float64)
    for t in range(1, n + 1):
        denom = float(n - t + 1)
        w1 = (m - ls) / denom
        np.clip(w1, 0.0, 1.0, out=w1)  # infeasible counts carry zero mass anyway
        w0 = 1.0 - w1
        nxt = np.zeros_like(cur)
        for si in range(E):
            col = cur[:, si]
            d0 = next0[si]
            if d0 >= 0:
                nxt[:, d0] += col * w0
            d1 = next1[si]
            if d1 >= 0:
                nxt[1:, d1] += col[:-1] * w1[:-1]
        cur = nxt
    return float(cur[m].sum())


def extend(g, q_out, t_start: int, t_end: int, next0, next1) -> None:
    """Advance per-count conditional survival rows t_start..t_end in place.

    g[l, si] is P(automaton state si, no pattern yet | exactly l ones among the
    first t-1 trials); each produced row t writes its per-count survival sums
    (summed over states) into q_out[t - t_start].
    """
    l_cap = g.shape[0] - 1
    E = g.shape[1]
    ls = np.arange(l_cap + 1, dtype=np.float64)
    for t in range(t_start, t_end + 1):
        w0 = (t - ls) / t
        np.clip(w0, 0.0, None, out=w0)
        w1 = (ls + 1.0) / t
        scratch = np.zeros_like(g)
        for si in range(E):
            col = g[:, si]
            d0 = next0[si]
            if d0 >= 0:
                scratch[:, d0] += col * w0
            d1 = next1[si]
            if d1 >= 0:
                scratch[1:, d1] += col[:-1] * w1[:-1]
        g[:] = scratch
        q_out[t - t_start, :] = g.sum(axis=1)

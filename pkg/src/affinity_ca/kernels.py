"""Whole-grid update kernels.

Both implementations write rows ``[r0, r1)`` of ``out`` from ``cells`` and
return the number of ones written, so the caller can test for homogeneity
without a second pass. ``mode`` is the f threshold code (0 more_than,
1 at_least, 2 exact). ``is_g`` selects rule g; ``cell_key`` is the stream
key for this step's per-cell variates (ignored on f-steps).

``step_band`` is bound to the numba kernel unless ``AFFINITY_CA_BACKEND=numpy``.
"""

import numpy as np

from . import _accel
from .rng import uniform_array, uniform_nb


@_accel.njit(cache=True, nogil=True)
def step_band_numba(cells, out, r0, r1, K, mode, is_g, cell_key, phi_tab, psi_tab):  # pragma: no cover
    h, w = cells.shape
    ones_written = 0
    up_to_one = 8 - K
    for r in range(r0, r1):
        up = cells[r - 1] if r > 0 else cells[h - 1]
        mid = cells[r]
        down = cells[r + 1] if r < h - 1 else cells[0]
        base = r * w
        for c in range(w):
            cl = c - 1 if c > 0 else w - 1
            cr = c + 1 if c < w - 1 else 0
            ones = (
                up[cl] + up[c] + up[cr]
                + mid[cl] + mid[cr]
                + down[cl] + down[c] + down[cr]
            )
            s = mid[c]
            if is_g:
                # one variate per cell, always, so the stream never depends on content
                u = uniform_nb(cell_key, base + c)
                if s == 1:
                    nxt = 0 if u < phi_tab[8 - ones] else 1
                else:
                    nxt = 1 if u < psi_tab[ones] else 0
            elif s == 1:
                nxt = 0 if 8 - ones > K else 1
            elif mode == 0:
                nxt = 1 if ones > up_to_one else 0
            elif mode == 1:
                nxt = 1 if ones >= up_to_one else 0
            else:
                nxt = 1 if ones == up_to_one else 0
            out[r, c] = nxt
            ones_written += nxt
    return ones_written


def step_band_numpy(cells, out, r0, r1, K, mode, is_g, cell_key, phi_tab, psi_tab):
    h, w = cells.shape
    if r1 <= r0:
        return 0
    rows = np.arange(r0 - 1, r1 + 1) % h
    sub = cells[rows].astype(np.int8)
    horiz = sub + np.roll(sub, 1, axis=1) + np.roll(sub, -1, axis=1)
    centre = sub[1:-1]
    ones = horiz[:-2] + horiz[1:-1] + horiz[2:] - centre
    alive = centre == 1
    if is_g:
        idx = (np.arange(r0, r1, dtype=np.int64)[:, None] * w
               + np.arange(w, dtype=np.int64)[None, :])
        u = uniform_array(cell_key, idx)
        prob = np.where(alive, phi_tab[8 - ones], psi_tab[ones])
        nxt = centre ^ (u < prob)
    else:
        if mode == 0:
            born = ones > 8 - K
        elif mode == 1:
            born = ones >= 8 - K
        else:
            born = ones == 8 - K
        nxt = np.where(alive, 8 - ones <= K, born)
    out[r0:r1] = nxt
    return int(np.count_nonzero(nxt))


step_band = step_band_numba if _accel.USE_NUMBA else step_band_numpy

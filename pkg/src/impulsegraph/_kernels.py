"""Compiled per-pixel restoration scan.

Restoration is inherently sequential (later pixels read earlier repairs), so
the inner scan is compiled rather than vectorised.
"""

import numba
import numpy as np

# scores closer than this are ties; ties go to the smallest candidate
TIE_TOL = 1e-12


@numba.njit(cache=True)
def _mirror(v, size):
    if v < 0:
        return -v
    if v >= size:
        return 2 * (size - 1) - v
    return v


@numba.njit(cache=True)
def scan_pixels(work, damaged, xs, ys, h, gray, reflect, use_sum, fallback, drop_unusable):
    """Restore the pixels ``(xs[i], ys[i])`` in order, updating ``work`` and
    ``damaged`` in place. Returns a boolean array marking deferred pixels
    (no usable neighbour)."""
    H, W = damaged.shape
    n = xs.shape[0]
    deferred = np.zeros(n, dtype=np.bool_)
    ox = np.empty(8, dtype=np.int64)
    oy = np.empty(8, dtype=np.int64)
    cols = np.empty((8, 3), dtype=np.float64)
    usable = np.empty(8, dtype=np.bool_)
    s_fixed = np.empty(8, dtype=np.float64)
    wts = np.empty(8, dtype=np.float64)
    vals = np.empty(8, dtype=np.float64)
    color = np.empty(3, dtype=np.float64)
    scores = np.empty(256, dtype=np.float64)

    for idx in range(n):
        x = xs[idx]
        y = ys[idx]
        k = 0
        n_usable = 0
        for dy in range(-1, 2):
            for dx in range(-1, 2):
                if dx == 0 and dy == 0:
                    continue
                px = x + dx
                py = y + dy
                if 0 <= px < W and 0 <= py < H:
                    sx, sy = px, py
                elif reflect:
                    sx = _mirror(px, W)
                    sy = _mirror(py, H)
                else:
                    continue
                ok = fallback or not damaged[sy, sx]
                if drop_unusable and not ok:
                    continue
                ox[k] = dx
                oy[k] = dy
                for c in range(3):
                    cols[k, c] = work[sy, sx, c]
                usable[k] = ok
                if ok:
                    n_usable += 1
                k += 1
        if n_usable == 0:
            deferred[idx] = True
            continue

        m_fixed = 0.0
        for i in range(k):
            s_fixed[i] = 0.0
        for i in range(k):
            for j in range(i + 1, k):
                if max(abs(ox[i] - ox[j]), abs(oy[i] - oy[j])) == 1:
                    d = 0.0
                    for c in range(3):
                        t = cols[i, c] - cols[j, c]
                        d += t * t
                    w = np.exp(-np.sqrt(d) / h)
                    s_fixed[i] += w
                    s_fixed[j] += w
        for i in range(k):
            m_fixed += s_fixed[i]

        # start from the per-channel lower median of the usable neighbours
        for c in range(3):
            u = 0
            for i in range(k):
                if usable[i]:
                    vals[u] = cols[i, c]
                    u += 1
            srt = np.sort(vals[:u])
            color[c] = srt[(u - 1) // 2]

        n_channels = 1 if gray else 3
        for ch in range(n_channels):
            if fallback:
                lo, hi = 0, 255
            else:
                lo, hi = 255, 0
                for i in range(k):
                    if usable[i]:
                        v = int(cols[i, ch])
                        lo = min(lo, v)
                        hi = max(hi, v)
            best_gain = -np.inf
            for v in range(lo, hi + 1):
                scores[v - lo] = -np.inf
                if gray:
                    color[0] = v
                    color[1] = v
                    color[2] = v
                else:
                    color[ch] = v
                s_p = 0.0
                for i in range(k):
                    d = 0.0
                    for c in range(3):
                        t = color[c] - cols[i, c]
                        d += t * t
                    wts[i] = np.exp(-np.sqrt(d) / h)
                    s_p += wts[i]
                m = m_fixed + 2.0 * s_p
                if not m > 0.0:
                    continue
                a_p = s_p / m
                gain = 0.0 if use_sum else -np.inf
                for i in range(k):
                    if usable[i]:
                        dq = 2.0 * (wts[i] / m - a_p * ((s_fixed[i] + wts[i]) / m))
                        if use_sum:
                            gain += dq
                        elif dq > gain:
                            gain = dq
                scores[v - lo] = gain
                if gain > best_gain:
                    best_gain = gain
            best_v = lo
            for v in range(lo, hi + 1):
                if scores[v - lo] >= best_gain - TIE_TOL:
                    best_v = v
                    break
            if gray:
                color[0] = best_v
                color[1] = best_v
                color[2] = best_v
            else:
                color[ch] = best_v

        for c in range(3):
            work[y, x, c] = int(color[c])
        damaged[y, x] = False
    return deferred

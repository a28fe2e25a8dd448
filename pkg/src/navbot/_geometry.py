"""Hot geometry kernels: ray/segment casting and point/segment clearance.

Segments are packed as an ``(n, 4)`` float64 array of ``x0, y0, x1, y1`` rows.
"""
import numpy as np

from ._accel import njit, select


def _cast_rays_loop(segments, origins, directions, max_range):
    n_rays = origins.shape[0]
    out = np.empty(n_rays)
    for r in range(n_rays):
        ox = origins[r, 0]
        oy = origins[r, 1]
        dx = directions[r, 0]
        dy = directions[r, 1]
        best = max_range
        for s in range(segments.shape[0]):
            px = segments[s, 0]
            py = segments[s, 1]
            ex = segments[s, 2] - px
            ey = segments[s, 3] - py
            denom = dx * ey - dy * ex
            if denom == 0.0:
                continue
            wx = px - ox
            wy = py - oy
            t = (wx * ey - wy * ex) / denom
            u = (wx * dy - wy * dx) / denom
            if t >= 0.0 and 0.0 <= u <= 1.0 and t < best:
                best = t
        out[r] = best
    return out


def _cast_rays_numpy(segments, origins, directions, max_range):
    if segments.shape[0] == 0:
        return np.full(origins.shape[0], max_range)
    px = segments[None, :, 0]
    py = segments[None, :, 1]
    ex = segments[None, :, 2] - px
    ey = segments[None, :, 3] - py
    dx = directions[:, 0:1]
    dy = directions[:, 1:2]
    wx = px - origins[:, 0:1]
    wy = py - origins[:, 1:2]
    denom = dx * ey - dy * ex
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (wx * ey - wy * ex) / denom
        u = (wx * dy - wy * dx) / denom
    hit = (denom != 0.0) & (t >= 0.0) & (u >= 0.0) & (u <= 1.0)
    t = np.where(hit, t, np.inf)
    return np.minimum(t.min(axis=1), max_range)


def _min_clearance_loop(segments, x, y):
    best = np.inf
    for s in range(segments.shape[0]):
        px = segments[s, 0]
        py = segments[s, 1]
        ex = segments[s, 2] - px
        ey = segments[s, 3] - py
        ll = ex * ex + ey * ey
        u = 0.0
        if ll > 0.0:
            u = ((x - px) * ex + (y - py) * ey) / ll
            if u < 0.0:
                u = 0.0
            elif u > 1.0:
                u = 1.0
        cx = px + u * ex - x
        cy = py + u * ey - y
        d = np.sqrt(cx * cx + cy * cy)
        if d < best:
            best = d
    return best


def _min_clearance_numpy(segments, x, y):
    if segments.shape[0] == 0:
        return np.inf
    px, py = segments[:, 0], segments[:, 1]
    ex = segments[:, 2] - px
    ey = segments[:, 3] - py
    ll = ex * ex + ey * ey
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(ll > 0.0, ((x - px) * ex + (y - py) * ey) / ll, 0.0)
    u = np.clip(u, 0.0, 1.0)
    cx = px + u * ex - x
    cy = py + u * ey - y
    return float(np.sqrt(cx * cx + cy * cy).min())


cast_rays_jit = njit(_cast_rays_loop)
min_clearance_jit = njit(_min_clearance_loop)

cast_rays = select(cast_rays_jit, _cast_rays_numpy)
min_clearance = select(min_clearance_jit, _min_clearance_numpy)

"""Voxel-grid density kernels: a numba version and a numpy twin.

Both evaluate, for one precomputed state payload,

    rho = exp(t) S(x2)^2 F(w)^2 / (2 pi r^2)
    t   = rad2 + 2(l'+1) ln w - w + ang2 + gamma1 ln(x2) + m' ln(sin2)

with w = (2Z/n') r, x2 = z^2/r^2, sin2 = (x^2+y^2)/r^2.  Everything
angular enters through squares, so both backends are exactly even in z
and exactly symmetric under x <-> y; axis terms with a vanishing base are
analytic zeros and short-circuit before the logs.

The payload is plain floats plus two small coefficient arrays so the
kernels stay nopython-compatible.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import njit, prange, use_numba

_TWO_PI = 2.0 * math.pi


@njit(parallel=True, cache=True, nogil=True)
def _fill_numba(values, coords, a, d, ang2, m_prime, gamma1, rad2, lp1, q2):
    n = coords.shape[0]
    ka = a.shape[0]
    kd = d.shape[0]
    for i in prange(n):
        xi2 = coords[i] * coords[i]
        for j in range(n):
            s = xi2 + coords[j] * coords[j]
            for k in range(n):
                z = coords[k]
                r2 = s + z * z
                if r2 == 0.0:
                    values[i, j, k] = 0.0
                    continue
                x2 = (z * z) / r2
                if gamma1 != 0.0 and x2 == 0.0:
                    values[i, j, k] = 0.0
                    continue
                sin2 = s / r2
                if m_prime != 0.0 and sin2 == 0.0:
                    values[i, j, k] = 0.0
                    continue
                w = q2 * math.sqrt(r2)
                t = rad2 + 2.0 * lp1 * math.log(w) - w + ang2
                if gamma1 != 0.0:
                    t += gamma1 * math.log(x2)
                if m_prime != 0.0:
                    t += m_prime * math.log(sin2)
                S = a[ka - 1]
                for p in range(ka - 2, -1, -1):
                    S = S * x2 + a[p]
                F = d[kd - 1]
                for p in range(kd - 2, -1, -1):
                    F = F * w + d[p]
                values[i, j, k] = math.exp(t) * S * S * F * F / (_TWO_PI * r2)


def _eval_numpy(s, z, a, d, ang2, m_prime, gamma1, rad2, lp1, q2):
    """Vectorized density for arrays of s = x^2 + y^2 and z."""
    r2 = s + z * z
    dead = r2 == 0.0
    safe = np.where(dead, 1.0, r2)
    x2 = (z * z) / safe
    sin2 = s / safe
    w = q2 * np.sqrt(safe)
    t = rad2 + 2.0 * lp1 * np.log(w) - w + ang2
    if gamma1 != 0.0:
        dead = dead | (x2 == 0.0)
        t = t + gamma1 * np.log(np.where(x2 > 0.0, x2, 1.0))
    if m_prime != 0.0:
        dead = dead | (sin2 == 0.0)
        t = t + m_prime * np.log(np.where(sin2 > 0.0, sin2, 1.0))
    S = np.full_like(t, a[-1])
    for p in range(len(a) - 2, -1, -1):
        S = S * x2 + a[p]
    F = np.full_like(t, d[-1])
    for p in range(len(d) - 2, -1, -1):
        F = F * w + d[p]
    out = np.exp(t) * S * S * F * F / (_TWO_PI * safe)
    out[dead] = 0.0
    return out


def _fill_numpy(values, coords, a, d, ang2, m_prime, gamma1, rad2, lp1, q2):
    # one z-slice at a time keeps peak memory at O(N^2)
    s = coords[:, None] ** 2 + coords[None, :] ** 2
    for k in range(coords.shape[0]):
        values[:, :, k] = _eval_numpy(s, coords[k], a, d, ang2,
                                      m_prime, gamma1, rad2, lp1, q2)


def fill_grid(values, coords, payload):
    """Dispatch on the active backend; payload is the tuple from density."""
    if use_numba():
        _fill_numba(values, coords, *payload)
    else:
        _fill_numpy(values, coords, *payload)


def eval_points(x, y, z, payload):
    """Pointwise density at arbitrary coordinates (numpy path)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    s = x * x + y * y
    return _eval_numpy(s, z, *payload)

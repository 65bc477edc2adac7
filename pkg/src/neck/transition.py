"""Smooth C-infinity step on [1, 2] and its first three derivatives.

The step is s(r) = phi(r-1) / (phi(r-1) + phi(2-r)) with phi(u) = exp(-1/u)
for u > 0 and phi = 0 otherwise.  It vanishes to all orders at r = 1,
equals 1 to all orders at r = 2, and is strictly increasing in between.
Derivatives are evaluated through the logistic form

    s(r) = sigma(-g(r)),   g(r) = 1/(r-1) - 1/(2-r),

which stays well conditioned away from the endpoints.  Within _W_CUT of an
endpoint every quantity below is smaller than ~1e-200, far under double
roundoff, so we return the exact limit values there instead of fighting
overflow in 1/(r-1)^k.
"""

from __future__ import annotations

import numpy as np

# Endpoint guard: for r-1 < _W_CUT the true values are below exp(-500).
_W_CUT = 2.0e-3


def _sigmoid(v):
    """Numerically stable logistic function 1/(1+exp(-v))."""
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ev = np.exp(v[~pos])
    out[~pos] = ev / (1.0 + ev)
    return out


def _eval_all(r, order):
    """Return [s, s', ..., s^(order)] at the points r (each an ndarray)."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)

    lo = r <= 1.0 + _W_CUT
    hi = r >= 2.0 - _W_CUT
    mid = ~(lo | hi)

    s = np.zeros_like(r)
    s[hi] = 1.0
    results = [s]
    derivs = [np.zeros_like(r) for _ in range(order)]

    if np.any(mid):
        w1 = r[mid] - 1.0
        w2 = 2.0 - r[mid]
        g1 = -(w1 ** -2) - (w2 ** -2)
        sm = _sigmoid(-(1.0 / w1 - 1.0 / w2))
        s[mid] = sm
        if order >= 1:
            a = sm * (1.0 - sm)
            s1 = -a * g1
            derivs[0][mid] = s1
        if order >= 2:
            g2 = 2.0 * w1 ** -3 - 2.0 * w2 ** -3
            s2 = -(s1 * (1.0 - 2.0 * sm) * g1 + a * g2)
            derivs[1][mid] = s2
        if order >= 3:
            g3 = -6.0 * w1 ** -4 - 6.0 * w2 ** -4
            s3 = -(
                s2 * (1.0 - 2.0 * sm) * g1
                - 2.0 * s1 ** 2 * g1
                + 2.0 * s1 * (1.0 - 2.0 * sm) * g2
                + a * g3
            )
            derivs[2][mid] = s3

    results.extend(derivs)
    if scalar:
        results = [float(v[0]) for v in results]
    return results


def smoothstep(r):
    return _eval_all(r, 0)[0]


def smoothstep_d1(r):
    return _eval_all(r, 1)[1]


def smoothstep_d2(r):
    return _eval_all(r, 2)[2]


def smoothstep_d3(r):
    return _eval_all(r, 3)[3]

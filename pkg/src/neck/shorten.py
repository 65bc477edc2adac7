"""Discrete closed loops and length-nonincreasing shortening to geodesics.

Loops wind once around the cylinder.  The shortening step is the classic
alternating midpoint scheme: even-indexed vertices move to the (second
order accurate) geodesic midpoint of their neighbours, then odd-indexed
ones, then the loop is resampled to uniform arc length.  Every substep is
guarded so the discrete length never increases beyond roundoff.

Once a loop has collapsed into the near-circle basin the limit of the
deformation is computed in closed form: snap to the best circle of
revolution touched by the loop, then slide it downhill along h' to the
critical circle.  Both moves are exactly length-nonincreasing (the
discrete length of any winding-1 loop dominates 2*pi*min h over its
band), so the contract of the polygonal deformation is preserved while
wells far below roundoff depth remain resolvable through the sign of h'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

MIN_SEGMENTS = 16
TWO_PI = 2.0 * math.pi

# x-spread below which a stagnated loop counts as a circle candidate.
CIRCLE_SPREAD = 1e-2


class ShorteningError(RuntimeError):
    """Raised when the deformation exhausts its budget uncertified."""

    def __init__(self, message, loop=None, residual=None):
        super().__init__(message)
        self.loop = loop
        self.residual = residual


@dataclass(frozen=True)
class Loop:
    """Closed discrete curve (x_i, theta_i), theta unwrapped, winding 1.

    Closure is implicit: the segment after the last vertex returns to
    (x_0, theta_0 + 2*pi).
    """

    x: np.ndarray
    theta: np.ndarray

    @property
    def n(self):
        return self.x.size

    def winding(self):
        dth = np.diff(self.theta, append=self.theta[0] + TWO_PI)
        return float(np.sum(dth)) / TWO_PI

    def chords(self):
        dx = np.diff(self.x, append=self.x[0])
        dth = np.diff(self.theta, append=self.theta[0] + TWO_PI)
        return dx, dth

    def validate(self):
        if self.n < MIN_SEGMENTS:
            raise ValueError(f"loop needs at least {MIN_SEGMENTS} segments")
        if abs(self.winding() - 1.0) > 1e-9:
            raise ValueError("loop must wind exactly once around the cylinder")


@dataclass
class ClosedGeodesic:
    loop: Loop
    length: float
    residual: float
    circle_x: float | None
    iterations: int


def init_loop(kind, n, x0=0.0, amplitude=1.0, phase=0.0, noise=0.1, seed=0):
    """Build a starting loop: ``circle``, ``graph`` or ``perturbed``."""
    if n < MIN_SEGMENTS:
        raise ValueError(f"loop needs at least {MIN_SEGMENTS} segments")
    theta = TWO_PI * np.arange(n) / n
    if kind == "circle":
        x = np.full(n, float(x0))
    elif kind == "graph":
        x = amplitude * np.sin(theta + phase)
    elif kind == "perturbed":
        rng = np.random.default_rng(seed)
        x = x0 + noise * rng.standard_normal(n)
    else:
        raise ValueError(f"unknown loop kind {kind!r}")
    loop = Loop(x=x, theta=theta)
    loop.validate()
    return loop


def _segment_lengths(p, x, theta):
    dx = np.diff(x, append=x[0])
    dth = np.diff(theta, append=theta[0] + TWO_PI)
    mid = x + 0.5 * dx
    h, h1 = (np.atleast_1d(v) for v in p._values(mid, 1))
    E = 1.0 + h1 * h1
    G = h * h
    return np.sqrt(E * dx * dx + G * dth * dth)


def loop_length(p, loop):
    """Discrete length: chord lengths under the midpoint-evaluated metric."""
    return float(np.sum(_segment_lengths(p, loop.x, loop.theta)))


def _midpoint_pass(p, x, theta, parity):
    """Move the vertices of one parity to corrected neighbour midpoints.

    Candidates approximate geodesic midpoints to second order in the
    chord: mid + (1/8) Gamma(D, D) with D the neighbour difference.  Each
    move is accepted only if the two incident chord lengths do not grow.
    """
    n = x.size
    idx = np.arange(parity, n, 2)
    prev = (idx - 1) % n
    nxt = (idx + 1) % n

    thp = theta[prev] - np.where(idx == 0, TWO_PI, 0.0)
    thn = theta[nxt] + np.where(idx == n - 1, TWO_PI, 0.0)

    dx = x[nxt] - x[prev]
    dth = thn - thp
    mx = 0.5 * (x[prev] + x[nxt])
    mth = 0.5 * (thp + thn)

    h, h1, h2 = (np.atleast_1d(v) for v in p.h_d1_d2(mx))
    denom = 1.0 + h1 * h1
    gxxx = h1 * h2 / denom
    gxtt = -h * h1 / denom
    gtxt = h1 / h
    cx = mx + 0.125 * (gxxx * dx * dx + gxtt * dth * dth)
    cth = mth + 0.25 * gtxt * dx * dth

    def pair_len(px, pth):
        for a_x, a_th, b_x, b_th in ((x[prev], thp, px, pth),
                                     (px, pth, x[nxt], thn)):
            ddx = b_x - a_x
            ddth = b_th - a_th
            mm = 0.5 * (a_x + b_x)
            hh, hh1 = (np.atleast_1d(v) for v in p._values(mm, 1))
            yield np.sqrt((1.0 + hh1 * hh1) * ddx * ddx + hh * hh * ddth * ddth)

    old_len = sum(pair_len(x[idx], theta[idx]))
    new_len = sum(pair_len(cx, cth))
    accept = new_len <= old_len + 1e-15
    x[idx] = np.where(accept, cx, x[idx])
    theta[idx] = np.where(accept, cth, theta[idx])


def _resample(p, x, theta):
    """Redistribute vertices uniformly in arc length along the polygon."""
    seg = _segment_lengths(p, x, theta)
    total = float(np.sum(seg))
    if not np.isfinite(total) or total <= 0.0:
        return None
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    targets = total * np.arange(x.size) / x.size
    xc = np.concatenate((x, [x[0]]))
    thc = np.concatenate((theta, [theta[0] + TWO_PI]))
    return np.interp(targets, cum, xc), np.interp(targets, cum, thc)


def shorten_step(p, loop):
    """One even/odd midpoint sweep plus uniform arc-length resampling.

    The resampled loop is kept only if resampling did not increase the
    discrete length; on degenerate input the loop is returned unchanged.
    """
    x = loop.x.copy()
    theta = loop.theta.copy()
    _midpoint_pass(p, x, theta, 0)
    _midpoint_pass(p, x, theta, 1)
    resampled = _resample(p, x, theta)
    if resampled is None:
        return loop
    len_passes = float(np.sum(_segment_lengths(p, x, theta)))
    rx, rth = resampled
    len_res = float(np.sum(_segment_lengths(p, rx, rth)))
    if len_res <= len_passes + 1e-12:
        return Loop(x=rx, theta=rth)
    return Loop(x=x, theta=theta)


def _critical_circle(p, x_start):
    """Slide a circle downhill along h' to the nearest critical radius.

    Length-nonincreasing: h is monotone between the start and the zero of
    h' reached by bracketing in the downhill direction.  A start with
    h'(x) == 0 exactly (inside a flat plateau) stays put.
    """
    d1 = float(p.d1(x_start))
    if d1 == 0.0:
        return float(x_start)
    direction = -math.copysign(1.0, d1)
    a = float(x_start)
    width = 1e-3
    while width < 16.0:
        b = a + direction * width
        db = float(p.d1(b))
        if db == 0.0:
            return b
        if db * d1 < 0.0:
            lo, hi = (a, b) if a < b else (b, a)
            return float(brentq(lambda u: float(p.d1(u)), lo, hi, xtol=1e-13))
        width *= 2.0
    return float(x_start)  # no critical point found; keep the circle


def _residual(p, loop):
    """Max discrete defect of the geodesic equation along the loop."""
    x, theta = loop.x, loop.theta
    n = x.size
    seg = _segment_lengths(p, x, theta)
    total = float(np.sum(seg))
    ds = total / n
    xp = np.roll(x, 1)
    xn = np.roll(x, -1)
    thp = np.roll(theta, 1) - np.where(np.arange(n) == 0, TWO_PI, 0.0)
    thn = np.roll(theta, -1) + np.where(np.arange(n) == n - 1, TWO_PI, 0.0)
    vx = (xn - xp) / (2.0 * ds)
    vth = (thn - thp) / (2.0 * ds)
    ax = (xn - 2.0 * x + xp) / ds ** 2
    ath = (thn - 2.0 * theta + thp) / ds ** 2
    h, h1, h2 = (np.atleast_1d(v) for v in p.h_d1_d2(x))
    denom = 1.0 + h1 * h1
    dx = ax + (h1 * h2 / denom) * vx * vx - (h * h1 / denom) * vth * vth
    dth = ath + 2.0 * (h1 / h) * vx * vth
    return float(np.max(np.abs(dx) + np.abs(dth)))


def shorten_to_geodesic(p, loop, tol=1e-8, max_iter=200000, trace=None):
    """Iterate shortening until the loop certifies as a closed geodesic.

    Stops shrinking when the per-step relative length decrease falls
    under ``tol`` while the loop is circle-like; then takes the exact
    limit of the deformation (snap to the best touched circle, slide to
    the critical one) and certifies the discrete residual.  Passing a
    list as ``trace`` collects (iteration, length, residual) rows.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    loop.validate()
    current = loop
    length = loop_length(p, current)
    iterations = 0
    stagnant = False
    for iterations in range(1, max_iter + 1):
        nxt = shorten_step(p, current)
        new_length = loop_length(p, nxt)
        decrease = length - new_length
        current, length = nxt, new_length
        spread = float(np.max(current.x) - np.min(current.x))
        if trace is not None:
            trace.append((iterations, new_length, _residual(p, current)))
        if decrease < tol * length:
            if spread < CIRCLE_SPREAD:
                stagnant = True
                break
            if decrease <= 0.0:
                break  # fully stalled while still spread out

    spread = float(np.max(current.x) - np.min(current.x))
    if not (stagnant and spread < CIRCLE_SPREAD):
        res = _residual(p, current)
        if res <= tol:
            return ClosedGeodesic(loop=current, length=length, residual=res,
                                  circle_x=None, iterations=iterations)
        raise ShorteningError(
            f"no certified geodesic after {iterations} iterations "
            f"(residual {res:.3e}, spread {spread:.3e})",
            loop=current, residual=res)

    # Circle basin: finish the deformation in closed form.
    dx, _ = current.chords()
    mids = current.x + 0.5 * dx
    h_mids = np.atleast_1d(p.eval(mids))
    x_snap = float(mids[int(np.argmin(h_mids))])
    x_star = _critical_circle(p, x_snap)
    n = current.n
    final = Loop(x=np.full(n, x_star), theta=TWO_PI * np.arange(n) / n)
    length = loop_length(p, final)
    res = _residual(p, final)
    if res > tol:
        raise ShorteningError(
            f"circle residual {res:.3e} exceeds tolerance {tol:.3e}",
            loop=final, residual=res)
    return ClosedGeodesic(loop=final, length=length, residual=res,
                          circle_x=x_star, iterations=iterations)


def minimal_length(p, scan=(-8.0, 8.0), grid_step=1e-3):
    """2*pi times the certified global minimum of h.

    The grid minimum is refined by sliding a circle down h' from the best
    grid point, which resolves minima whose depth sits below roundoff.
    """
    xs = np.arange(scan[0], scan[1] + grid_step / 2, grid_step)
    h = np.atleast_1d(p.eval(xs))
    x_best = float(xs[int(np.argmin(h))])
    x_star = _critical_circle(p, x_best)
    h_star = float(p.eval(x_star))
    h_best = float(np.min(h))
    return TWO_PI * min(h_star, h_best)

"""Minimizer sets of minimal closed geodesics and parameter sweeps.

On these surfaces every minimal closed geodesic in the core class is a
circle of revolution at a global minimum of h, so the minimizer set is
the argmin set of h.  Detection works on sign structure rather than
value tolerances, because the swing wells are exponentially shallow:

* a flat plateau (h'' identically zero around the argmin) marks an
  interval of minimizers, as for the base profile on [-1, 1];
* otherwise the unique sign change of h' inside the minimum plateau is
  refined by bracketing, which resolves wells whose depth sits far below
  double roundoff (h' keeps a clean sign there even when h rounds to 1).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .profiles import base_profile, swing_profile, t_max_threshold
from .shorten import minimal_length
from .surface import gauss_curvature

TWO_PI = 2.0 * math.pi

SCAN_RANGE = (-6.0, 6.0)
DEFAULT_GRID_STEP = 1e-3
DEFAULT_TOL_D1 = 1e-6
DEFAULT_TOL_H = 1e-8


class EmptyMinimizerSet(RuntimeError):
    pass


@dataclass
class ModuliSlice:
    t: float | None
    length_min: float
    minimizers: list
    is_interval: bool
    band: tuple | None

    @property
    def x_star(self):
        if self.is_interval and self.band is not None:
            return 0.5 * (self.band[0] + self.band[1])
        return self.minimizers[len(self.minimizers) // 2]

    @property
    def band_width(self):
        if self.band is None:
            return 0.0
        return self.band[1] - self.band[0]


@dataclass
class SweepRow:
    t: float
    length_min: float
    x_star: float
    band: tuple
    band_width: float
    is_interval: bool


@dataclass
class SweepResult:
    delta: float
    rows: list = field(default_factory=list)

    @property
    def t_values(self):
        return np.array([r.t for r in self.rows])

    @property
    def x_stars(self):
        return np.array([r.x_star for r in self.rows])

    @property
    def lengths(self):
        return np.array([r.length_min for r in self.rows])


def _plateau_component(xs, h, tol_h):
    """Index range (i0, i1 inclusive) of the minimum plateau around argmin."""
    m = float(np.min(h))
    mask = h <= m + tol_h
    i = int(np.argmin(h))
    i0 = i
    while i0 > 0 and mask[i0 - 1]:
        i0 -= 1
    i1 = i
    while i1 < xs.size - 1 and mask[i1 + 1]:
        i1 += 1
    return i0, i1, m


def minimizer_set(p, grid_step=DEFAULT_GRID_STEP, tol=DEFAULT_TOL_D1,
                  tol_h=DEFAULT_TOL_H, t=None):
    """Extract the set of minimal circles of h on the scan window.

    ``tol`` bounds |h'| at reported minimizers, ``tol_h`` the height above
    the global minimum; both are sanity caps on top of the sign-structure
    detection described in the module docstring.
    """
    if grid_step <= 0 or tol <= 0 or tol_h <= 0:
        raise ValueError("grid_step and tolerances must be positive")
    xs = np.arange(SCAN_RANGE[0], SCAN_RANGE[1] + grid_step / 2, grid_step)
    h = np.atleast_1d(p.eval(xs))
    d1 = np.atleast_1d(p.d1(xs))
    d2 = np.atleast_1d(p.d2(xs))

    i0, i1, m = _plateau_component(xs, h, tol_h)
    length_min = minimal_length(p)

    flat = (d2 == 0.0) & (np.abs(d1) <= tol) & (h <= m + tol_h)
    if np.any(flat[i0:i1 + 1]):
        # interval case: contiguous run of exactly flat points around argmin
        j = i0 + int(np.argmax(flat[i0:i1 + 1]))
        a = j
        while a > i0 and flat[a - 1]:
            a -= 1
        b = j
        while b < i1 and flat[b + 1]:
            b += 1
        pts = xs[a:b + 1]
        band = (float(pts[0]), float(pts[-1]))
        step = max(1, pts.size // 100)
        return ModuliSlice(t=t, length_min=length_min,
                           minimizers=[float(v) for v in pts[::step]],
                           is_interval=(band[1] - band[0]) > grid_step,
                           band=band)

    # singleton case: refine the sign changes of h' inside the plateau
    lo = max(0, i0 - 2)
    hi = min(xs.size - 1, i1 + 2)
    roots = []
    seg = d1[lo:hi + 1]
    sgn = np.sign(seg)
    for k in range(seg.size - 1):
        if sgn[k] == 0.0:
            roots.append(float(xs[lo + k]))
        elif sgn[k] * sgn[k + 1] < 0.0:
            roots.append(float(brentq(lambda u: float(p.d1(u)),
                                      xs[lo + k], xs[lo + k + 1], xtol=1e-13)))
    roots = [r for r in roots if float(p.eval(r)) <= m + tol_h
             and abs(float(p.d1(r))) <= tol]
    # dedupe near-identical roots
    uniq = []
    for r in sorted(roots):
        if not uniq or r - uniq[-1] > grid_step / 10:
            uniq.append(r)
    if not uniq:
        raise EmptyMinimizerSet(
            "no minimal circle detected on the scan window")
    band = (uniq[0], uniq[-1])
    return ModuliSlice(t=t, length_min=length_min, minimizers=uniq,
                       is_interval=False, band=band)


@dataclass
class RibbonReport:
    band: tuple
    max_abs_curvature: float
    worst_x: float
    passed: bool


def flat_ribbon_check(p, band, tol=1e-12, grid_step=1e-3):
    """Assert the region swept by an interval of minimal circles is flat.

    A zero-width band (a single minimal circle) bounds no ribbon, so it
    passes vacuously; the curvature at the point is still reported.
    """
    a, b = band
    if b - a <= 0.0:
        K0 = abs(float(gauss_curvature(p, float(a))))
        return RibbonReport(band=(float(a), float(b)),
                            max_abs_curvature=K0, worst_x=float(a),
                            passed=True)
    xs = np.arange(a, b + grid_step / 2, grid_step)
    if xs.size == 0 or xs[-1] < b:
        xs = np.append(xs, b)
    K = np.atleast_1d(gauss_curvature(p, xs))
    i = int(np.argmax(np.abs(K)))
    worst = float(np.abs(K[i]))
    return RibbonReport(band=(float(a), float(b)), max_abs_curvature=worst,
                        worst_x=float(xs[i]), passed=worst <= tol)


def sweep(delta, t_grid, grid_step=DEFAULT_GRID_STEP, workers=None):
    """Tabulate minimizer sets across the swing parameter grid."""
    tmax = t_max_threshold(delta)
    ts = sorted(float(t) for t in t_grid)
    if ts and (ts[0] < 0.0 or ts[-1] > tmax):
        raise ValueError(f"all t values must lie in [0, {tmax:.6g}]")

    def row(t):
        p = swing_profile(t, delta)
        s = minimizer_set(p, grid_step=grid_step, t=t)
        return SweepRow(t=t, length_min=s.length_min, x_star=s.x_star,
                        band=s.band, band_width=s.band_width,
                        is_interval=s.is_interval)

    result = SweepResult(delta=delta)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            result.rows = list(pool.map(row, ts))
    else:
        result.rows = [row(t) for t in ts]
    return result


@dataclass
class BoundReport:
    passed: bool
    violations: list
    max_abs_x: float
    max_abs_d1: float
    max_abs_d2: float
    warning: str | None = None


def c0_bound_check(sweep_result, eps=0.05):
    """All minimizers across the sweep stay in one compact band [-1-eps, 1+eps];
    also report the derivative bounds of h on the detected bands."""
    if not sweep_result.rows:
        return BoundReport(True, [], 0.0, 0.0, 0.0,
                           warning="empty sweep: vacuously bounded")
    violations = []
    max_x = 0.0
    max_d1 = 0.0
    max_d2 = 0.0
    for r in sweep_result.rows:
        lo, hi = r.band
        extent = max(abs(lo), abs(hi), abs(r.x_star))
        max_x = max(max_x, extent)
        if extent > 1.0 + eps:
            violations.append((r.t, extent))
        p = swing_profile(r.t, sweep_result.delta)
        xs = np.linspace(lo, hi, 16)
        max_d1 = max(max_d1, float(np.max(np.abs(np.atleast_1d(p.d1(xs))))))
        max_d2 = max(max_d2, float(np.max(np.abs(np.atleast_1d(p.d2(xs))))))
    return BoundReport(passed=not violations, violations=violations,
                       max_abs_x=max_x, max_abs_d1=max_d1, max_abs_d2=max_d2)


@dataclass
class StabilityReport:
    t: float
    radius: float
    results: list          # (dt, max displacement, passed)
    largest_passing_dt: float | None
    all_passed: bool


def _set_distance(points, band):
    lo, hi = band
    return max(max(lo - x, x - hi, 0.0) for x in points)


def neighborhood_stability(t, dt_seq, radius, delta=0.5):
    """Check minimizers of swing(t+dt) stay near the minimizer set of swing(t)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    tmax = t_max_threshold(delta)
    for dt in dt_seq:
        if not (0.0 <= t + dt <= tmax):
            raise ValueError(f"t+dt={t + dt} outside [0, {tmax:.6g}]")
    ref = minimizer_set(swing_profile(t, delta), t=t)
    band = ref.band
    results = []
    largest = None
    for dt in sorted(dt_seq, key=abs):
        s = minimizer_set(swing_profile(t + dt, delta), t=t + dt)
        disp = _set_distance(s.minimizers, band)
        ok = disp <= radius
        results.append((float(dt), float(disp), ok))
        if ok:
            largest = max(largest or 0.0, abs(dt))
    return StabilityReport(t=t, radius=radius, results=results,
                           largest_passing_dt=largest,
                           all_passed=all(ok for _, _, ok in results))


def escape_bound_search(p, grid_step=1e-2):
    """Smallest X >= 2 whose circle is longer than 1 + the minimal length.

    Any core-class loop confined to |x| >= X projects with degree 1 onto
    the circle direction, so its length is at least 2*pi*h(X) > 1 + L.
    """
    ell = minimal_length(p)
    X = 2.0
    while X < 64.0:
        bound = TWO_PI * float(p.eval(X))
        if bound > 1.0 + ell:
            return X, bound
        X += grid_step
    raise RuntimeError("profile grows too slowly for an escape bound")

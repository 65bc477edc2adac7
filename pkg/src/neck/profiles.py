"""Radius profiles for the neck surfaces of revolution.

A profile is a smooth function h >= 1 together with closed-form first,
second and third derivatives.  Three kinds are provided:

* ``base``  -- flat on [-1, 1], strictly convex beyond, h'' = delta for
  |x| >= 2.  Built from the template h'' (x) = delta * s(|x|) with s the
  smooth step of :mod:`neck.transition`; h' and h are recovered by
  integrating the template (a Chebyshev antiderivative on the transition
  band [1, 2], plain polynomials elsewhere).
* ``swing(t)`` -- base plus the exponentially small travelling well
  ``exp(-1/t) * alpha(x, sin(1/t))``; its unique minimum sits at
  ``sin(1/t)`` with value exactly 1.
* ``custom`` -- caller-supplied oracles, used for counterexamples in tests.

All derivative oracles accept scalars or ndarrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.chebyshev import Chebyshev

from .transition import smoothstep, smoothstep_d1, smoothstep_d2, smoothstep_d3

DEFAULT_DELTA = 0.5

# Bump geometry: quadratic well scaled into [0, 1], cut off between 3 and 4.
BUMP_COEFF = 1.0 / 36.0
BUMP_INNER = 3.0
BUMP_OUTER = 4.0

_CHEB_DEG = 120  # the step is entire enough for machine accuracy here

# Antiderivatives of the step template on the transition band [1, 2]:
#   _S1(r) = int_1^r s,   _S2(r) = int_1^r _S1.
# The Chebyshev series is sampled once onto a dense uniform table; the
# hot path then evaluates by linear interpolation (error ~1e-11, three
# orders below the tightest consumer, at a fraction of the cost of a
# Clenshaw recurrence per call).
_S1 = Chebyshev.interpolate(smoothstep, _CHEB_DEG, domain=[1.0, 2.0]).integ(lbnd=1.0)
_S2 = _S1.integ(lbnd=1.0)
_S1_AT_2 = float(_S1(2.0))   # = 1/2 up to interpolation error (step symmetry)
_S2_AT_2 = float(_S2(2.0))

_TABLE_R = np.arange(1.0, 2.0 + 5e-7, 1e-6)
_TABLE_S1 = _S1(_TABLE_R)
_TABLE_S2 = _S2(_TABLE_R)

# The interpolated antiderivatives carry ~1e-17 evaluation noise, which
# would flip the sign of h' spuriously where the true values are far
# smaller (the essentially flat entry of the transition).  Values under
# this floor are clipped to exactly zero; the floor sits 3 orders above
# the noise and ~8 below anything the tolerances can observe.
_ANTIDERIV_FLOOR = 1e-14
_TABLE_S1[_TABLE_S1 < _ANTIDERIV_FLOOR] = 0.0
_TABLE_S2[_TABLE_S2 < _ANTIDERIV_FLOOR] = 0.0


def _s1_of(r):
    return np.interp(r, _TABLE_R, _TABLE_S1)


def _s2_of(r):
    return np.interp(r, _TABLE_R, _TABLE_S2)


def _base_arrays(x, delta, order=3):
    """(h, h', h'', h''') of the base profile at x, as ndarrays."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a = np.abs(x)
    sgn = np.sign(x)

    flat = a <= 1.0
    band = (a > 1.0) & (a < 2.0)
    quad = a >= 2.0

    h = np.ones_like(a)
    ab = a[band]
    aq = a[quad] - 2.0
    if ab.size:
        h[band] = 1.0 + delta * _s2_of(ab)
    h[quad] = 1.0 + delta * (_S2_AT_2 + _S1_AT_2 * aq + 0.5 * aq ** 2)

    out = [h]
    if order >= 1:
        h1 = np.zeros_like(a)
        if ab.size:
            h1[band] = delta * _s1_of(ab)
        h1[quad] = delta * (_S1_AT_2 + aq)
        h1 *= sgn
        out.append(h1)
    if order >= 2:
        h2 = np.zeros_like(a)
        h2[band] = delta * smoothstep(ab)
        h2[quad] = delta
        out.append(h2)
    if order >= 3:
        h3 = np.zeros_like(a)
        h3[band] = delta * smoothstep_d1(ab)
        h3 *= sgn
        out.append(h3)
    return out


def _cutoff_arrays(x, order=3):
    """Smooth cutoff chi (1 on [-3,3], 0 outside [-4,4]) and derivatives."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a = np.abs(x)
    sgn = np.sign(x)
    r = np.clip(a - 2.0, 1.0, 2.0)

    chi = 1.0 - smoothstep(r)
    out = [chi]
    if order >= 1:
        out.append(-sgn * smoothstep_d1(r))
    if order >= 2:
        out.append(-smoothstep_d2(r))
    if order >= 3:
        out.append(-sgn * smoothstep_d3(r))
    return out


def _bump_arrays(x, t, order=3):
    """alpha(x, t) = (x - t)^2 / 36 * chi(x) and x-derivatives."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x, t = np.broadcast_arrays(np.atleast_1d(x), t)
    q = BUMP_COEFF * (x - t) ** 2
    q1 = 2.0 * BUMP_COEFF * (x - t)
    q2 = 2.0 * BUMP_COEFF

    cs = _cutoff_arrays(x, order)
    chi = cs[0]
    out = [q * chi]
    if order >= 1:
        out.append(q1 * chi + q * cs[1])
    if order >= 2:
        out.append(q2 * chi + 2.0 * q1 * cs[1] + q * cs[2])
    if order >= 3:
        out.append(3.0 * q2 * cs[1] + 3.0 * q1 * cs[2] + q * cs[3])
    return out


def bump_alpha(x, t):
    """Bump value alpha(x, t); zero for |x| >= 4, minimum 0 at x = t."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < -2.0) or np.any(t_arr > 2.0):
        raise ValueError("bump parameter t must lie in [-2, 2]")
    val = _bump_arrays(x, t, order=0)[0]
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(val[0]) if val.size == 1 else val
    return val


class Profile:
    """Radius profile h with exact derivative oracles.

    Immutable after construction; all oracles are pure and vectorized.
    """

    def __init__(self, kind, delta, t=None, funcs=None):
        if delta <= 0:
            raise ValueError("delta must be positive")
        self.kind = kind
        self.delta = float(delta)
        self.t = t
        if kind == "swing":
            ts = np.asarray(t, dtype=float)
            with np.errstate(divide="ignore"):
                inv = np.where(ts > 0, 1.0 / np.where(ts > 0, ts, 1.0), np.inf)
            self.weight = np.where(ts > 0, np.exp(-inv), 0.0)
            self.center = np.where(ts > 0, np.sin(inv), 0.0)
        else:
            self.weight = None
            self.center = None
        self._funcs = funcs  # custom kind only: (eval, d1, d2, d3)

    # -- oracles ----------------------------------------------------------

    def _swing_terms(self, x, order):
        base = _base_arrays(x, self.delta, order)
        bump = _bump_arrays(x, self.center, order)
        return [b + self.weight * a for b, a in zip(base, bump)]

    def _values(self, x, order):
        if self.kind == "base":
            return _base_arrays(x, self.delta, order)
        if self.kind == "swing":
            return self._swing_terms(x, order)
        fs = self._funcs
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        return [np.atleast_1d(np.asarray(f(xs), dtype=float)) for f in fs[: order + 1]]

    def _one(self, x, order):
        v = self._values(x, order)[order]
        if np.ndim(x) == 0:
            return float(v[0]) if v.size == 1 else v
        return v

    def eval(self, x):
        return self._one(x, 0)

    def d1(self, x):
        return self._one(x, 1)

    def d2(self, x):
        return self._one(x, 2)

    def d3(self, x):
        return self._one(x, 3)

    def h_d1_d2(self, x):
        """(h, h', h'') in one pass; the integrator hot path."""
        return tuple(self._values(x, 2))

    def __repr__(self):
        if self.kind == "swing":
            return f"Profile(swing, delta={self.delta}, t={self.t})"
        return f"Profile({self.kind}, delta={self.delta})"


def base_profile(delta=DEFAULT_DELTA):
    """Base neck profile: h == 1 on [-1,1], h'' = delta * s(|x|) beyond."""
    return Profile("base", delta)


def custom_profile(delta, eval_fn, d1_fn, d2_fn, d3_fn):
    """Wrap caller-supplied oracles (used for counterexample profiles)."""
    return Profile("custom", delta, funcs=(eval_fn, d1_fn, d2_fn, d3_fn))


_TMAX_CACHE = {}


def _bump_d2_sup():
    """Grid maximum of |d^2 alpha / dx^2| over 2 <= |x| <= 4, all centers."""
    xs = np.arange(2.0, 4.0 + 1e-9, 1e-3)
    sup = 0.0
    for tau in np.linspace(-2.0, 2.0, 81):
        d2 = _bump_arrays(xs, tau, order=2)[2]
        sup = max(sup, float(np.max(np.abs(d2))))
        d2m = _bump_arrays(-xs, tau, order=2)[2]
        sup = max(sup, float(np.max(np.abs(d2m))))
    return sup


def t_max_threshold(delta=DEFAULT_DELTA):
    """Largest t with exp(-1/t) * sup|alpha_xx| <= delta (capped at 1).

    Guarantees h'' >= 0 everywhere for swing(t), t <= t_max: the bump's
    second derivative is positive where the base one vanishes, and its
    negative part (in the cutoff collar) is dominated by delta there.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    key = round(delta, 15)
    if key not in _TMAX_CACHE:
        sup = _bump_d2_sup()
        if sup <= delta:
            _TMAX_CACHE[key] = 1.0
        else:
            _TMAX_CACHE[key] = min(1.0, 1.0 / math.log(sup / delta))
    return _TMAX_CACHE[key]


def swing_profile(t, delta=DEFAULT_DELTA, check_convexity=True):
    """Swinging-neck profile h(x) = f(x) + exp(-1/t) * alpha(x, sin(1/t)).

    ``t = 0`` returns the base profile.  With ``check_convexity`` (the
    default) values of t above :func:`t_max_threshold` are rejected, since
    convexity of h is then no longer certified.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0) or np.any(t_arr > 1.0):
        raise ValueError("swing parameter t must lie in [0, 1]")
    if np.ndim(t) == 0 and float(t) == 0.0:
        return base_profile(delta)
    if check_convexity:
        tmax = t_max_threshold(delta)
        worst = float(np.max(t_arr))
        if worst > tmax:
            margin = math.exp(-1.0 / worst) * _bump_d2_sup() - delta
            raise ValueError(
                f"t={worst} exceeds t_max={tmax:.6g} for delta={delta}: "
                f"convexity margin violated by {margin:.3e}"
            )
    return Profile("swing", delta, t=t)


@dataclass
class ConditionCheck:
    name: str
    passed: bool
    margin: float
    worst_x: float


@dataclass
class ConditionReport:
    kind: str
    checks: list = field(default_factory=list)

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)


# Strict positivity of an essentially flat template cannot be certified
# inside the first ~1e-2 of the transition (values are below roundoff);
# the strict checks therefore start this far from the matching point.
_STRICT_PAD = 0.01


def verify_profile_conditions(p, grid_step=1e-3):
    """Grid-check the defining conditions of a profile on [-10, 10]."""
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    xs = np.arange(-10.0, 10.0 + grid_step / 2, grid_step)
    h = np.atleast_1d(p.eval(xs))
    h2 = np.atleast_1d(p.d2(xs))
    rep = ConditionReport(kind=p.kind)

    def add(name, values, mask, lower):
        vals = values[mask]
        pts = xs[mask]
        if vals.size == 0:
            rep.checks.append(ConditionCheck(name, True, math.inf, math.nan))
            return
        i = int(np.argmin(vals - lower))
        margin = float(vals[i] - lower)
        rep.checks.append(ConditionCheck(name, margin >= 0.0, margin, float(pts[i])))

    # h >= 1 everywhere (all kinds).
    add("h >= 1", h, np.ones_like(xs, dtype=bool), 1.0)

    if p.kind == "base":
        flat = np.abs(xs) <= 1.0
        dev = -np.abs(h - 1.0)
        add("h == 1 on [-1,1]", dev, flat, 0.0)
        add("h'' > 0 for |x| > 1", h2, np.abs(xs) >= 1.0 + _STRICT_PAD, 0.0)
        # the nonnegative half of condition (2), valid on the whole grid
        add("h'' >= 0 for |x| > 1", h2, np.abs(xs) > 1.0, 0.0)
        add("h'' >= delta for |x| >= 2", h2, np.abs(xs) >= 2.0, p.delta - 1e-12)
    elif p.kind == "swing":
        add("h'' >= 0 everywhere", h2, np.ones_like(xs, dtype=bool), -1e-12)
        tau = float(p.center)
        hmin = float(p.eval(tau))
        rep.checks.append(
            ConditionCheck("min value 1 at sin(1/t)", abs(hmin - 1.0) <= 1e-12,
                           1e-12 - abs(hmin - 1.0), tau)
        )
        outside = np.abs(xs) >= 4.0
        base = base_profile(p.delta)
        dev = -np.abs(h - np.atleast_1d(base.eval(xs)))
        add("h == f outside [-4,4]", dev, outside, 0.0)
    else:
        add("h'' >= 0 everywhere", h2, np.ones_like(xs, dtype=bool), 0.0)
    return rep


def parse_profile_spec(spec):
    """Parse a CLI profile spec such as ``base:delta=0.5`` or
    ``swing:delta=0.5,t=0.02``."""
    try:
        name, _, rest = spec.partition(":")
        params = {}
        if rest:
            for item in rest.split(","):
                k, _, v = item.partition("=")
                params[k.strip()] = float(v)
    except ValueError as exc:
        raise ValueError(f"malformed profile spec {spec!r}") from exc
    delta = params.pop("delta", DEFAULT_DELTA)
    if name == "base":
        if params:
            raise ValueError(f"unknown parameters for base profile: {sorted(params)}")
        return base_profile(delta)
    if name == "swing":
        t = params.pop("t", None)
        if t is None:
            raise ValueError("swing profile spec requires t=<value>")
        if params:
            raise ValueError(f"unknown parameters for swing profile: {sorted(params)}")
        return swing_profile(t, delta)
    raise ValueError(f"unknown profile kind {name!r} in spec {spec!r}")

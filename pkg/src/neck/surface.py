"""Metric, Christoffel symbols and Gaussian curvature of the neck surface.

The surface of revolution for a profile h carries the induced metric

    ds^2 = (1 + h'(x)^2) dx^2 + h(x)^2 dtheta^2

in the global chart (x, theta), theta mod 2*pi.  Everything here is a
stateless closed form in h, h', h''.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MetricPoint:
    E: float  # dx^2 coefficient, 1 + h'^2
    G: float  # dtheta^2 coefficient, h^2


@dataclass(frozen=True)
class ChristoffelPoint:
    xxx: float  # Gamma^x_xx
    xtt: float  # Gamma^x_thetatheta
    txt: float  # Gamma^theta_xtheta


@dataclass(frozen=True)
class CurvatureSample:
    x: float
    K: float


def metric_arrays(p, x):
    """(E, G) as ndarrays."""
    h = np.atleast_1d(p.eval(x))
    h1 = np.atleast_1d(p.d1(x))
    return 1.0 + h1 * h1, h * h


def metric_at(p, x):
    E, G = metric_arrays(p, x)
    return MetricPoint(float(E[0]), float(G[0]))


def christoffel_arrays(p, x):
    """(Gamma^x_xx, Gamma^x_tt, Gamma^t_xt) as ndarrays."""
    h, h1, h2 = (np.atleast_1d(v) for v in p.h_d1_d2(x))
    denom = 1.0 + h1 * h1
    return h1 * h2 / denom, -h * h1 / denom, h1 / h


def christoffel_at(p, x):
    gxxx, gxtt, gtxt = christoffel_arrays(p, x)
    return ChristoffelPoint(float(gxxx[0]), float(gxtt[0]), float(gtxt[0]))


def gauss_curvature(p, x):
    """Gaussian curvature K = -h'' / (h (1 + h'^2)^2); K <= 0 iff h'' >= 0."""
    h, h1, h2 = (np.atleast_1d(v) for v in p.h_d1_d2(x))
    K = -h2 / (h * (1.0 + h1 * h1) ** 2)
    if np.ndim(x) == 0:
        return float(K[0])
    return K


def curvature_table(p, xmin, xmax, dx):
    """Rows (x, h, h', h'', E, G, K) on a uniform grid, for the CLI."""
    xs = np.arange(xmin, xmax + dx / 2, dx)
    h = np.atleast_1d(p.eval(xs))
    h1 = np.atleast_1d(p.d1(xs))
    h2 = np.atleast_1d(p.d2(xs))
    E = 1.0 + h1 * h1
    G = h * h
    K = -h2 / (h * E ** 2)
    return xs, h, h1, h2, E, G, K

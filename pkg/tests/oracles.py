"""Independent numerical oracles used by the test suite.

Everything here is built only from quadrature, finite differences, the
metric interface, or the R^3 embedding -- never from the closed forms
under test -- so agreement is genuine cross-validation.
"""

import numpy as np
from scipy.integrate import quad

from neck.surface import metric_at


def quad_base_value(p, x):
    """Base profile value by adaptive quadrature of its second derivative.

    Uses h(x) = 1 + int_1^{|x|} (|x| - u) h''(u) du, valid because the
    base profile is even with h == 1 and h' == 0 on [-1, 1].
    """
    a = abs(float(x))
    if a <= 1.0:
        return 1.0
    val, err = quad(lambda u: (a - u) * float(p.d2(u)), 1.0, a,
                    epsabs=1e-12, epsrel=1e-12, limit=400)
    assert err < 1e-9 * (1.0 + abs(val))
    return 1.0 + val


def fd_derivative(f, x, eps=1e-6):
    """Central first difference of a scalar function."""
    return (f(x + eps) - f(x - eps)) / (2.0 * eps)


def fd_christoffel(p, x, eps=1e-6):
    """(Gamma^x_xx, Gamma^x_tt, Gamma^t_xt) from metric_at only.

    For the diagonal x-dependent metric these reduce to
    E_x/(2E), -G_x/(2E), G_x/(2G).
    """
    E = metric_at(p, x).E
    G = metric_at(p, x).G
    Ex = fd_derivative(lambda u: metric_at(p, u).E, x, eps)
    Gx = fd_derivative(lambda u: metric_at(p, u).G, x, eps)
    return Ex / (2.0 * E), -Gx / (2.0 * E), Gx / (2.0 * G)


def brioschi_curvature(p, x, eps=1e-5):
    """Gaussian curvature from metric_at by the Brioschi formula.

    For an orthogonal metric depending on x only:
    K = -1/(2 sqrt(EG)) d/dx ( G_x / sqrt(EG) ).
    """

    def ratio(u):
        E = metric_at(p, u).E
        G = metric_at(p, u).G
        Gx = fd_derivative(lambda v: metric_at(p, v).G, u, eps)
        return Gx / np.sqrt(E * G)

    E = metric_at(p, x).E
    G = metric_at(p, x).G
    return -fd_derivative(ratio, x, eps) / (2.0 * np.sqrt(E * G))


def embedding_metric(p, x, eps=1e-6):
    """(E, G) as the pullback of the Euclidean metric under
    (x, theta) |-> (x, h(x) cos theta, h(x) sin theta), by finite
    differences of the embedding map at theta = 0."""

    def emb(u, th):
        h = float(p.eval(u))
        return np.array([u, h * np.cos(th), h * np.sin(th)])

    dx = (emb(x + eps, 0.0) - emb(x - eps, 0.0)) / (2.0 * eps)
    dth = (emb(x, eps) - emb(x, -eps)) / (2.0 * eps)
    return float(dx @ dx), float(dth @ dth)


def brute_argmin(p, lo=-6.0, hi=6.0, step=1e-4):
    """Brute-force grid argmin of h, refined by a local parabolic step."""
    xs = np.arange(lo, hi + step / 2, step)
    h = np.atleast_1d(p.eval(xs))
    return float(xs[int(np.argmin(h))]), float(np.min(h))


def bump_d2_grid_max(step=1e-3):
    """Grid maximum of |d2 alpha/dx2| over 2 <= |x| <= 4, all centers,
    computed by finite differences of the bump value only."""
    from neck.profiles import bump_alpha

    xs = np.concatenate([np.arange(-4.0, -2.0 + step / 2, step),
                         np.arange(2.0, 4.0 + step / 2, step)])
    eps = 1e-5
    sup = 0.0
    for tau in np.linspace(-2.0, 2.0, 81):
        d2 = (bump_alpha(xs + eps, tau) - 2.0 * bump_alpha(xs, tau)
              + bump_alpha(xs - eps, tau)) / eps ** 2
        sup = max(sup, float(np.max(np.abs(d2))))
    return sup

"""Figure rendering from CSV tables written by the neck CLI.

Each figure kind declares the columns it needs; a missing column is a
:class:`SchemaError` naming it, and an empty table never produces an
image.  All mathematics happens upstream -- this module only draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

TWO_PI = 2.0 * math.pi

REQUIRED_COLUMNS = {
    "sweep": ["t", "length_min", "x_star", "band_lo", "band_hi", "band_width"],
    "curvature": ["x", "h", "h1", "h2", "E", "G", "K"],
    "shorten-trace": ["iter", "length", "residual"],
    "geodesic-2d": ["s", "x", "theta", "vx", "vtheta"],
    "geodesic-3d": ["s", "x", "theta", "vx", "vtheta"],
}


class SchemaError(ValueError):
    """Input file does not match the declared schema."""


@dataclass
class FigureSpec:
    kind: str
    inputs: list
    output: str
    title: str | None = None
    options: dict = field(default_factory=dict)


def load_table(path):
    """Read a neck CSV: ``# key=value`` header comments plus a data table.

    Returns (config dict, dict of column name -> ndarray).
    """
    config = {}
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                config[k] = v
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise SchemaError(f"{path}: no header row")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    return config, {name: data[:, i] for i, name in enumerate(header)}


def _require(table, kind, path):
    for col in REQUIRED_COLUMNS[kind]:
        if col not in table:
            raise SchemaError(f"{path}: missing column {col!r} "
                              f"required for a {kind} figure")


def _render_sweep(table, spec):
    order = np.argsort(table["t"])
    t = table["t"][order]
    length = table["length_min"][order]
    x_star = table["x_star"][order]

    fig, ax_len = plt.subplots(figsize=(8.0, 4.5))
    ax_len.plot(t, length, color="tab:blue", lw=1.5,
                label="minimal length")
    ax_len.axhline(TWO_PI, color="tab:blue", ls=":", lw=0.8)
    ax_len.set_xlabel("t")
    ax_len.set_ylabel("minimal length", color="tab:blue")
    ax_len.set_ylim(TWO_PI - 0.5, TWO_PI + 0.5)
    ax_len.tick_params(axis="y", labelcolor="tab:blue")

    ax_pos = ax_len.twinx()
    ax_pos.plot(t, x_star, color="tab:red", lw=0.7,
                label="minimizer position")
    ax_pos.set_ylabel("minimizer position x*", color="tab:red")
    ax_pos.set_ylim(-1.2, 1.2)
    ax_pos.tick_params(axis="y", labelcolor="tab:red")

    ax_len.set_title(spec.title or
                     "Minimal length stays flat while the minimizer swings")
    fig.tight_layout()
    return fig


def _render_curvature(table, spec):
    x = table["x"]
    fig, (ax_h, ax_k) = plt.subplots(2, 1, figsize=(8.0, 6.0), sharex=True)
    ax_h.plot(x, table["h"], color="tab:blue")
    ax_h.set_ylabel("h(x)")
    ax_h.axvspan(-1.0, 1.0, color="0.92")
    ax_k.plot(x, table["K"], color="tab:red")
    ax_k.axhline(0.0, color="0.5", lw=0.7)
    ax_k.axvspan(-1.0, 1.0, color="0.92")
    ax_k.set_xlabel("x")
    ax_k.set_ylabel("K(x)")
    ax_h.set_title(spec.title or "Profile and Gaussian curvature")
    fig.tight_layout()
    return fig


def _render_shorten_trace(table, spec):
    fig, (ax_l, ax_r) = plt.subplots(2, 1, figsize=(8.0, 6.0), sharex=True)
    ax_l.plot(table["iter"], table["length"], color="tab:blue")
    ax_l.axhline(TWO_PI, color="0.5", ls=":", lw=0.8)
    ax_l.set_ylabel("loop length")
    ax_r.semilogy(table["iter"], np.maximum(table["residual"], 1e-300),
                  color="tab:red")
    ax_r.set_xlabel("iteration")
    ax_r.set_ylabel("residual")
    ax_l.set_title(spec.title or "Curve shortening convergence")
    fig.tight_layout()
    return fig


def _render_geodesic_2d(table, spec):
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.plot(table["theta"], table["x"], ",", color="tab:blue", ms=1.0)
    ax.set_xlabel("theta (mod 2 pi)")
    ax.set_ylabel("x")
    ax.set_xlim(0.0, TWO_PI)
    ax.set_title(spec.title or "Geodesic in the cylinder chart")
    fig.tight_layout()
    return fig


def _render_geodesic_3d(table, spec):
    # radius along the path recovered from the rotational invariant
    # h^2 theta' = const carried by the trajectory: h >= 1, and |vtheta|
    # is largest where h is smallest, so the invariant is |vtheta| at its
    # maximum and h = sqrt(const / |vtheta|) elsewhere
    vtheta = table["vtheta"]
    h = np.ones_like(vtheta)
    nz = vtheta != 0.0
    if np.any(nz):
        c = np.abs(vtheta[int(np.argmax(np.abs(vtheta)))])
        h[nz] = np.sqrt(np.maximum(c / np.abs(vtheta[nz]), 1.0))
    theta = table["theta"]
    fig = plt.figure(figsize=(7.0, 7.0))
    ax = fig.add_subplot(projection="3d")
    ax.plot(table["x"], h * np.cos(theta), h * np.sin(theta),
            color="tab:blue", lw=0.7)
    ax.set_xlabel("x")
    ax.set_title(spec.title or "Geodesic on the embedded neck")
    fig.tight_layout()
    return fig


_RENDERERS = {
    "sweep": _render_sweep,
    "curvature": _render_curvature,
    "shorten-trace": _render_shorten_trace,
    "geodesic-2d": _render_geodesic_2d,
    "geodesic-3d": _render_geodesic_3d,
}


def render(spec):
    """Render a figure spec to its output image; returns the output path."""
    if spec.kind not in _RENDERERS:
        raise ValueError(f"unknown figure kind {spec.kind!r}")
    path = spec.inputs[0]
    _, table = load_table(path)
    _require(table, spec.kind, path)
    fig = _RENDERERS[spec.kind](table, spec)
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return spec.output

"""Command-line front end.

Every command resolves its options into a flat config, echoes that config
into the output header (CSV comment lines or a JSON ``config`` block),
and writes machine-readable artifacts.  Runs are deterministic given the
seed; numbers are written with 17 significant digits so downstream
consumers lose nothing.

Exit codes: 0 success, 2 usage errors (click), 3 certification or
convergence failure.
"""

from __future__ import annotations

import json
import math
import sys

import click
import numpy as np

from . import moduli as moduli_mod
from . import shorten as shorten_mod
from .geodesic import (GeodesicState, geodesic_family_convergence,
                       integrate_geodesic)
from .profiles import parse_profile_spec, t_max_threshold, verify_profile_conditions
from .surface import curvature_table

EXIT_CERTIFICATION = 3
TWO_PI = 2.0 * math.pi


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _write_table(path, config, columns, rows, fmt="csv"):
    if fmt == "json":
        payload = {"config": config, "columns": columns,
                   "rows": [[float(v) for v in r] for r in rows]}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return
    with open(path, "w") as fh:
        for k in sorted(config):
            fh.write(f"# {k}={config[k]}\n")
        fh.write(",".join(columns) + "\n")
        for r in rows:
            fh.write(",".join(_fmt(v) for v in r) + "\n")


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _fail_check(message):
    click.echo(f"check failed: {message}", err=True)
    sys.exit(EXIT_CERTIFICATION)


def _parse_init_spec(spec, n, seed):
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            k, _, v = item.partition("=")
            params[k.strip()] = float(v)
    if name == "circle":
        return shorten_mod.init_loop("circle", n, x0=params.pop("x0", 0.0))
    if name == "graph":
        return shorten_mod.init_loop("graph", n,
                                     amplitude=params.pop("amp", 1.0),
                                     phase=params.pop("phase", 0.0))
    if name == "perturbed":
        return shorten_mod.init_loop("perturbed", n,
                                     x0=params.pop("x0", 0.0),
                                     noise=params.pop("noise", 0.1),
                                     seed=seed)
    raise click.UsageError(f"unknown loop init kind {name!r} in {spec!r}")


@click.group()
def main():
    """Numerical laboratory for neck surfaces of revolution."""


@main.command()
@click.option("--profile", "spec", required=True)
@click.option("--xmin", type=float, default=-10.0, show_default=True)
@click.option("--xmax", type=float, default=10.0, show_default=True)
@click.option("--dx", type=float, default=0.01, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--check", is_flag=True)
def curvature(spec, xmin, xmax, dx, out, fmt, check):
    """Tabulate h, the metric and the Gaussian curvature on a grid."""
    p = parse_profile_spec(spec)
    xs, h, h1, h2, E, G, K = curvature_table(p, xmin, xmax, dx)
    config = {"command": "curvature", "profile": spec, "xmin": xmin,
              "xmax": xmax, "dx": dx}
    _write_table(out, config, ["x", "h", "h1", "h2", "E", "G", "K"],
                 zip(xs, h, h1, h2, E, G, K), fmt)
    kmax = float(np.max(K))
    click.echo(f"curvature: {xs.size} rows, max K = {kmax:.3e} -> {out}")
    if check and kmax > 1e-12:
        _fail_check(f"positive curvature {kmax:.3e} detected")


@main.command()
@click.option("--profile", "spec", required=True)
@click.option("--x0", type=float, default=0.0)
@click.option("--theta0", type=float, default=0.0)
@click.option("--vx", type=float, default=0.6)
@click.option("--vtheta", type=float, default=0.8)
@click.option("--length", type=float, default=20.0, show_default=True)
@click.option("--step", type=float, default=1e-3, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--check", is_flag=True)
def geodesic(spec, x0, theta0, vx, vtheta, length, step, out, fmt, check):
    """Integrate a unit-speed geodesic and its conservation diagnostics."""
    p = parse_profile_spec(spec)
    traj = integrate_geodesic(p, GeodesicState(x0, theta0, vx, vtheta),
                              length, step)
    config = {"command": "geodesic", "profile": spec, "x0": x0,
              "theta0": theta0, "vx": vx, "vtheta": vtheta,
              "length": length, "step": step}
    theta_out = np.mod(traj.theta, TWO_PI)
    _write_table(out, config,
                 ["s", "x", "theta", "vx", "vtheta",
                  "clairaut_drift", "speed_drift"],
                 zip(traj.s, traj.x, theta_out, traj.vx, traj.vtheta,
                     traj.clairaut_drift, traj.speed_drift), fmt)
    click.echo(f"geodesic: length {traj.length:g}, clairaut drift "
               f"{traj.max_clairaut_drift:.3e}, certified={traj.certified} "
               f"-> {out}")
    # the conservation certificate is enforced with or without --check
    if not traj.certified:
        _fail_check("conservation certificate failed (step too large?)")
    del check


@main.command()
@click.option("--profile", "spec", required=True)
@click.option("--init", "init_spec", default="graph:amp=2,phase=0",
              show_default=True)
@click.option("--n", type=int, default=512, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--max-iter", type=int, default=200000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--check", is_flag=True)
def shorten(spec, init_spec, n, tol, max_iter, seed, out, fmt, check):
    """Shorten a loop to a minimal closed geodesic.

    The final loop goes to OUT; the per-iteration length trace goes to
    OUT with a .trace.csv suffix.
    """
    p = parse_profile_spec(spec)
    loop = _parse_init_spec(init_spec, n, seed)
    config = {"command": "shorten", "profile": spec, "init": init_spec,
              "n": n, "tol": tol, "max_iter": max_iter, "seed": seed}

    trace = [(0, shorten_mod.loop_length(p, loop),
              shorten_mod._residual(p, loop))]
    current = loop
    try:
        result = shorten_mod.shorten_to_geodesic(p, current, tol=tol,
                                                 max_iter=max_iter,
                                                 trace=trace)
    except shorten_mod.ShorteningError as exc:
        click.echo(f"shorten: {exc}", err=True)
        sys.exit(EXIT_CERTIFICATION)

    trace_path = out + ".trace.csv"
    _write_table(trace_path, config, ["iter", "length", "residual"], trace)
    _write_table(out, config, ["i", "x", "theta"],
                 zip(range(result.loop.n), result.loop.x,
                     np.mod(result.loop.theta, TWO_PI)), fmt)
    cx = "none" if result.circle_x is None else f"{result.circle_x:.6g}"
    click.echo(f"shorten: length {result.length:.12g}, residual "
               f"{result.residual:.3e}, circle_x {cx}, "
               f"{result.iterations} iterations -> {out}")
    if check:
        if abs(result.loop.winding() - 1.0) > 1e-9:
            _fail_check("winding number broken")
        if result.residual > tol:
            _fail_check("residual above tolerance")


@main.command()
@click.option("--profile", "spec", required=True)
@click.option("--grid-step", type=float, default=1e-3, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--check", is_flag=True)
def moduli(spec, grid_step, out, check):
    """Extract the minimizer set (minimal circles) of a profile."""
    p = parse_profile_spec(spec)
    t = p.t if p.kind == "swing" else (0.0 if p.kind == "base" else None)
    s = moduli_mod.minimizer_set(p, grid_step=grid_step, t=t)
    payload = {
        "config": {"command": "moduli", "profile": spec,
                   "grid_step": grid_step},
        "t": s.t, "length_min": s.length_min, "minimizers": s.minimizers,
        "band": list(s.band) if s.band else None,
        "is_interval": s.is_interval,
    }
    _write_json(out, payload)
    click.echo(f"moduli: band {s.band}, interval={s.is_interval}, "
               f"length {s.length_min:.12g} -> {out}")
    if check and not s.minimizers:
        _fail_check("empty minimizer set")


@main.command()
@click.option("--delta", type=float, default=0.5, show_default=True)
@click.option("--tmin", type=float, default=0.003, show_default=True)
@click.option("--tmax", type=float, default=0.05, show_default=True)
@click.option("--samples", type=int, default=2000, show_default=True)
@click.option("--include-zero", is_flag=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--check", is_flag=True)
def sweep(delta, tmin, tmax, samples, include_zero, workers, out, fmt, check):
    """Sweep the swing parameter: minimal length versus minimizer position."""
    ts = list(np.linspace(tmin, tmax, samples))
    if include_zero:
        ts.append(0.0)
    result = moduli_mod.sweep(delta, ts, workers=workers)
    config = {"command": "sweep", "delta": delta, "tmin": tmin, "tmax": tmax,
              "samples": samples, "include_zero": include_zero}
    _write_table(out, config,
                 ["t", "length_min", "x_star", "band_lo", "band_hi",
                  "band_width"],
                 [(r.t, r.length_min, r.x_star, r.band[0], r.band[1],
                   r.band_width) for r in result.rows], fmt)
    click.echo(f"sweep: {len(result.rows)} rows -> {out}")
    if check:
        dev = float(np.max(np.abs(result.lengths - TWO_PI)))
        if dev > 1e-4:
            _fail_check(f"minimal length deviates from 2*pi by {dev:.3e}")


@main.command()
@click.option("--delta", type=float, default=0.5, show_default=True)
@click.option("--t-limit", type=float, default=0.1, show_default=True)
@click.option("--n-max", type=int, default=100, show_default=True)
@click.option("--x0", type=float, default=0.0)
@click.option("--theta0", type=float, default=0.0)
@click.option("--vx", type=float, default=0.6)
@click.option("--vtheta", type=float, default=0.8)
@click.option("--horizon", type=float, default=10.0, show_default=True)
@click.option("--step", type=float, default=1e-3, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--check", is_flag=True)
def converge(delta, t_limit, n_max, x0, theta0, vx, vtheta, horizon, step,
             out, fmt, check):
    """Convergence of geodesics under the metric family t_n = t + 1/n."""
    ns = [n for n in range(2, n_max + 1)]
    t_seq = [t_limit + 1.0 / n for n in ns]
    report = geodesic_family_convergence(
        t_seq, t_limit, GeodesicState(x0, theta0, vx, vtheta), horizon,
        delta=delta, step=step)
    config = {"command": "converge", "delta": delta, "t_limit": t_limit,
              "n_max": n_max, "x0": x0, "theta0": theta0, "vx": vx,
              "vtheta": vtheta, "horizon": horizon, "step": step}
    _write_table(out, config, ["n", "t", "c0_dist", "c1_dist", "flagged"],
                 [(n, e.t, e.c0_dist, e.c1_dist, e.flagged)
                  for n, e in zip(ns, report.entries)], fmt)
    click.echo(f"converge: final C0 {report.entries[-1].c0_dist:.3e}, "
               f"C1 {report.entries[-1].c1_dist:.3e} -> {out}")
    if check and report.entries[-1].c1_dist > report.entries[0].c1_dist:
        _fail_check("geodesic family is not converging")


@main.command("verify-profile")
@click.option("--profile", "spec", required=True)
@click.option("--grid-step", type=float, default=1e-3, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def verify_profile(spec, grid_step, out):
    """Check the defining conditions of a profile and report margins."""
    p = parse_profile_spec(spec)
    rep = verify_profile_conditions(p, grid_step=grid_step)
    payload = {
        "config": {"command": "verify-profile", "profile": spec,
                   "grid_step": grid_step},
        "kind": rep.kind,
        "checks": [{"name": c.name, "passed": c.passed, "margin": c.margin,
                    "worst_x": c.worst_x} for c in rep.checks],
        "all_passed": rep.all_passed,
    }
    if out:
        _write_json(out, payload)
    for c in rep.checks:
        status = "pass" if c.passed else "FAIL"
        click.echo(f"  [{status}] {c.name} (margin {c.margin:.3e} "
                   f"at x={c.worst_x:.4g})")
    if not rep.all_passed:
        sys.exit(EXIT_CERTIFICATION)


@main.command()
@click.argument("config_file", type=click.Path(exists=True))
@click.pass_context
def run(ctx, config_file):
    """Run a command from a JSON config mirroring the CLI flags."""
    with open(config_file) as fh:
        cfg = json.load(fh)
    command = cfg.pop("command", None)
    if command not in main.commands or command == "run":
        raise click.UsageError(f"unknown command {command!r} in {config_file}")
    args = []
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                args.append(flag)
        else:
            args.extend([flag, str(value)])
    del ctx
    main.commands[command].main(args=args, prog_name=f"neck {command}",
                                standalone_mode=True)


if __name__ == "__main__":
    main()

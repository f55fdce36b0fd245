"""Command-line entry point: deterministic experiment runs with JSON/CSV
reports and an exit-code contract (0 = pass, 1 = usage error, 2 = witnessed
mathematical violation, which given the theorems means an implementation bug).
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, induction
from .cube import enumerate_monotone, parse_set_description, random_upset, threshold_set
from .forms import (
    SetFunction,
    check_dirichlet_decomposition,
    check_variance_decomposition,
)
from .spectral import poincare_constant, verify_theorem
from .walk import (
    CensoredKernel,
    analytic_tail_check,
    exact_tmix,
    scaling_experiment,
    simulate,
    tmix_bound,
)

EXIT_VIOLATION = 2


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _to_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _certificate(suite: str, passed: bool, counts: dict, worst_slack, witness, seed) -> dict:
    return {
        "suite": suite,
        "pass": passed,
        "counts": counts,
        "worst_slack": worst_slack,
        "witness": witness,
        "environment": {"version": __version__, "seed": seed},
    }


def _load_sets(set_descs: tuple[str, ...], enum_n: int | None):
    sets = []
    if enum_n is not None:
        sets.extend(
            (f"enum{enum_n}:{i}", A) for i, A in enumerate(enumerate_monotone(enum_n))
        )
    for desc in set_descs:
        sets.append((desc, parse_set_description(desc)))
    if not sets:
        raise click.UsageError("provide --set and/or --enumerate")
    return sets


@click.group()
@click.option("--config", type=click.Path(exists=True), default=None,
              help="JSON file with per-command option defaults.")
@click.pass_context
def cli(ctx, config):
    """Verification and experiment toolkit for monotone-set Poincare
    inequalities and the censored random walk."""
    if config:
        ctx.default_map = json.loads(Path(config).read_text())


@cli.command("enumerate")
@click.option("--n", type=int, required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", default=None)
def cmd_enumerate(n, fmt, out):
    """List every non-empty monotone subset of {0,1}^n (n <= 5)."""
    try:
        sets = list(enumerate_monotone(n))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rows = [
        {"set_id": f"enum{n}:{i}", "n": n, "size": A.size,
         "density": A.density, "mask": format(A.mask, "x")}
        for i, A in enumerate(sets)
    ]
    if fmt == "csv":
        _emit(_to_csv(rows), out)
    else:
        _emit(_to_json({"n": n, "count": len(rows), "sets": rows}), out)


@cli.command("verify")
@click.option("--set", "set_descs", multiple=True)
@click.option("--enumerate", "enum_n", type=int, default=None)
@click.option("--tol", type=float, default=1e-9)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", default=None)
def cmd_verify(set_descs, enum_n, tol, fmt, out):
    """Check the optimal Poincare constant against both theorem bounds."""
    try:
        sets = _load_sets(set_descs, enum_n)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rows, witness = [], None
    worst = float("inf")
    for set_id, A in sets:
        cert = verify_theorem(A)
        ok = bool(cert.slack_fp >= -tol and cert.slack_ours >= -tol)
        rows.append({
            "set_id": set_id, "n": A.n, "size": A.size, "density": A.density,
            "cstar": float(cert.result.cstar), "bound_fp": float(cert.result.bound_fp),
            "bound_ours": float(cert.result.bound_ours),
            "slack_fp": float(cert.slack_fp), "slack_ours": float(cert.slack_ours),
            "pass": ok,
        })
        worst = min(worst, float(cert.slack_fp))
        if not ok and witness is None:
            witness = rows[-1]
    passed = witness is None
    if fmt == "csv":
        _emit(_to_csv(rows), out)
    else:
        payload = _certificate("verify", passed, {"sets": len(rows)}, worst, witness, None)
        payload["rows"] = rows
        _emit(_to_json(payload), out)
    if not passed:
        sys.exit(EXIT_VIOLATION)


@cli.command("lemmas")
@click.option("--seed", type=int, default=induction.DEFAULT_SEED)
@click.option("--draws", type=int, default=1_000_000, help="five-point sweep size")
@click.option("--grid", type=int, default=induction.DEFAULT_GRID)
@click.option("--c", "c_value", type=float, default=0.5)
@click.option("--pairs", type=int, default=1000, help="random (A, f) decomposition pairs")
@click.option("--jensen", "jensen_count", type=int, default=100)
@click.option("--tol", type=float, default=1e-10)
@click.option("--out", default=None)
def cmd_lemmas(seed, draws, grid, c_value, pairs, jensen_count, tol, out):
    """Certify the decomposition identities and the induction-step suite."""
    if draws < 1:
        raise click.UsageError("--draws must be positive")
    if grid < 100:
        raise click.UsageError("--grid must be >= 100")
    witness = None

    rng = np.random.default_rng(seed)
    max_dir = max_var = 0.0
    for _ in range(pairs):
        n = int(rng.integers(2, 11))
        A = random_upset(n, int(rng.integers(1, 9)), rng)
        f = SetFunction.random(A, rng)
        max_dir = max(max_dir, check_dirichlet_decomposition(f).relative_residual)
        max_var = max(max_var, check_variance_decomposition(f).relative_residual)
    if max(max_dir, max_var) > tol:
        witness = {"kind": "decomposition", "max_dirichlet": max_dir, "max_variance": max_var}

    max_excess = 0.0
    done = 0
    jseed = 0
    while done < jensen_count:
        jrng = np.random.default_rng([seed, jseed])
        jseed += 1
        n = int(jrng.integers(2, 9))
        A = random_upset(n, int(jrng.integers(1, 7)), jrng)
        f = SetFunction.random(A, jrng)
        try:
            rep = induction.jensen_reduction_check(f, c_value)
        except ValueError:  # empty A0: reduction vacuous, redraw
            continue
        max_excess = max(max_excess, rep.lhs_averaged - rep.lhs_full)
        done += 1
    if max_excess > 1e-12 and witness is None:
        witness = {"kind": "jensen", "excess": max_excess}

    min_margin, psd_arg = induction.psd_margin_grid(grid)
    if min_margin < -1e-12 and witness is None:
        witness = {"kind": "psd", "a0": psd_arg[0], "a1": psd_arg[1], "margin": min_margin}

    feasible, c_witness = induction.feasible_c(c_value, grid, min(draws, 100_000), seed)
    max_delta, delta_arg = induction.discriminant_grid(grid, c_value)
    if not feasible and witness is None:
        witness = c_witness

    sweep = induction.five_point_sweep(draws, c_value, seed)
    if sweep.violations and witness is None:
        witness = dict(sweep.witness or {}, kind="five_point")

    best_c = induction.best_feasible_c(grid, min(draws, 100_000), seed)

    payload = {
        "grid": grid,
        "seed": seed,
        "draws": draws,
        "c": c_value,
        "min_psd_margin": min_margin,
        "max_discriminant": max_delta,
        "five_point_violations": sweep.violations,
        "five_point_worst_margin": sweep.worst_margin,
        "best_feasible_c": best_c,
        "decomposition": {"pairs": pairs, "max_dirichlet_residual": max_dir,
                          "max_variance_residual": max_var, "tol": tol},
        "jensen": {"instances": jensen_count, "max_excess": max_excess},
        "pass": witness is None,
        "witness": witness,
        "environment": {"version": __version__},
    }
    _emit(_to_json(payload), out)
    if witness is not None:
        sys.exit(EXIT_VIOLATION)


@cli.command("mix")
@click.option("--family", type=click.Choice(["majority"]), default=None)
@click.option("--n", "n_spec", default=None, help="comma-separated odd dimensions")
@click.option("--set", "set_desc", default=None)
@click.option("--theta", type=float, default=0.5)
@click.option("--eps", type=float, default=0.25)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
@click.option("--svg", default=None, help="write a log-log plot of t_mix and bounds")
@click.option("--out", default=None)
def cmd_mix(family, n_spec, set_desc, theta, eps, fmt, svg, out):
    """Exact mixing times against the spectral and Poincare bounds."""
    if not 0.0 < eps < 1.0:
        raise click.UsageError("--eps must lie in (0, 1)")
    if not 0.0 <= theta < 1.0:
        raise click.UsageError("--theta must lie in [0, 1)")
    if set_desc is not None:
        try:
            A = parse_set_description(set_desc)
        except ValueError as exc:
            raise click.UsageError(str(exc))
        kernel = CensoredKernel(set=A, theta=theta)
        report = exact_tmix(kernel, eps)
        payload = {
            "set": set_desc, "theta": theta, "epsilon": eps,
            "t_mix": report.t_mix, "start_policy": report.start_policy,
            "gap": report.gap, "t_rel": report.t_rel, "pi_min": report.pi_min,
            "bound_12_4": report.bound_12_4, "tv_monotone": report.tv_monotone,
        }
        if theta >= 0.5:
            b = tmix_bound(kernel, eps)
            payload["bound_poincare"] = b.poincare_bound
        _emit(_to_json(payload), out)
        return
    if family is None or n_spec is None:
        raise click.UsageError("provide --set, or --family with --n")
    try:
        n_list = [int(x) for x in n_spec.split(",")]
    except ValueError as exc:
        raise click.UsageError(f"bad --n list: {exc}")
    try:
        rows = scaling_experiment(n_list, theta=theta, epsilon=eps, family=family)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    dicts = [vars(r) for r in rows]
    if fmt == "csv":
        _emit(_to_csv(dicts), out)
    else:
        _emit(_to_json({"rows": dicts}), out)
    if svg:
        _write_mix_svg(rows, svg)
    for r in rows:
        if not (r.tmix_exact <= r.bound_spectral <= r.bound_poincare):
            sys.exit(EXIT_VIOLATION)


def _write_mix_svg(rows, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [r.n for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(ns, [r.tmix_exact for r in rows], "o-", label="exact t_mix")
    ax.loglog(ns, [r.bound_spectral for r in rows], "s--", label="spectral bound")
    ax.loglog(ns, [r.bound_poincare for r in rows], "^:", label="Poincare bound")
    ax.set_xlabel("n")
    ax.set_ylabel("steps")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


@cli.command("spectral")
@click.option("--set", "set_descs", multiple=True)
@click.option("--enumerate", "enum_n", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
@click.option("--out", default=None)
def cmd_spectral(set_descs, enum_n, fmt, out):
    """Spectral gaps and Poincare constants for the given sets."""
    try:
        sets = _load_sets(set_descs, enum_n)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rows = []
    for set_id, A in sets:
        res = poincare_constant(A)
        rows.append({
            "set_id": set_id, "n": A.n, "size": A.size, "density": A.density,
            "lambda2": float(res.lambda2), "cstar": float(res.cstar),
            "bound_fp": float(res.bound_fp), "bound_ours": float(res.bound_ours),
            "slack_fp": float(res.bound_fp - res.cstar),
            "method": res.method, "residual": float(res.residual),
        })
    _emit(_to_csv(rows) if fmt == "csv" else _to_json({"rows": rows}), out)
    if any(r["slack_fp"] < -1e-9 for r in rows):
        sys.exit(EXIT_VIOLATION)


@cli.command("simulate")
@click.option("--family", type=click.Choice(["threshold"]), default="threshold")
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--theta", type=float, default=0.5)
@click.option("--steps", type=int, default=None, help="default 4 n^2")
@click.option("--chains", type=int, default=64)
@click.option("--seed", type=int, default=0)
@click.option("--start", default=None, help="binary string start point (default all-ones)")
@click.option("--out", default=None)
def cmd_simulate(family, n, k, theta, steps, chains, seed, start, out):
    """Monte Carlo censored walk via a membership oracle."""
    from .cube import threshold_oracle

    try:
        oracle = threshold_oracle(n, k)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if steps is None:
        steps = 4 * n * n
    start_idx = (1 << n) - 1 if start is None else int(start, 2)
    kernel = CensoredKernel(oracle=oracle, theta=theta)
    try:
        result = simulate(kernel, start_idx, steps, seed, chains=chains)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    ok, pooled, analytic, se = analytic_tail_check(n, k, result)
    payload = {
        "family": family, "n": n, "k": k, "theta": theta, "steps": steps,
        "chains": chains, "seed": seed, "tail_steps": result.tail_steps,
        "pooled_coordinate_mean": pooled, "analytic_mean": analytic,
        "standard_error": se, "within_3_se": ok,
        "coordinate_means": [float(v) for v in result.pooled_means],
        "environment": {"version": __version__, "seed": seed},
    }
    _emit(_to_json(payload), out)
    if not ok:
        sys.exit(EXIT_VIOLATION)


def main():
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.Abort:
        sys.exit(1)


if __name__ == "__main__":
    main()

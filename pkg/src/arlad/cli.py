"""Command-line front end.

Four subcommands: ``fit`` and ``diagnose`` work on a single-column CSV
series, ``simulate`` runs a config-driven Monte-Carlo experiment, and
``efficiency`` tabulates the asymptotic variance factors.  Every command
emits one JSON document (plus delimited and figure files for the report
commands) and is reproducible under ``--seed``.  Errors print a JSON
error object on stderr and exit nonzero.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bootstrap import RWConfig, rw_covariance_racf, rw_covariance_theta
from .diagnostics import portmanteau_test, sign_acf, wald_test
from .estimators import fit as fit_estimator
from .exceptions import ArladError
from .figures import (
    efficiency_figure,
    estimation_report_figure,
    ghat_figure,
    sign_acf_figure,
    test_report_figure,
)
from .simharness import load_config, run_efficiency_curves, run_experiment

SCHEMA_VERSION = 1

_CLI_ESTIMATORS = {"lade": "lade", "alade": "alade_feasible", "lse": "lse"}


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ARLAD_JOBS", "1")))
    except ValueError:
        return 1


def read_series_csv(path: str) -> np.ndarray:
    """Read a one-column numeric CSV, tolerating one header line.

    Parse failures report the offending line number; NaN values are
    rejected.
    """
    values: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 1:
                raise ArladError(
                    f"{path}:{lineno}: expected a single column, got {len(row)}"
                )
            text = row[0].strip()
            try:
                value = float(text)
            except ValueError:
                if lineno == 1 and not values:
                    continue  # header line
                raise ArladError(
                    f"{path}:{lineno}: could not parse {text!r} as a number"
                ) from None
            if not np.isfinite(value):
                raise ArladError(f"{path}:{lineno}: non-finite value {text!r}")
            values.append(value)
    if not values:
        raise ArladError(f"{path}: no numeric data found")
    return np.asarray(values)


def _emit(payload: dict, out: str | None, pretty: bool) -> None:
    text = json.dumps(payload, indent=2 if pretty else None, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


def _fail(exc: Exception) -> None:
    error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    click.echo(json.dumps(error, sort_keys=True), err=True)
    sys.exit(1)


def _figure_path(out: str | None, stem: str, suffix: str) -> str:
    if out:
        base = Path(out)
        return str(base.with_name(base.stem + suffix + ".png"))
    return f"{stem}{suffix}.png"


@click.group()
@click.version_option(version=__version__, prog_name="arlad")
def main() -> None:
    """Robust estimation and diagnostics for AR series with drifting scale."""


@main.command("fit")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--p", "p", type=click.IntRange(min=0), default=1,
              show_default=True, help="Lag order.")
@click.option("--estimator", type=click.Choice(sorted(_CLI_ESTIMATORS)),
              default="alade", show_default=True)
@click.option("--bootstrap", "bootstrap_j", type=click.IntRange(min=0),
              default=500, show_default=True,
              help="Bootstrap replications for the covariance (0 disables).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--intercept/--no-intercept", default=True, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON report here instead of stdout.")
@click.option("--pretty", is_flag=True, help="Indent the JSON output.")
@click.option("--figures/--no-figures", default=True, show_default=True)
def cmd_fit(csv_path, p, estimator, bootstrap_j, seed, intercept, out,
            pretty, figures):
    """Fit an AR model to a CSV series and report coefficients."""
    try:
        y = read_series_csv(csv_path)
        kind = _CLI_ESTIMATORS[estimator]
        res = fit_estimator(y, p, kind, intercept=intercept)
        names = (["const"] if intercept else []) + [
            f"lag{j}" for j in range(1, p + 1)
        ]
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "fit",
            "input": str(csv_path),
            "n": int(y.shape[0]),
            "p": p,
            "estimator": estimator,
            "intercept": intercept,
            "coefficient_names": names,
            "theta": [float(v) for v in res.theta],
            "solver_status": res.solver_status,
            "seed": seed,
        }
        if res.bandwidth is not None:
            payload["bandwidth"] = res.bandwidth
            payload["g_hat"] = [float(v) for v in res.weights_used]
        if bootstrap_j > 0 and kind != "lse":
            cov = rw_covariance_theta(
                y, p, kind, RWConfig(J=bootstrap_j, seed=seed),
                base=res, intercept=intercept,
            )
            sds = cov.sd
            ratios = [float(t * t / v) if v > 0 else None
                      for t, v in zip(res.theta, np.diag(cov.matrix))]
            tests = [wald_test(res.theta, cov.matrix, row, [0.0])
                     for row in np.eye(res.theta.shape[0])]
            payload["bootstrap"] = {
                "J": bootstrap_j,
                "J_effective": cov.J_effective,
                "sd": [float(v) for v in sds],
                "cov": [[float(v) for v in row] for row in cov.matrix],
                "t_ratio_squared": ratios,
                "p_values": [t.p_value for t in tests],
                "warning": cov.warning,
            }
        _emit(payload, out, pretty)
        if figures and res.bandwidth is not None:
            ghat_figure(res.weights_used, np.abs(res.residuals),
                        _figure_path(out, "fit", "_ghat"))
    except (ArladError, ValueError, OSError) as exc:
        _fail(exc)


@main.command("diagnose")
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--p", "p", type=click.IntRange(min=0), default=1,
              show_default=True, help="Lag order of the fitted model.")
@click.option("--estimator", type=click.Choice(["lade", "alade"]),
              default="alade", show_default=True)
@click.option("--M", "M", type=click.IntRange(min=1), default=6,
              show_default=True, help="Number of sign-autocorrelation lags.")
@click.option("--J", "bootstrap_j", type=click.IntRange(min=2), default=500,
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--intercept/--no-intercept", default=True, show_default=True)
@click.option("--level", type=click.FloatRange(0.0, 1.0, min_open=True),
              default=0.05, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--pretty", is_flag=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def cmd_diagnose(csv_path, p, estimator, M, bootstrap_j, seed, intercept,
                 level, out, pretty, figures):
    """Sign-based adequacy check of a fitted AR model."""
    try:
        y = read_series_csv(csv_path)
        kind = _CLI_ESTIMATORS[estimator]
        res = fit_estimator(y, p, kind, intercept=intercept)
        racf = sign_acf(res.residuals, M)
        ucov = rw_covariance_racf(
            y, p, kind, M, RWConfig(J=bootstrap_j, seed=seed),
            base=res, intercept=intercept,
        )
        outcome = portmanteau_test(racf, ucov.matrix)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "diagnose",
            "input": str(csv_path),
            "n": int(y.shape[0]),
            "p": p,
            "estimator": estimator,
            "M": M,
            "J": bootstrap_j,
            "J_effective": ucov.J_effective,
            "seed": seed,
            "sign_acf": [float(v) for v in racf.r],
            "cov": [[float(v) for v in row] for row in ucov.matrix],
            "statistic": outcome.statistic,
            "df": outcome.df,
            "p_value": outcome.p_value,
            "level": level,
            "adequate": bool(outcome.p_value >= level),
            "warning": ucov.warning,
        }
        _emit(payload, out, pretty)
        if figures:
            sign_acf_figure(racf.r, ucov.matrix, racf.n,
                            _figure_path(out, "diagnose", "_sign_acf"))
    except (ArladError, ValueError, OSError) as exc:
        _fail(exc)


@main.command("simulate")
@click.option("--config", "config_src", required=True,
              help="Builtin config name or path to a JSON config file.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              default="simreport", show_default=True)
@click.option("--scale", type=click.Choice(["desk", "paper"]), default=None,
              help="Override the config's replication scale.")
@click.option("--seed", type=int, default=None,
              help="Override the config's master seed.")
@click.option("--jobs", type=int, default=None,
              help="Worker threads (default: ARLAD_JOBS or 1).")
@click.option("--figures/--no-figures", default=True, show_default=True)
def cmd_simulate(config_src, out_dir, scale, seed, jobs, figures):
    """Run a Monte-Carlo experiment and write report files."""
    try:
        config = load_config(config_src, scale=scale)
        if seed is not None:
            config = config.__class__(
                cells=config.cells, master_seed=seed,
                n_jobs=config.n_jobs, scale=config.scale,
            )
        if jobs is None:
            jobs = _default_jobs()
        if jobs != config.n_jobs:
            config = config.__class__(
                cells=config.cells, master_seed=config.master_seed,
                n_jobs=jobs, scale=config.scale,
            )
        report = run_experiment(config)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json() + "\n",
                                         encoding="utf-8")
        (out / "report.txt").write_text(report.render_text(),
                                        encoding="utf-8")
        header, rows = report.csv_rows()
        with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        if figures:
            if report.estimation_cells:
                estimation_report_figure(report, str(out / "estimation.png"))
            if report.test_cells:
                test_report_figure(report, str(out / "tests.png"))
        click.echo(str(out / "report.json"))
    except (ArladError, ValueError, OSError, json.JSONDecodeError) as exc:
        _fail(exc)


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ArladError(f"could not parse grid {text!r}") from None


@main.command("efficiency")
@click.option("--dist", type=click.Choice(["std_laplace", "std_t3",
                                           "std_normal"]),
              default="std_laplace", show_default=True)
@click.option("--profile", type=click.Choice(["abrupt", "gradual",
                                              "periodic"]),
              default="abrupt", show_default=True)
@click.option("--tau-grid", default="0.1,0.5,0.9", show_default=True,
              help="Comma-separated break points (step family only).")
@click.option("--delta-grid", default=None,
              help="Comma-separated profile deltas "
                   "(default: 20 log-spaced points in [0.2, 5]).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write a CSV table here (default: stdout JSON).")
@click.option("--pretty", is_flag=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def cmd_efficiency(dist, profile, tau_grid, delta_grid, out, pretty, figures):
    """Tabulate asymptotic variance factors across profile grids."""
    try:
        deltas = (_parse_grid(delta_grid) if delta_grid
                  else list(np.geomspace(0.2, 5.0, 20)))
        taus = _parse_grid(tau_grid)
        rows = run_efficiency_curves(dist, profile, deltas, taus)
        if out:
            with open(out, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["tau", "delta", "b1", "b2", "b3", "b4"])
                for row in rows:
                    writer.writerow([
                        "" if row["tau"] is None else row["tau"],
                        row["delta"], row["b1"], row["b2"], row["b3"],
                        row["b4"],
                    ])
            click.echo(out)
        else:
            payload = {
                "schema_version": SCHEMA_VERSION,
                "command": "efficiency",
                "dist": dist,
                "profile": profile,
                "rows": rows,
            }
            _emit(payload, None, pretty)
        if figures:
            efficiency_figure(rows, _figure_path(out, "efficiency", "_curves"))
    except (ArladError, ValueError, OSError) as exc:
        _fail(exc)


if __name__ == "__main__":
    main()

"""Figure rendering for the report paths.

Figures are built on matplotlib's object-oriented Figure API (no pyplot
global state), so rendering works headless and is safe to call from
library code.  Every renderer writes a PNG next to the delimited report
output.
"""

from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure

__all__ = [
    "efficiency_figure",
    "ghat_figure",
    "sign_acf_figure",
    "estimation_report_figure",
    "test_report_figure",
]

_B_STYLES = (("b1", "solid"), ("b2", "dashed"), ("b3", "dashdot"), ("b4", "dotted"))


def efficiency_figure(rows, out_path: str) -> None:
    """Line panels of the four variance factors against delta, one per tau."""
    taus = sorted({row["tau"] for row in rows}, key=lambda t: (t is None, t))
    fig = Figure(figsize=(5.0 * len(taus), 4.0))
    axes = fig.subplots(1, len(taus), squeeze=False)[0]
    for ax, tau in zip(axes, taus):
        sub = sorted((r for r in rows if r["tau"] == tau), key=lambda r: r["delta"])
        deltas = [r["delta"] for r in sub]
        for key, style in _B_STYLES:
            ax.plot(deltas, [r[key] for r in sub], linestyle=style, label=key)
        ax.set_xlabel("delta")
        ax.set_ylabel("asymptotic variance factor")
        ax.set_title("all delta" if tau is None else f"tau = {tau:g}")
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def ghat_figure(ghat_values, abs_residuals, out_path: str) -> None:
    """Estimated scale profile over the absolute residuals it smooths."""
    n = len(abs_residuals)
    x = np.arange(1, n + 1) / n
    fig = Figure(figsize=(7.0, 4.0))
    ax = fig.subplots()
    ax.plot(x, abs_residuals, ".", markersize=3, alpha=0.45,
            label="|residual|")
    ax.plot(x, ghat_values, lw=2, label="estimated scale")
    ax.set_xlabel("t / n")
    ax.set_ylabel("scale")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def sign_acf_figure(r, U, n, out_path: str) -> None:
    """Sign autocorrelations with two-sided 95% bootstrap bands."""
    r = np.asarray(r, dtype=np.float64)
    band = 1.96 * np.sqrt(np.diag(np.atleast_2d(U)))
    lags = np.arange(1, r.size + 1)
    fig = Figure(figsize=(7.0, 4.0))
    ax = fig.subplots()
    ax.vlines(lags, 0.0, r, lw=3)
    ax.plot(lags, band, "--", color="gray", lw=1)
    ax.plot(lags, -band, "--", color="gray", lw=1)
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("lag")
    ax.set_ylabel("sign autocorrelation")
    ax.set_title(f"n = {n}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def estimation_report_figure(report, out_path: str) -> None:
    """Grouped bars of SE (and AE when present) per cell and estimator."""
    cells = report.estimation_cells
    if not cells:
        return
    labels: list[str] = []
    se_vals: list[float] = []
    ae_vals: list[float] = []
    for cell in cells:
        for kind, summ in cell.summaries.items():
            labels.append(f"{cell.name}\n{kind}")
            se_vals.append(summ.se[-1] if summ.se else np.nan)
            ae_vals.append(summ.ae[-1] if summ.ae else np.nan)
    x = np.arange(len(labels))
    fig = Figure(figsize=(max(6.0, 0.85 * len(labels)), 4.5))
    ax = fig.subplots()
    ax.bar(x - 0.18, se_vals, width=0.36, label="SE (Monte Carlo)")
    if not np.all(np.isnan(ae_vals)):
        ax.bar(x + 0.18, ae_vals, width=0.36, label="AE (bootstrap)")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=7, rotation=45, ha="right")
    ax.set_ylabel("root mean squared error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)


def test_report_figure(report, out_path: str) -> None:
    """Grouped bars of rejection rates per test cell."""
    cells = report.test_cells
    if not cells:
        return
    tests = ["wald_lade", "wald_alade_feasible",
             "portmanteau_lade", "portmanteau_alade_feasible"]
    x = np.arange(len(cells))
    width = 0.8 / len(tests)
    fig = Figure(figsize=(max(6.0, 1.4 * len(cells)), 4.5))
    ax = fig.subplots()
    for i, tname in enumerate(tests):
        vals = [cell.rejection_rates.get(tname, np.nan) for cell in cells]
        ax.bar(x + (i - 1.5) * width, vals, width=width, label=tname)
    level = cells[0].config.level
    ax.axhline(level, color="black", lw=0.8, linestyle="--",
               label=f"nominal {level:g}")
    ax.set_xticks(x)
    ax.set_xticklabels([c.name for c in cells], fontsize=7,
                       rotation=30, ha="right")
    ax.set_ylabel("rejection rate")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)

"""Config-driven Monte-Carlo experiment engine.

An experiment is a list of cells.  Estimation cells draw R samples,
apply the requested estimators, and report per-coefficient summaries:
SE (root mean squared error about the truth), SD (sample standard
deviation), AE (mean bootstrap standard error), and the efficiency
ratios R1-R4 against the adaptive least-squares baseline.  Test cells
fit a full model for the last-coefficient Wald test and an underfitted
model for the sign-based portmanteau test, both with bootstrap critical
values, and report rejection rates.

Seeding is hierarchical (experiment -> cell -> replication -> purpose),
so reports are bit-identical for a fixed master seed regardless of
worker count; aggregation is by replication index.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .asymptotics import (
    EfficiencyConstants,
    ErrorDist,
    GProfile,
    efficiency_constants,
    error_dist,
    step_efficiency_constants,
)
from .bootstrap import RWConfig, rw_covariance_racf, rw_covariance_theta
from .diagnostics import portmanteau_test, sign_acf, wald_test
from .dgp import DGPSpec, gen_sample
from .estimators import ESTIMATOR_KINDS, L1_KINDS, fit
from .exceptions import ArladError, ConfigError
from .l1 import STATUS_OPTIMAL

__all__ = [
    "CellConfig",
    "ExperimentConfig",
    "EstimatorSummary",
    "EstimationCellResult",
    "TestCellResult",
    "SimReport",
    "parse_config",
    "load_config",
    "builtin_config",
    "builtin_config_names",
    "run_estimation_cell",
    "run_test_cell",
    "run_efficiency_curves",
    "run_experiment",
]

SCALE_REPLICATIONS = {"desk": 500, "paper": 1000}

# Ratio name -> (numerator kind, denominator kind), all SDs.
RATIO_DEFS = {
    "R1": ("alade_feasible", "alade_infeasible"),
    "R2": ("lade", "alse_infeasible"),
    "R3": ("alade_feasible", "alse_infeasible"),
    "R4": ("lse", "alse_infeasible"),
}

_PROFILE_KINDS = ("constant", "abrupt", "gradual", "periodic", "step")


def make_profile(kind: str, delta: float | None = None, **params) -> GProfile:
    """Build a scale profile from config fields."""
    if kind == "constant":
        return GProfile.constant(1.0 if delta is None else delta)
    if delta is None and kind != "step":
        raise ConfigError(f"profile kind {kind!r} requires 'delta'")
    if kind == "abrupt":
        return GProfile.abrupt(delta)
    if kind == "gradual":
        return GProfile.gradual(delta)
    if kind == "periodic":
        return GProfile.periodic(delta)
    if kind == "step":
        try:
            return GProfile.step(params["e0"], params["e1"], params["tau"])
        except KeyError as exc:
            raise ConfigError(f"step profile requires {exc.args[0]!r}") from None
    raise ConfigError(
        f"unknown profile kind {kind!r}; expected one of {_PROFILE_KINDS}"
    )


@dataclass(frozen=True)
class CellConfig:
    """One Monte-Carlo cell (an estimation grid point or a test design)."""

    name: str
    mode: str
    ar: tuple[float, ...]
    g_kind: str
    g_delta: float | None
    innovation: str
    n: int
    replications: int
    garch: tuple[float, float] | None = None
    burn_in: int = 500
    estimators: tuple[str, ...] = ("lade", "alade_feasible")
    bootstrap_j: int = 500
    bootstrap_estimators: tuple[str, ...] | None = None
    intercept: bool = False
    wald_fit_p: int = 2
    portmanteau_fit_p: int = 1
    M: int = 6
    level: float = 0.05
    invalid_failure_fraction: float = 0.02

    def __post_init__(self) -> None:
        if self.mode not in ("estimation", "test"):
            raise ConfigError(f"cell {self.name!r}: unknown mode {self.mode!r}")
        if self.replications < 2:
            raise ConfigError(f"cell {self.name!r}: replications must be >= 2")
        for est in self.estimators:
            if est not in ESTIMATOR_KINDS:
                raise ConfigError(f"cell {self.name!r}: unknown estimator {est!r}")
        error_dist(self.innovation)
        if self.mode == "test" and self.bootstrap_j < 2:
            raise ConfigError(f"cell {self.name!r}: test cells need bootstrap_j >= 2")

    def profile(self) -> GProfile:
        return make_profile(self.g_kind, self.g_delta)

    def dgp(self) -> DGPSpec:
        return DGPSpec(
            ar=self.ar,
            g=self.profile(),
            innovation=error_dist(self.innovation),
            n=self.n,
            garch=self.garch,
            burn_in=self.burn_in,
        )

    def boot_kinds(self) -> tuple[str, ...]:
        if self.bootstrap_j < 2:
            return ()
        if self.bootstrap_estimators is not None:
            return self.bootstrap_estimators
        return tuple(e for e in self.estimators if e in L1_KINDS)


@dataclass(frozen=True)
class ExperimentConfig:
    cells: tuple[CellConfig, ...]
    master_seed: int = 0
    n_jobs: int = 1
    scale: str = "desk"


# --------------------------------------------------------------------------
# config parsing


def _reject_unknown(d: dict, allowed: set[str], context: str) -> None:
    for key in d:
        if key not in allowed:
            raise ConfigError(f"unknown config key {context}{key!r}")


_TOP_KEYS = {"cells", "master_seed", "n_jobs", "scale"}
_CELL_KEYS = {
    "name", "mode", "dgp", "replications", "estimators", "bootstrap_j",
    "bootstrap_estimators", "intercept", "wald_fit_p", "portmanteau_fit_p",
    "M", "level",
}
_DGP_KEYS = {"ar", "g", "innovation", "garch", "n", "burn_in"}
_G_KEYS = {"kind", "delta", "e0", "e1", "tau"}


def parse_config(raw: dict, *, scale: str | None = None) -> ExperimentConfig:
    """Validate a configuration dictionary.

    Unknown keys raise :class:`ConfigError` naming the key.  ``scale``
    overrides the file's scale and sets the default replication count
    for cells that do not pin one.
    """
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "")
    eff_scale = scale or raw.get("scale", "desk")
    if eff_scale not in SCALE_REPLICATIONS:
        raise ConfigError(f"unknown scale {eff_scale!r}")
    default_r = SCALE_REPLICATIONS[eff_scale]
    cells_raw = raw.get("cells")
    if not cells_raw:
        raise ConfigError("configuration has no cells")
    cells = []
    for i, cell_raw in enumerate(cells_raw):
        context = f"cells[{i}]."
        if not isinstance(cell_raw, dict):
            raise ConfigError(f"{context[:-1]} must be an object")
        _reject_unknown(cell_raw, _CELL_KEYS, context)
        dgp_raw = cell_raw.get("dgp")
        if not isinstance(dgp_raw, dict):
            raise ConfigError(f"cell {i}: missing 'dgp' object")
        _reject_unknown(dgp_raw, _DGP_KEYS, context + "dgp.")
        g_raw = dgp_raw.get("g", {"kind": "constant"})
        _reject_unknown(g_raw, _G_KEYS, context + "dgp.g.")
        garch = dgp_raw.get("garch")
        cells.append(
            CellConfig(
                name=str(cell_raw.get("name", f"cell{i}")),
                mode=str(cell_raw.get("mode", "estimation")),
                ar=tuple(float(a) for a in dgp_raw.get("ar", ())),
                g_kind=str(g_raw.get("kind", "constant")),
                g_delta=(None if g_raw.get("delta") is None
                         else float(g_raw["delta"])),
                innovation=str(dgp_raw.get("innovation", "std_laplace")),
                n=int(dgp_raw.get("n", 200)),
                replications=int(cell_raw.get("replications", default_r)),
                garch=None if garch is None else (float(garch[0]), float(garch[1])),
                burn_in=int(dgp_raw.get("burn_in", 500)),
                estimators=tuple(cell_raw.get("estimators",
                                              ("lade", "alade_feasible"))),
                bootstrap_j=int(cell_raw.get("bootstrap_j", 500)),
                bootstrap_estimators=(
                    None if cell_raw.get("bootstrap_estimators") is None
                    else tuple(cell_raw["bootstrap_estimators"])
                ),
                intercept=bool(cell_raw.get("intercept", False)),
                wald_fit_p=int(cell_raw.get("wald_fit_p", 2)),
                portmanteau_fit_p=int(cell_raw.get("portmanteau_fit_p", 1)),
                M=int(cell_raw.get("M", 6)),
                level=float(cell_raw.get("level", 0.05)),
            )
        )
    return ExperimentConfig(
        cells=tuple(cells),
        master_seed=int(raw.get("master_seed", 0)),
        n_jobs=int(raw.get("n_jobs", 1)),
        scale=eff_scale,
    )


def _grid_cells(
    *,
    prefix: str,
    mode: str,
    deltas,
    ns,
    kappas=(None,),
    innovation="std_laplace",
    garch_pairs=((0.0, 0.0),),
    estimators=("lade", "alade_feasible"),
    bootstrap_j=500,
) -> list[dict]:
    cells = []
    for ga, gb in garch_pairs:
        for delta in deltas:
            for n in ns:
                for kappa in kappas:
                    ar = [0.5] if kappa is None else [0.5, kappa]
                    tag = f"{prefix}-a{ga:g}b{gb:g}-d{delta:g}-n{n}"
                    if kappa is not None:
                        tag += f"-k{kappa:g}"
                    cell = {
                        "name": tag,
                        "mode": mode,
                        "dgp": {
                            "ar": ar,
                            "g": {"kind": "abrupt", "delta": delta},
                            "innovation": innovation,
                            "garch": [ga, gb],
                            "n": n,
                        },
                        "bootstrap_j": bootstrap_j,
                    }
                    if mode == "estimation":
                        cell["estimators"] = list(estimators)
                    cells.append(cell)
    return cells


def builtin_config(name: str) -> dict:
    """A bundled experiment configuration as a raw dictionary."""
    if name == "table1_sl_iid":
        cells = _grid_cells(prefix="t1", mode="estimation",
                            deltas=(0.2, 5.0), ns=(100, 200))
    elif name == "table2_sl_iid":
        cells = _grid_cells(
            prefix="t2", mode="estimation", deltas=(0.2, 5.0), ns=(100, 200),
            estimators=("lade", "alade_feasible", "alade_infeasible",
                        "lse", "alse_infeasible"),
            bootstrap_j=0,
        )
    elif name == "table3_sl_iid":
        cells = _grid_cells(prefix="t3", mode="test", deltas=(0.2,),
                            ns=(100, 200), kappas=(0.0, 0.2, 0.4))
    elif name == "demo":
        cells = _grid_cells(prefix="demo", mode="estimation",
                            deltas=(0.2,), ns=(100,), bootstrap_j=50)
        for cell in cells:
            cell["replications"] = 20
        cells += _grid_cells(prefix="demo", mode="test", deltas=(0.2,),
                             ns=(100,), kappas=(0.4,), bootstrap_j=50)
        cells[-1]["replications"] = 10
    else:
        raise ConfigError(
            f"unknown builtin configuration {name!r}; "
            f"available: {builtin_config_names()}"
        )
    return {"master_seed": 20180127, "cells": cells}


def builtin_config_names() -> tuple[str, ...]:
    return ("table1_sl_iid", "table2_sl_iid", "table3_sl_iid", "demo")


def load_config(source: str, *, scale: str | None = None) -> ExperimentConfig:
    """Load a configuration from a builtin name or a JSON file path."""
    if source in builtin_config_names():
        return parse_config(builtin_config(source), scale=scale)
    with open(source, encoding="utf-8") as fh:
        raw = json.load(fh)
    return parse_config(raw, scale=scale)


# --------------------------------------------------------------------------
# results


@dataclass
class EstimatorSummary:
    kind: str
    mean: list[float]
    se: list[float]
    sd: list[float]
    ae: list[float] | None
    n_ok: int
    n_failed: int


@dataclass
class EstimationCellResult:
    name: str
    config: CellConfig
    theta0: list[float]
    summaries: dict[str, EstimatorSummary]
    ratios: dict[str, list[float] | None]
    invalid: bool


@dataclass
class TestCellResult:
    name: str
    config: CellConfig
    rejection_rates: dict[str, float]
    n_ok: dict[str, int]
    n_failed: dict[str, int]
    invalid: bool


@dataclass
class SimReport:
    master_seed: int
    scale: str
    estimation_cells: list[EstimationCellResult] = field(default_factory=list)
    test_cells: list[TestCellResult] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema_version": 1,
            "master_seed": self.master_seed,
            "scale": self.scale,
            "estimation_cells": [],
            "test_cells": [],
        }
        for cell in self.estimation_cells:
            out["estimation_cells"].append({
                "name": cell.name,
                "n": cell.config.n,
                "ar": list(cell.config.ar),
                "g": {"kind": cell.config.g_kind, "delta": cell.config.g_delta},
                "garch": (None if cell.config.garch is None
                          else list(cell.config.garch)),
                "innovation": cell.config.innovation,
                "replications": cell.config.replications,
                "bootstrap_j": cell.config.bootstrap_j,
                "theta0": cell.theta0,
                "estimators": {
                    kind: {
                        "mean": summ.mean,
                        "se": summ.se,
                        "sd": summ.sd,
                        "ae": summ.ae,
                        "n_ok": summ.n_ok,
                        "n_failed": summ.n_failed,
                    }
                    for kind, summ in cell.summaries.items()
                },
                "ratios": cell.ratios,
                "invalid": cell.invalid,
            })
        for cell in self.test_cells:
            out["test_cells"].append({
                "name": cell.name,
                "n": cell.config.n,
                "ar": list(cell.config.ar),
                "g": {"kind": cell.config.g_kind, "delta": cell.config.g_delta},
                "garch": (None if cell.config.garch is None
                          else list(cell.config.garch)),
                "innovation": cell.config.innovation,
                "replications": cell.config.replications,
                "bootstrap_j": cell.config.bootstrap_j,
                "level": cell.config.level,
                "M": cell.config.M,
                "rejection_rates": cell.rejection_rates,
                "n_ok": cell.n_ok,
                "n_failed": cell.n_failed,
                "invalid": cell.invalid,
            })
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def csv_rows(self) -> tuple[list[str], list[list]]:
        """Tidy long-format rows for delimited output."""
        header = ["section", "cell", "n", "estimator_or_test",
                  "metric", "coef", "value"]
        rows: list[list] = []
        for cell in self.estimation_cells:
            for kind, summ in cell.summaries.items():
                for metric, vals in (("se", summ.se), ("sd", summ.sd),
                                     ("ae", summ.ae), ("mean", summ.mean)):
                    if vals is None:
                        continue
                    for j, val in enumerate(vals):
                        rows.append(["estimation", cell.name, cell.config.n,
                                     kind, metric, j, val])
            for rname, vals in cell.ratios.items():
                if vals is None:
                    rows.append(["estimation", cell.name, cell.config.n,
                                 "", rname, "", "undefined"])
                else:
                    for j, val in enumerate(vals):
                        rows.append(["estimation", cell.name, cell.config.n,
                                     "", rname, j, val])
        for cell in self.test_cells:
            for test_name, rate in cell.rejection_rates.items():
                rows.append(["test", cell.name, cell.config.n, test_name,
                             "rejection_rate", "", rate])
        return header, rows

    def render_text(self) -> str:
        lines: list[str] = []
        if self.estimation_cells:
            lines.append("Estimation cells (per-coefficient SE / AE / SD)")
            lines.append("-" * 78)
            head = (f"{'cell':<28}{'estimator':<18}{'metric':<8}"
                    f"{'values':<24}")
            lines.append(head)
            for cell in self.estimation_cells:
                for kind, summ in cell.summaries.items():
                    for metric, vals in (("SE", summ.se), ("AE", summ.ae),
                                         ("SD", summ.sd)):
                        if vals is None:
                            continue
                        vstr = " ".join(f"{v:.4f}" for v in vals)
                        lines.append(f"{cell.name:<28}{kind:<18}{metric:<8}{vstr:<24}")
                for rname in sorted(cell.ratios):
                    vals = cell.ratios[rname]
                    vstr = ("undefined" if vals is None
                            else " ".join(f"{v:.4f}" for v in vals))
                    lines.append(f"{cell.name:<28}{'':<18}{rname:<8}{vstr:<24}")
                if cell.invalid:
                    lines.append(f"{cell.name:<28}  ** flagged invalid "
                                 "(too many failed replications)")
            lines.append("")
        if self.test_cells:
            lines.append("Test cells (rejection rates)")
            lines.append("-" * 78)
            tests = ["wald_lade", "wald_alade_feasible",
                     "portmanteau_lade", "portmanteau_alade_feasible"]
            head = f"{'cell':<28}{'n':>6}  " + "".join(f"{t:>28}" for t in tests)
            lines.append(head)
            for cell in self.test_cells:
                vals = "".join(
                    f"{100 * cell.rejection_rates.get(t, float('nan')):>28.1f}"
                    for t in tests
                )
                lines.append(f"{cell.name:<28}{cell.config.n:>6}  {vals}")
                if cell.invalid:
                    lines.append(f"{cell.name:<28}  ** flagged invalid")
            lines.append("")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# cell runners


def _map_indexed(fn, count: int, n_jobs: int) -> list:
    if n_jobs <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, range(count)))


def _theta0(cell: CellConfig) -> np.ndarray:
    slopes = np.asarray(cell.ar, dtype=np.float64)
    if cell.intercept:
        return np.concatenate([[0.0], slopes])
    return slopes


def run_estimation_cell(
    cell: CellConfig,
    seed: np.random.SeedSequence,
    *,
    n_jobs: int = 1,
) -> EstimationCellResult:
    """Run one estimation cell and aggregate coefficient summaries."""
    if cell.mode != "estimation":
        raise ValueError("not an estimation cell")
    dgp = cell.dgp()
    theta0 = _theta0(cell)
    boot_kinds = cell.boot_kinds()
    rep_seeds = seed.spawn(cell.replications)
    n_streams = 1 + len(boot_kinds)

    def one(r: int):
        parts = rep_seeds[r].spawn(n_streams)
        sample = gen_sample(dgp, np.random.default_rng(parts[0]))
        thetas: dict[str, np.ndarray | None] = {}
        aes: dict[str, np.ndarray | None] = {}
        for kind in cell.estimators:
            try:
                res = fit(sample, len(cell.ar), kind, intercept=cell.intercept)
                if res.solver is not None and res.solver.status != STATUS_OPTIMAL:
                    thetas[kind] = None
                    continue
                thetas[kind] = res.theta
            except ArladError:
                thetas[kind] = None
                continue
            if kind in boot_kinds:
                cfg = RWConfig(J=cell.bootstrap_j,
                               seed=parts[1 + boot_kinds.index(kind)])
                try:
                    cov = rw_covariance_theta(
                        sample, len(cell.ar), kind, cfg,
                        base=res, intercept=cell.intercept,
                    )
                    aes[kind] = cov.sd
                except ArladError:
                    aes[kind] = None
        return thetas, aes

    results = _map_indexed(one, cell.replications, n_jobs)

    summaries: dict[str, EstimatorSummary] = {}
    invalid = False
    k = theta0.shape[0]
    for kind in cell.estimators:
        mat = np.full((cell.replications, k), np.nan)
        ae_mat = np.full((cell.replications, k), np.nan)
        for r, (thetas, aes) in enumerate(results):
            if thetas.get(kind) is not None:
                mat[r] = thetas[kind]
            ae = aes.get(kind)
            if ae is not None:
                ae_mat[r] = ae
        ok = ~np.isnan(mat[:, 0])
        n_ok = int(ok.sum())
        n_failed = cell.replications - n_ok
        if n_failed > cell.invalid_failure_fraction * cell.replications:
            invalid = True
        if n_ok >= 2:
            sub = mat[ok]
            se = np.sqrt(np.mean((sub - theta0) ** 2, axis=0))
            sd = np.std(sub, axis=0, ddof=1)
            mean = sub.mean(axis=0)
        else:
            se = sd = mean = np.full(k, np.nan)
        ae_ok = ~np.isnan(ae_mat[:, 0])
        ae = ae_mat[ae_ok].mean(axis=0) if ae_ok.any() else None
        summaries[kind] = EstimatorSummary(
            kind=kind,
            mean=[float(v) for v in mean],
            se=[float(v) for v in se],
            sd=[float(v) for v in sd],
            ae=None if ae is None else [float(v) for v in ae],
            n_ok=n_ok,
            n_failed=n_failed,
        )

    ratios: dict[str, list[float] | None] = {}
    for rname, (num, den) in RATIO_DEFS.items():
        if num in summaries and den in summaries:
            den_sd = np.asarray(summaries[den].sd)
            num_sd = np.asarray(summaries[num].sd)
            if np.isnan(den_sd).any() or (den_sd == 0).any() or np.isnan(num_sd).any():
                ratios[rname] = None  # undefined, flagged
            else:
                ratios[rname] = [float(v) for v in num_sd / den_sd]

    return EstimationCellResult(
        name=cell.name,
        config=cell,
        theta0=[float(v) for v in theta0],
        summaries=summaries,
        ratios=ratios,
        invalid=invalid,
    )


_TEST_ESTIMATORS = ("lade", "alade_feasible")


def run_test_cell(
    cell: CellConfig,
    seed: np.random.SeedSequence,
    *,
    n_jobs: int = 1,
) -> TestCellResult:
    """Run one test cell: last-coefficient Wald and portmanteau checks.

    The Wald test fits ``wald_fit_p`` lags (slope only unless the cell
    asks for an intercept) and tests the last slope against zero; the
    portmanteau test fits ``portmanteau_fit_p`` lags and checks the sign
    autocorrelations at lags 1..M.  Both run once per replication for
    the plain and the feasible adaptive L1 fits.
    """
    if cell.mode != "test":
        raise ValueError("not a test cell")
    dgp = cell.dgp()
    rep_seeds = seed.spawn(cell.replications)
    test_names = [f"{test}_{est}" for test in ("wald", "portmanteau")
                  for est in _TEST_ESTIMATORS]

    p_wald = cell.wald_fit_p
    gamma = np.zeros((1, p_wald + (1 if cell.intercept else 0)))
    gamma[0, -1] = 1.0

    def one(r: int):
        parts = rep_seeds[r].spawn(1 + 2 * len(_TEST_ESTIMATORS))
        sample = gen_sample(dgp, np.random.default_rng(parts[0]))
        outcome: dict[str, bool | None] = {}
        stream = 1
        for est in _TEST_ESTIMATORS:
            try:
                base = fit(sample, p_wald, est, intercept=cell.intercept)
                cov = rw_covariance_theta(
                    sample, p_wald, est,
                    RWConfig(J=cell.bootstrap_j, seed=parts[stream]),
                    base=base, intercept=cell.intercept,
                )
                out = wald_test(base.theta, cov.matrix, gamma, [0.0])
                outcome[f"wald_{est}"] = bool(out.p_value < cell.level)
            except ArladError:
                outcome[f"wald_{est}"] = None
            stream += 1
        for est in _TEST_ESTIMATORS:
            try:
                base = fit(sample, cell.portmanteau_fit_p, est,
                           intercept=cell.intercept)
                racf = sign_acf(base.residuals, cell.M)
                ucov = rw_covariance_racf(
                    sample, cell.portmanteau_fit_p, est, cell.M,
                    RWConfig(J=cell.bootstrap_j, seed=parts[stream]),
                    base=base, intercept=cell.intercept,
                )
                out = portmanteau_test(racf, ucov.matrix)
                outcome[f"portmanteau_{est}"] = bool(out.p_value < cell.level)
            except ArladError:
                outcome[f"portmanteau_{est}"] = None
            stream += 1
        return outcome

    results = _map_indexed(one, cell.replications, n_jobs)

    rates: dict[str, float] = {}
    n_ok: dict[str, int] = {}
    n_failed: dict[str, int] = {}
    invalid = False
    for tname in test_names:
        flags = [res[tname] for res in results if res[tname] is not None]
        n_ok[tname] = len(flags)
        n_failed[tname] = cell.replications - len(flags)
        if n_failed[tname] > cell.invalid_failure_fraction * cell.replications:
            invalid = True
        rates[tname] = float(np.mean(flags)) if flags else float("nan")

    return TestCellResult(
        name=cell.name,
        config=cell,
        rejection_rates=rates,
        n_ok=n_ok,
        n_failed=n_failed,
        invalid=invalid,
    )


def run_efficiency_curves(
    dist: ErrorDist | str,
    profile_family: str,
    delta_grid,
    tau_grid=None,
) -> list[dict[str, float | None]]:
    """Tabulate the efficiency constants over a profile grid.

    For the step family the closed forms are used and the grid spans
    ``tau_grid x delta_grid``; other families integrate by quadrature
    and ignore ``tau_grid``.
    """
    if isinstance(dist, str):
        dist = error_dist(dist)
    rows: list[dict[str, float | None]] = []
    deltas = [float(d) for d in delta_grid]
    if profile_family in ("abrupt", "step"):
        taus = [0.5] if tau_grid is None else [float(t) for t in tau_grid]
        for tau in taus:
            for delta in deltas:
                const = step_efficiency_constants(tau, delta, dist)
                rows.append({"tau": tau, "delta": delta,
                             **_const_dict(const)})
        return rows
    for delta in deltas:
        const = efficiency_constants(make_profile(profile_family, delta), dist)
        rows.append({"tau": None, "delta": delta, **_const_dict(const)})
    return rows


def _const_dict(const: EfficiencyConstants) -> dict[str, float]:
    return {"b1": const.b1, "b2": const.b2, "b3": const.b3, "b4": const.b4}


def run_experiment(config: ExperimentConfig) -> SimReport:
    """Run every cell of an experiment under hierarchical seeding."""
    report = SimReport(master_seed=config.master_seed, scale=config.scale)
    cell_seeds = np.random.SeedSequence(config.master_seed).spawn(len(config.cells))
    for cell, cseed in zip(config.cells, cell_seeds):
        if cell.mode == "estimation":
            report.estimation_cells.append(
                run_estimation_cell(cell, cseed, n_jobs=config.n_jobs)
            )
        else:
            report.test_cells.append(
                run_test_cell(cell, cseed, n_jobs=config.n_jobs)
            )
    return report

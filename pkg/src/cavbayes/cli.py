"""Scenario runner: config-driven point evaluations, sweeps, verification.

All configuration values are dimensionless products in units of the prior
mean (g0 tau_c, Delta/g0, sigma/g0, gamma tau_f, kappa/g0, ...), which is the
scale used everywhere downstream; internally the prior mean is set to one.

Subcommands
    state     print the detector-time density matrix at one coupling value
    mmse      optimal quadratic-cost estimator at the configured scenario
    ml        likelihood-optimal POVM constants and cost
    sweep     one row per axis point of a configured quantity
    tau-star  cost-minimizing interaction time
    verify    run the full verification battery (exit 2 on failure)

Exit codes: 0 success, 1 config error, 2 verification failure,
3 numeric error (degenerate scenario).
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import bounds as bounds_mod
from . import ml as ml_mod
from . import mmse as mmse_mod
from . import oracle as oracle_mod
from . import priors as priors_mod
from .dynamics import FieldState, Scenario, dissipative_state, field_for, reduced_state
from .errors import (
    CavbayesError,
    ConfigError,
    DegenerateGamma0,
    SingularSLD,
    UnsupportedCombination,
)
from .priors import Prior

__all__ = ["SweepSpec", "Table", "run_sweep", "find_tau_star", "verify_all", "main"]

QUANTITIES = (
    "mmse_eigenvalues",
    "mmse_cost",
    "mmse_avg_estimate",
    "mmse_cr_bound",
    "ml_cost",
    "ml_avg_estimate",
    "ml_cr_bound",
    "dissipative_cost",
)
AXES = ("tau_c", "g_over_g0", "delta", "gamma_tau_f")

_SUPPORTED_AXES = {
    "mmse_eigenvalues": ("tau_c", "delta", "gamma_tau_f"),
    "mmse_cost": ("tau_c", "delta", "gamma_tau_f"),
    "mmse_avg_estimate": ("g_over_g0",),
    "mmse_cr_bound": ("g_over_g0",),
    "ml_cost": ("tau_c", "gamma_tau_f"),
    "ml_avg_estimate": ("g_over_g0", "tau_c"),
    "ml_cr_bound": ("g_over_g0",),
    "dissipative_cost": ("tau_c",),
}
_VACUUM_RESONANT_ONLY = ("ml_cost", "ml_avg_estimate", "ml_cr_bound", "dissipative_cost")


@dataclass(frozen=True)
class SweepSpec:
    """One axis, one quantity, everything else pinned."""

    quantity: str
    axis: str
    lo: float
    hi: float
    n_points: int
    prior: Prior
    scenario: Scenario
    field: Optional[FieldState] = None

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise UnsupportedCombination(f"unknown quantity {self.quantity!r}")
        if self.axis not in AXES:
            raise UnsupportedCombination(f"unknown axis {self.axis!r}")
        if self.axis not in _SUPPORTED_AXES[self.quantity]:
            raise UnsupportedCombination(
                f"quantity {self.quantity!r} does not support axis {self.axis!r}; "
                f"supported: {_SUPPORTED_AXES[self.quantity]}"
            )
        if not self.lo < self.hi:
            raise UnsupportedCombination("sweep range must satisfy lo < hi")
        if self.n_points < 2:
            raise UnsupportedCombination("sweep needs at least 2 points")
        if self.quantity in _VACUUM_RESONANT_ONLY:
            if self.scenario.delta != 0.0 or abs(self.scenario.alpha) != 0.0:
                raise UnsupportedCombination(
                    f"{self.quantity} requires resonant interaction with a vacuum field"
                )

    def resolved_field(self) -> FieldState:
        return self.field if self.field is not None else field_for(self.scenario)


@dataclass
class Table:
    columns: list
    rows: list = dc_field(default_factory=list)


def _with(scenario: Scenario, **updates) -> Scenario:
    base = dict(
        tau_c=scenario.tau_c,
        tau_f_gamma=scenario.tau_f_gamma,
        delta=scenario.delta,
        alpha=scenario.alpha,
        kappa=scenario.kappa,
        gamma_cav=scenario.gamma_cav,
        fock_cutoff=scenario.fock_cutoff,
    )
    base.update(updates)
    return Scenario(**base)


def _mmse_result(prior: Prior, scenario: Scenario, field: FieldState):
    gammas = mmse_mod.gamma_moments(prior, scenario, field)
    return mmse_mod.mmse_estimator(gammas, scenario.tau_f_gamma)


def _dissipative_cost(prior: Prior, scenario: Scenario, tau: float) -> float:
    gammas = mmse_mod.gamma_moments_dissipative(
        prior, tau, scenario.gamma_cav, scenario.kappa
    )
    return mmse_mod.mmse_estimator(gammas).c_min


def _sweep_row(spec: SweepSpec, value: float) -> list:
    prior = spec.prior
    scenario = spec.scenario
    fld = spec.resolved_field()
    q = spec.quantity

    if spec.axis == "tau_c":
        scenario = _with(scenario, tau_c=value)
    elif spec.axis == "delta":
        scenario = _with(scenario, delta=value)
    elif spec.axis == "gamma_tau_f":
        scenario = _with(scenario, tau_f_gamma=value)

    if q == "dissipative_cost":
        return [value, _dissipative_cost(prior, scenario, scenario.tau_c)]

    if q.startswith("ml_"):
        build = (
            ml_mod.gaussian_ml_povm
            if prior.kind == priors_mod.GAUSSIAN
            else ml_mod.uniform_ml_povm
        )
        povm = build(prior, scenario.tau_c, scenario.tau_f_gamma)
        if q == "ml_cost":
            cost = (
                ml_mod.gaussian_cost_max(povm)
                if prior.kind == priors_mod.GAUSSIAN
                else ml_mod.uniform_cost_max(povm)
            )
            return [value, cost]
        if q == "ml_avg_estimate":
            g = value * prior.g0 if spec.axis == "g_over_g0" else prior.g0
            return [value, ml_mod.ml_average_estimate(povm, g, scenario.tau_f_gamma)]
        g = value * prior.g0
        rep = bounds_mod.cr_bound_ml(povm, g, scenario.tau_f_gamma)
        return [value, rep.mse, rep.lower_bound]

    # mmse_* quantities share the estimator at the pinned scenario
    result = _mmse_result(prior, scenario, fld)
    if q in ("mmse_cost", "mmse_eigenvalues"):
        return [value, result.estimates[0], result.estimates[1], result.c_min]
    g = value * prior.g0
    if q == "mmse_avg_estimate":
        return [
            value,
            result.estimates[0],
            result.estimates[1],
            result.c_min,
            mmse_mod.average_estimate(result, g, scenario, fld),
        ]
    rep = bounds_mod.cr_bound_mmse(result, g, prior, scenario, fld)
    return [
        value,
        result.estimates[0],
        result.estimates[1],
        result.c_min,
        mmse_mod.average_estimate(result, g, scenario, fld),
        rep.lower_bound,
        rep.mse,
    ]


_SWEEP_COLUMNS = {
    "mmse_eigenvalues": ["axis", "eig_lo", "eig_hi", "c_min"],
    "mmse_cost": ["axis", "eig_lo", "eig_hi", "c_min"],
    "mmse_avg_estimate": ["axis", "eig_lo", "eig_hi", "c_min", "avg_estimate"],
    "mmse_cr_bound": [
        "axis",
        "eig_lo",
        "eig_hi",
        "c_min",
        "avg_estimate",
        "cr_bound",
        "mse",
    ],
    "ml_cost": ["axis", "c_max"],
    "ml_avg_estimate": ["axis", "avg_estimate"],
    "ml_cr_bound": ["axis", "mse", "cr_bound"],
    "dissipative_cost": ["axis", "c_min"],
}


def run_sweep(spec: SweepSpec, threads: int = 1) -> Table:
    """Evaluate the configured quantity over the axis grid, in axis order."""
    values = np.linspace(spec.lo, spec.hi, spec.n_points)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda v: _sweep_row(spec, float(v)), values))
    else:
        rows = [_sweep_row(spec, float(v)) for v in values]
    return Table(columns=list(_SWEEP_COLUMNS[spec.quantity]), rows=rows)


# ---------------------------------------------------------------------------
# Recommended interaction time


def _golden_section(fun, lo: float, hi: float, tol: float) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def find_tau_star(
    prior: Prior,
    scenario: Scenario,
    field: Optional[FieldState] = None,
    coarse_points: int = 300,
    tol: float = 1e-4,
) -> float:
    """Interaction time minimizing the average minimum cost.

    Scans g0 tau_c in [0.05, 3] on a coarse grid, then refines the best
    bracket by golden-section search to ``tol`` (absolute, in units of
    1/g0).  The coarse scan guards against the oscillatory cost landscape at
    larger photon numbers.  Dissipative scenarios (kappa or in-cavity decay
    nonzero) are supported through the damped state family.
    """
    fld = field if field is not None else field_for(scenario)
    g0 = prior.g0

    if scenario.is_unitary_transit:
        def cost(tau: float) -> float:
            return _mmse_result(prior, _with(scenario, tau_c=tau), fld).c_min
    else:
        def cost(tau: float) -> float:
            return _dissipative_cost(prior, scenario, tau)

    taus = np.linspace(0.05 / g0, 3.0 / g0, coarse_points)
    costs = [cost(float(t)) for t in taus]
    best = int(np.argmin(costs))
    lo = taus[max(0, best - 1)]
    hi = taus[min(len(taus) - 1, best + 1)]
    return _golden_section(cost, float(lo), float(hi), tol / g0)


# ---------------------------------------------------------------------------
# Verification battery


def _check(name: str, passed: bool, **details) -> dict:
    entry = {"name": name, "passed": bool(passed)}
    entry.update({k: v for k, v in sorted(details.items())})
    return entry


def verify_all(seed: int = 0, corrupt_povm_scale: float = 1.0) -> dict:
    """Run the oracle and invariant suite; returns a machine-readable report.

    Deterministic for a fixed seed (byte-identical serialized report).
    Informational comparisons (closed-form variants that are reported rather
    than asserted) are emitted as notes and never fail the run.

    ``corrupt_povm_scale`` inflates the POVM traceless component before the
    positivity audit; values above one are a smoke test that must make the
    audit (and hence the run) fail.
    """
    checks = []
    notes = []
    gauss = Prior.gaussian(1.0, 1.0)
    unif = Prior.uniform(1.0, 1.0)
    vac = FieldState.vacuum()

    # quadrature reproduces the moments of both priors
    for prior in (gauss, unif):
        rule = priors_mod.quadrature(prior, 256)
        z = rule.expect(prior, np.ones_like(rule.nodes))
        m1 = rule.expect(prior, rule.nodes)
        m2 = rule.expect(prior, (rule.nodes - prior.g0) ** 2)
        err = max(abs(z - 1.0), abs(m1 - prior.g0), abs(m2 - prior.sigma**2))
        checks.append(_check(f"quadrature_moments_{prior.kind}", err < 1e-10, error=err))

    # closed-form moment entries against quadrature
    rng = np.random.Generator(np.random.Philox(key=seed))
    worst = 0.0
    for _ in range(25):
        g0 = rng.uniform(0.5, 2.0)
        sig = rng.uniform(0.3, 1.5) * g0
        tc = rng.uniform(0.05, 4.0) / g0
        u = rng.uniform(0.0, 2.0)
        for prior in (Prior.gaussian(g0, sig), Prior.uniform(g0, sig)):
            sc = Scenario(tau_c=tc, tau_f_gamma=u)
            num = mmse_mod.gamma_moments(prior, sc, vac)
            ref = mmse_mod.closed_form_gammas(prior, tc, u)
            worst = max(
                worst,
                abs(num.gamma0.ee - ref.gamma0.ee),
                abs(num.gamma1.ee - ref.gamma1.ee),
                abs(num.gamma2.ee - ref.gamma2.ee),
            )
    checks.append(_check("moments_closed_vs_quadrature", worst < 1e-9, error=worst))

    # anchors of the resonant vacuum Gaussian analysis
    res_half = mmse_mod.mmse_estimator(
        mmse_mod.closed_form_gammas(gauss, math.pi / 2.0, 0.0)
    )
    err = max(
        abs(res_half.estimates[0] - 1.0),
        abs(res_half.estimates[1] - 1.0),
        abs(res_half.c_min - 1.0),
    )
    checks.append(_check("anchor_half_period", err < 1e-12, error=err))

    res_q = mmse_mod.mmse_estimator(
        mmse_mod.closed_form_gammas(gauss, math.pi / 4.0, 0.0)
    )
    shift = (math.pi / 2.0) * math.exp(-math.pi**2 / 8.0)
    cost_ref = 1.0 - (math.pi**2 / 4.0) * math.exp(-math.pi**2 / 4.0)
    err = max(
        abs(res_q.estimates[0] - (1.0 - shift)),
        abs(res_q.estimates[1] - (1.0 + shift)),
        abs(res_q.c_min - cost_ref),
    )
    checks.append(_check("anchor_quarter_period", err < 1e-12, error=err))

    # POVM validity and the corrupted-constant smoke test
    for prior, build in ((gauss, ml_mod.gaussian_ml_povm), (unif, ml_mod.uniform_ml_povm)):
        povm = build(prior, math.pi / 4.0, 0.0)
        tot_i, tot_z = povm.completeness()
        ok = abs(tot_i - 1.0) < 1e-9 and abs(tot_z) < 1e-9
        audit = ml_mod.interval_audit(
            povm, n_intervals=2000, seed=seed, scale=corrupt_povm_scale
        )
        inflated = ml_mod.interval_audit(povm, n_intervals=2000, seed=seed, scale=1.05)
        checks.append(
            _check(
                f"povm_validity_{prior.kind}",
                ok and audit.passed,
                completeness_error=abs(tot_i - 1.0),
                worst_interval=audit.worst_low,
            )
        )
        checks.append(
            _check(
                f"povm_audit_detects_inflation_{prior.kind}",
                not inflated.passed,
                violations=inflated.n_violations,
            )
        )

    # likelihood special case, uniform prior
    sp_prior = Prior.uniform(1.0, 1.0 / math.sqrt(3.0))
    sp_tc = math.pi / 4.0
    c_num = ml_mod.uniform_cmax(sp_prior, sp_tc)
    povm_sp = ml_mod.uniform_ml_povm(sp_prior, sp_tc, 0.0)
    cost_sp = ml_mod.uniform_cost_max(povm_sp)
    err = max(abs(c_num - 2.0 * sp_tc / math.pi), abs(cost_sp - 0.75))
    checks.append(_check("ml_uniform_special_case", err < 1e-6, error=err))

    # Gaussian likelihood cost: closed form against direct quadrature
    worst = 0.0
    for tc in (0.3, math.pi / 4.0, 1.1, 2.0):
        povm = ml_mod.gaussian_ml_povm(gauss, tc, 0.3)
        worst = max(
            worst,
            abs(ml_mod.gaussian_cost_max(povm) - ml_mod.average_cost_quadrature(povm)),
        )
    checks.append(_check("ml_gaussian_cost_quadrature", worst < 1e-8, error=worst))

    # bound constants: quadrature against the error-function evaluation
    worst = 0.0
    alt_gap = 0.0
    for (g0, sig, tc) in ((1.0, 1.0, math.pi / 4.0), (1.0, 0.5, 0.9), (2.0, 0.7, 0.33)):
        p = Prior.gaussian(g0, sig)
        c1q, c2q = ml_mod.gaussian_bound_constants(p, tc)
        c1e, c2e = ml_mod.gaussian_bound_constants_erf(p, tc)
        worst = max(worst, abs(c1q - c1e), abs(c2q - c2e))
        c1a, c2a = ml_mod._gaussian_bound_constants_erf_alt(p, tc)
        alt_gap = max(alt_gap, abs(c1q - c1a), abs(c2q - c2a))
    checks.append(_check("ml_bound_constants_erf", worst < 1e-8, error=worst))
    notes.append(
        "real-part erf combination for (c1,c2) deviates from the defining "
        f"integrals by up to {alt_gap:.3e}; reported, not asserted"
    )

    # accuracy bounds hold for every strategy/prior pair
    violations = 0
    worst_gap = 0.0
    for prior in (gauss, unif):
        sc = Scenario(tau_c=math.pi / 4.0, tau_f_gamma=0.2)
        result = _mmse_result(prior, sc, vac)
        build = (
            ml_mod.gaussian_ml_povm
            if prior.kind == priors_mod.GAUSSIAN
            else ml_mod.uniform_ml_povm
        )
        povm = build(prior, sc.tau_c, sc.tau_f_gamma)
        for g in np.linspace(0.2, 1.8, 25):
            rep_m = bounds_mod.cr_bound_mmse(result, float(g), prior, sc, vac)
            rep_l = bounds_mod.cr_bound_ml(povm, float(g), sc.tau_f_gamma)
            for rep in (rep_m, rep_l):
                gap = rep.mse - rep.lower_bound
                worst_gap = min(worst_gap, gap)
                if gap < -1e-9:
                    violations += 1
    checks.append(
        _check("cr_inequality_grid", violations == 0, worst_gap=worst_gap)
    )

    # Monte-Carlo concordance, deterministic under the seed
    z_max = 0.0
    for tc in (math.pi / 4.0, 0.6, 1.0):
        sc = Scenario(tau_c=tc)
        result = _mmse_result(gauss, sc, vac)
        rep = oracle_mod.mc_quadratic_cost(result, gauss, sc, vac, 10**5, seed)
        rep2 = oracle_mod.mc_quadratic_cost(result, gauss, sc, vac, 10**5, seed)
        if rep != rep2:
            checks.append(_check("mc_determinism", False))
            break
        z_max = max(z_max, rep.z_score)
    else:
        checks.append(_check("mc_determinism", True))
    checks.append(_check("mc_quadratic_cost_z", z_max < 4.0, z_max=z_max))

    z_max = 0.0
    for g in (0.7, 1.0, 1.3):
        povm = ml_mod.gaussian_ml_povm(gauss, math.pi / 4.0, 0.0)
        rep = oracle_mod.mc_estimate_distribution(
            povm, g, Scenario(tau_c=math.pi / 4.0), 10**5, seed
        )
        z_max = max(z_max, rep.z_score)
    checks.append(_check("mc_ml_estimate_z", z_max < 4.0, z_max=z_max))

    # dissipation-free limit agrees with the unitary path
    worst = 0.0
    for gt in np.linspace(0.0, 10.0, 41):
        pop = dissipative_state(1.0, float(gt), 0.0, 0.0).excited_population
        worst = max(worst, abs(pop - math.cos(gt) ** 2))
    checks.append(_check("dissipative_zero_rate_limit", worst < 1e-10, error=worst))

    # informational: mean-estimate closed forms (derived vs display variant)
    povm = ml_mod.gaussian_ml_povm(gauss, math.pi / 4.0, 0.0)
    quad_mean = ml_mod.ml_average_estimate(povm, 1.0, 0.0)
    derived, alt = ml_mod.gaussian_average_estimate_closed_forms(povm, 1.0, 0.0)
    checks.append(
        _check(
            "ml_mean_estimate_closed_form",
            abs(quad_mean - derived) < 1e-8,
            error=abs(quad_mean - derived),
        )
    )
    notes.append(
        "display variant of the mean-estimate closed form deviates from "
        f"quadrature by {abs(quad_mean - alt):.3e} at the reference point; "
        "reported, not asserted"
    )

    return {
        "seed": seed,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "notes": notes,
    }


# ---------------------------------------------------------------------------
# Config handling and output


_DEFAULTS = {
    "prior": {"kind": "gaussian", "sigma_over_g0": "1.0"},
    "scenario": {
        "g0_tau_c": "0.6",
        "gamma_tau_f": "0.0",
        "delta_over_g0": "0.0",
        "alpha_abs": "0.0",
        "alpha_phase": "0.0",
        "kappa_over_g0": "0.0",
        "gamma_over_g0": "0.0",
        "fock_cutoff": "auto",
        "g_over_g0": "1.0",
    },
}


def load_config(path: Optional[str]) -> dict:
    """Flat key-value sections; unknown values raise :class:`ConfigError`."""
    parser = configparser.ConfigParser()
    parser.read_dict(_DEFAULTS)
    if path is not None:
        read = parser.read(path)
        if not read:
            raise ConfigError(f"cannot read config file {path!r}")

    try:
        prior_kind = parser.get("prior", "kind").strip().lower()
        if prior_kind not in (priors_mod.GAUSSIAN, priors_mod.UNIFORM):
            raise ConfigError(f"unknown prior kind {prior_kind!r}")
        sigma = parser.getfloat("prior", "sigma_over_g0")
        cutoff_raw = parser.get("scenario", "fock_cutoff").strip().lower()
        cutoff = None if cutoff_raw in ("auto", "") else int(cutoff_raw)
        alpha = parser.getfloat("scenario", "alpha_abs") * complex(
            math.cos(parser.getfloat("scenario", "alpha_phase")),
            math.sin(parser.getfloat("scenario", "alpha_phase")),
        )
        scenario = Scenario(
            tau_c=parser.getfloat("scenario", "g0_tau_c"),
            tau_f_gamma=parser.getfloat("scenario", "gamma_tau_f"),
            delta=parser.getfloat("scenario", "delta_over_g0"),
            alpha=alpha,
            kappa=parser.getfloat("scenario", "kappa_over_g0"),
            gamma_cav=parser.getfloat("scenario", "gamma_over_g0"),
            fock_cutoff=cutoff,
        )
        cfg = {
            "prior": Prior(prior_kind, 1.0, sigma),
            "scenario": scenario,
            "g": parser.getfloat("scenario", "g_over_g0"),
        }
        if parser.has_section("sweep"):
            cfg["sweep"] = SweepSpec(
                quantity=parser.get("sweep", "quantity").strip(),
                axis=parser.get("sweep", "axis").strip(),
                lo=parser.getfloat("sweep", "lo"),
                hi=parser.getfloat("sweep", "hi"),
                n_points=parser.getint("sweep", "n_points"),
                prior=cfg["prior"],
                scenario=scenario,
            )
        return cfg
    except (configparser.Error, ValueError, UnsupportedCombination) as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.16e}"
    return str(x)


def write_table(table: Table, fmt: str, out, config_echo: Optional[dict] = None):
    if fmt == "csv":
        out.write(",".join(table.columns) + "\n")
        for row in table.rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        payload = {"columns": table.columns, "rows": table.rows}
        if config_echo is not None:
            payload["config"] = config_echo
        json.dump(payload, out, sort_keys=True, indent=2, default=str)
        out.write("\n")


def _config_echo(cfg: dict) -> dict:
    scenario = cfg["scenario"]
    echo = {
        "prior": {"kind": cfg["prior"].kind, "sigma_over_g0": cfg["prior"].sigma},
        "scenario": {
            "g0_tau_c": scenario.tau_c,
            "gamma_tau_f": scenario.tau_f_gamma,
            "delta_over_g0": scenario.delta,
            "alpha_abs": abs(scenario.alpha),
            "alpha_phase": float(np.angle(scenario.alpha)) if scenario.alpha else 0.0,
            "kappa_over_g0": scenario.kappa,
            "gamma_over_g0": scenario.gamma_cav,
            "fock_cutoff": scenario.fock_cutoff if scenario.fock_cutoff is not None else "auto",
        },
    }
    if "sweep" in cfg:
        spec = cfg["sweep"]
        echo["sweep"] = {
            "quantity": spec.quantity,
            "axis": spec.axis,
            "lo": spec.lo,
            "hi": spec.hi,
            "n_points": spec.n_points,
        }
    return echo


def _cmd_state(cfg: dict, args) -> Table:
    scenario = cfg["scenario"]
    g = cfg["g"] * cfg["prior"].g0
    if scenario.is_unitary_transit:
        rho = reduced_state(g, scenario, field_for(scenario))
    else:
        rho = dissipative_state(g, scenario.tau_c, scenario.gamma_cav, scenario.kappa)
    m = rho.matrix
    table = Table(columns=["g_over_g0", "rho_ee", "rho_gg", "rho_eg_re", "rho_eg_im"])
    table.rows.append([cfg["g"], m.ee, m.gg, m.eg.real, m.eg.imag])
    return table


def _cmd_mmse(cfg: dict, args) -> Table:
    prior, scenario = cfg["prior"], cfg["scenario"]
    fld = field_for(scenario)
    result = _mmse_result(prior, scenario, fld)
    g = cfg["g"] * prior.g0
    rep = bounds_mod.cr_bound_mmse(result, g, prior, scenario, fld)
    table = Table(
        columns=[
            "eig_lo",
            "eig_hi",
            "c_min",
            "avg_estimate",
            "cr_bound",
            "mse",
        ]
    )
    table.rows.append(
        [
            result.estimates[0],
            result.estimates[1],
            result.c_min,
            mmse_mod.average_estimate(result, g, scenario, fld),
            rep.lower_bound,
            rep.mse,
        ]
    )
    return table


def _cmd_ml(cfg: dict, args) -> Table:
    prior, scenario = cfg["prior"], cfg["scenario"]
    if prior.kind == priors_mod.GAUSSIAN:
        povm = ml_mod.gaussian_ml_povm(prior, scenario.tau_c, scenario.tau_f_gamma)
        cost = ml_mod.gaussian_cost_max(povm)
    else:
        povm = ml_mod.uniform_ml_povm(prior, scenario.tau_c, scenario.tau_f_gamma)
        cost = ml_mod.uniform_cost_max(povm)
    g = cfg["g"] * prior.g0
    table = Table(columns=["c_max", "cost_max", "avg_estimate"])
    table.rows.append(
        [povm.c_max, cost, ml_mod.ml_average_estimate(povm, g, scenario.tau_f_gamma)]
    )
    return table


def _cmd_tau_star(cfg: dict, args) -> Table:
    prior, scenario = cfg["prior"], cfg["scenario"]
    tau = find_tau_star(prior, scenario)
    if scenario.is_unitary_transit:
        c_at = _mmse_result(prior, _with(scenario, tau_c=tau), field_for(scenario)).c_min
    else:
        c_at = _dissipative_cost(prior, scenario, tau)
    table = Table(columns=["g0_tau_star", "c_min_at_tau_star"])
    table.rows.append([tau * prior.g0, c_at])
    return table


def main(argv: Optional[list] = None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="INI config file")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0, help="seed for verify")
    common.add_argument("--threads", type=int, default=1, help="sweep worker threads")
    parser = argparse.ArgumentParser(
        prog="cavbayes",
        description="Bayesian coupling-strength estimation for a driven qubit-cavity transit",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("state", "mmse", "ml", "sweep", "tau-star", "verify"):
        sub.add_parser(name, parents=[common])
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "verify":
            report = verify_all(args.seed)
            text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
            if args.out:
                with open(args.out, "w", newline="\n") as fh:
                    fh.write(text)
            for c in report["checks"]:
                print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}")
            return 0 if report["passed"] else 2

        if args.command == "sweep":
            if "sweep" not in cfg:
                print("config error: sweep section missing", file=sys.stderr)
                return 1
            table = run_sweep(cfg["sweep"], threads=max(1, args.threads))
        elif args.command == "state":
            table = _cmd_state(cfg, args)
        elif args.command == "mmse":
            table = _cmd_mmse(cfg, args)
        elif args.command == "ml":
            table = _cmd_ml(cfg, args)
        else:  # tau-star
            table = _cmd_tau_star(cfg, args)
    except UnsupportedCombination as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (DegenerateGamma0, SingularSLD, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except CavbayesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    echo = _config_echo(cfg)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            write_table(table, args.format, fh, echo)
    else:
        write_table(table, args.format, sys.stdout, echo)
    return 0


if __name__ == "__main__":
    sys.exit(main())

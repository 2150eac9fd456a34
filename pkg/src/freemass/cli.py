"""Command-line front end.

Usage::

    freemass <experiment> --config run.yaml [--out DIR] [--seed N] [--trials N]

Experiments: ``scheme-check``, ``sql-sweep``, ``rp-montecarlo``,
``oracle-validate``, ``variance-curves``.  The output directory defaults to
``$FREEMASS_OUT`` and then to ``./freemass-out``.

The configuration is a YAML mapping; unknown keys are errors.  Defaults::

    seed: 0
    n_trials: 10000
    n_batches: 20
    t_f: 1.0            # or "t_M": minimum-variance time of the probe/target
    n_points: 4096      # grid points for grid-backed runs
    n_outcomes: 2048
    max_trial_rows: 1000
    units: {hbar: 1, mass: 1, omega: 1}
    prior: {kind: muw, q0: 0, k0: 0, delta_sq: 1}
    scheme: {kind: von-neumann, probe: {kind: muw, delta_sq: 0.5}}

Scheme kinds and their keys:

* ``von-neumann``: ``probe``
* ``three-step``: ``probe``, ``zeta_z`` and optionally ``zeta_plus``, ``zeta_minus``
  (both omitted selects the SQL-breaching family)
* ``gordon-louisell``: ``target``
* ``rp-small-q`` / ``rp-full``: ``alpha_mag``, ``r``, ``l_tau``, ``feedback_gain``, ``presqueeze``

States are ``{kind: muw, q0, k0, delta_sq}`` or ``{kind: tcs, xi}`` /
``{kind: tcs, mu, nu}`` with optional ``alpha``; complex numbers are written
as ``[re, im]``.  Probes and targets must be centred.

Exit codes: 0 success, 1 numerical-validation failure, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import csv
import difflib
import hashlib
import json
import math
import os
import platform
import sys
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from . import experiments as ex
from . import grid_oracle as go
from . import instruments as ins
from .exceptions import ConfigError, FreemassError, InvalidSchemeError
from .gaussian_states import GaussianState, PhysicalUnits, free_evolve, make_muw, make_tcs, min_variance_point, squeezed_tcs_params
from .lie_algebra import ThreeStepParams, is_plausible, onc_satisfied

__all__ = ["RunConfig", "parse_config", "build_scheme", "build_state", "run", "main", "EXPERIMENTS"]

EXPERIMENTS = ("scheme-check", "sql-sweep", "rp-montecarlo", "oracle-validate", "variance-curves")
ENV_OUT = "FREEMASS_OUT"

_TOP_KEYS = {
    "experiment", "seed", "n_trials", "n_batches", "t_f", "n_points", "n_outcomes", "max_trial_rows",
    "units", "scheme", "second_scheme", "prior", "sweep", "variance_curves", "oracle",
}
_UNIT_KEYS = {"hbar", "mass", "omega"}
_STATE_KEYS = {"muw": {"kind", "q0", "k0", "delta_sq"}, "tcs": {"kind", "xi", "mu", "nu", "alpha"}}
_RP_KEYS = {"kind", "alpha_mag", "r", "l_tau", "feedback_gain", "presqueeze"}
_SCHEME_KEYS = {
    "von-neumann": {"kind", "probe"},
    "three-step": {"kind", "probe", "zeta_z", "zeta_plus", "zeta_minus"},
    "gordon-louisell": {"kind", "target"},
    "rp-small-q": _RP_KEYS,
    "rp-full": _RP_KEYS,
}
_SECTION_KEYS = {
    "sweep": {"zeta_z"},
    "variance_curves": {"t_max", "n_t"},
    "oracle": {"n_states", "n_outcomes_checked"},
}
_DEFAULTS = {
    "seed": 0,
    "n_trials": 10_000,
    "n_batches": 20,
    "t_f": 1.0,
    "n_points": go.DEFAULT_POINTS,
    "n_outcomes": go.DEFAULT_OUTCOMES,
    "max_trial_rows": 1000,
    "units": {"hbar": 1.0, "mass": 1.0, "omega": 1.0},
    "prior": {"kind": "muw", "q0": 0.0, "k0": 0.0, "delta_sq": 1.0},
    "scheme": {"kind": "von-neumann", "probe": {"kind": "muw", "delta_sq": 0.5}},
    "sweep": {"zeta_z": [0.5, 1.0, 2.0, 4.0]},
    "variance_curves": {"t_max": 10.0, "n_t": 201},
    "oracle": {"n_states": 20, "n_outcomes_checked": 3},
}


@dataclass(frozen=True)
class RunConfig:
    experiment: str | None
    seed: int
    n_trials: int
    n_batches: int
    t_f: object
    n_points: int
    n_outcomes: int
    max_trial_rows: int
    units: PhysicalUnits
    scheme: dict
    prior: dict
    second_scheme: dict | None
    sweep: dict
    variance_curves: dict
    oracle: dict
    raw: dict = field(repr=False, default_factory=dict)


def _check_keys(section: dict, allowed: set, path: str):
    if not isinstance(section, dict):
        raise ConfigError(f"{path or 'config'}: expected a mapping, got {type(section).__name__}")
    for key in section:
        if key not in allowed:
            hint = difflib.get_close_matches(str(key), sorted(allowed), n=1)
            suggestion = f"; did you mean '{hint[0]}'?" if hint else ""
            raise ConfigError(f"unknown key '{path}{key}'{suggestion}")


def _number(section: dict, key: str, path: str, *, positive=False, nonneg=False, default=None):
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"'{path}{key}' must be a finite number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"'{path}{key}' must be > 0, got {value!r}")
    if nonneg and value < 0:
        raise ConfigError(f"'{path}{key}' must be >= 0, got {value!r}")
    return float(value)


def _integer(section: dict, key: str, *, minimum: int, default=None) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"'{key}' must be an integer >= {minimum}, got {value!r}")
    return value


def _complex(value, key: str, path: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ConfigError(f"'{path}{key}' must be a number or [re, im], got {value!r}")


def _kind(section: dict, table: dict, path: str) -> str:
    kind = section.get("kind")
    if kind not in table:
        hint = difflib.get_close_matches(str(kind), sorted(table), n=1)
        suggestion = f"; did you mean '{hint[0]}'?" if hint else ""
        raise ConfigError(f"'{path}kind' must be one of {sorted(table)}, got {kind!r}{suggestion}")
    _check_keys(section, table[kind], path)
    return kind


def build_state(spec: dict, units: PhysicalUnits, path: str = "prior.") -> GaussianState:
    kind = _kind(spec, _STATE_KEYS, path)
    if kind == "muw":
        q0 = _number(spec, "q0", path, default=0.0)
        k0 = _number(spec, "k0", path, default=0.0)
        return make_muw(q0, k0, _number(spec, "delta_sq", path, positive=True, default=1.0), units)
    alpha = _complex(spec.get("alpha", 0.0), "alpha", path)
    if "xi" in spec:
        if "mu" in spec or "nu" in spec:
            raise ConfigError(f"'{path}': give either xi or (mu, nu), not both")
        mu, nu = squeezed_tcs_params(_number(spec, "xi", path))
    else:
        mu = _complex(spec.get("mu", 1.0), "mu", path)
        nu = _complex(spec.get("nu", 0.0), "nu", path)
    try:
        return make_tcs(mu, nu, alpha, units)
    except ValueError as err:
        raise ConfigError(f"'{path}': {err}") from None


def build_scheme(spec: dict, units: PhysicalUnits, path: str = "scheme.", *, n_points=go.DEFAULT_POINTS,
                 n_outcomes=go.DEFAULT_OUTCOMES):
    kind = _kind(spec, _SCHEME_KEYS, path)
    try:
        if kind == "von-neumann":
            return ins.VonNeumann(build_state(_required(spec, "probe", path), units, path + "probe."))
        if kind == "three-step":
            probe = build_state(_required(spec, "probe", path), units, path + "probe.")
            zeta_z = _number(spec, "zeta_z", path, default=None) if "zeta_z" in spec else None
            if zeta_z is None:
                raise ConfigError(f"missing key '{path}zeta_z'")
            if "zeta_plus" in spec or "zeta_minus" in spec:
                zp = _number(spec, "zeta_plus", path, default=None)
                zm = _number(spec, "zeta_minus", path, default=None)
                return ins.ThreeStep(ThreeStepParams(zp, zm, zeta_z), probe)
            if not zeta_z > 0:
                raise ConfigError(f"'{path}zeta_z' must be > 0 for the breaching family, got {zeta_z!r}")
            return ins.ThreeStep.breaching(zeta_z, probe)
        if kind == "gordon-louisell":
            return ins.GordonLouisell(build_state(_required(spec, "target", path), units, path + "target."))
        kwargs = dict(
            alpha_mag=_number(spec, "alpha_mag", path, positive=True, default=None),
            r=_number(spec, "r", path, default=0.0),
            l_tau=_number(spec, "l_tau", path, positive=True, default=1.0),
            feedback_gain=_number(spec, "feedback_gain", path, default=1.0),
            presqueeze=_number(spec, "presqueeze", path, default=0.0),
        )
        if kind == "rp-small-q":
            return ins.RadiationPressureSmallQ(**kwargs)
        return ins.RadiationPressureFull(**kwargs, grid_points=n_points, n_outcomes=n_outcomes)
    except InvalidSchemeError as err:
        raise ConfigError(f"'{path[:-1]}': {err}") from None


def _required(spec: dict, key: str, path: str):
    if key not in spec:
        raise ConfigError(f"missing key '{path}{key}'")
    return spec[key]


def _merge(defaults: dict, given: dict) -> dict:
    out = dict(defaults)
    out.update(given)
    return out


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run configuration.

    Raises
    ------
    ConfigError
        On malformed YAML (with line and column), unknown keys (with a
        suggestion) or invalid values (naming the key).
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as err:
        mark = getattr(err, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark is not None else ""
        raise ConfigError(f"could not parse configuration{where}: {getattr(err, 'problem', err)}") from None
    data = {} if data is None else data
    _check_keys(data, _TOP_KEYS, "")
    experiment = data.get("experiment")
    if experiment is not None and experiment not in EXPERIMENTS:
        raise ConfigError(f"'experiment' must be one of {list(EXPERIMENTS)}, got {experiment!r}")

    units_spec = _merge(_DEFAULTS["units"], data.get("units") or {})
    _check_keys(units_spec, _UNIT_KEYS, "units.")
    units = PhysicalUnits(*(_number(units_spec, k, "units.", positive=True) for k in ("hbar", "mass", "omega")))

    t_f = data.get("t_f", _DEFAULTS["t_f"])
    if t_f != "t_M":
        t_f = _number({"t_f": t_f}, "t_f", "", positive=True)

    sections = {}
    for name in ("sweep", "variance_curves", "oracle"):
        sec = data.get(name) or {}
        _check_keys(sec, _SECTION_KEYS[name], name + ".")
        sections[name] = _merge(_DEFAULTS[name], sec)
    zs = sections["sweep"]["zeta_z"]
    if not isinstance(zs, list) or not zs:
        raise ConfigError("'sweep.zeta_z' must be a non-empty list")
    sections["sweep"]["zeta_z"] = [_number({"zeta_z": z}, "zeta_z", "sweep.", positive=True) for z in zs]
    vc = sections["variance_curves"]
    _number(vc, "t_max", "variance_curves.", positive=True)
    _integer(vc, "n_t", minimum=2)
    _integer(sections["oracle"], "n_states", minimum=1)
    _integer(sections["oracle"], "n_outcomes_checked", minimum=1)

    n_points = _integer(data, "n_points", minimum=256, default=_DEFAULTS["n_points"])
    if n_points & (n_points - 1):
        raise ConfigError(f"'n_points' must be a power of two, got {n_points}")
    cfg = RunConfig(
        experiment=experiment,
        seed=_integer(data, "seed", minimum=0, default=_DEFAULTS["seed"]),
        n_trials=_integer(data, "n_trials", minimum=1, default=_DEFAULTS["n_trials"]),
        n_batches=_integer(data, "n_batches", minimum=1, default=_DEFAULTS["n_batches"]),
        t_f=t_f,
        n_points=n_points,
        n_outcomes=_integer(data, "n_outcomes", minimum=16, default=_DEFAULTS["n_outcomes"]),
        max_trial_rows=_integer(data, "max_trial_rows", minimum=0, default=_DEFAULTS["max_trial_rows"]),
        units=units,
        scheme=data.get("scheme", _DEFAULTS["scheme"]),
        prior=data.get("prior", _DEFAULTS["prior"]),
        second_scheme=data.get("second_scheme"),
        sweep=sections["sweep"],
        variance_curves=vc,
        oracle=sections["oracle"],
        raw=data,
    )
    # build once so that every parameter is validated up front
    _objects(cfg)
    return cfg


def _objects(cfg: RunConfig):
    kw = dict(n_points=cfg.n_points, n_outcomes=cfg.n_outcomes)
    scheme = build_scheme(cfg.scheme, cfg.units, **kw)
    prior = build_state(cfg.prior, cfg.units)
    second = None if cfg.second_scheme is None else build_scheme(cfg.second_scheme, cfg.units, "second_scheme.", **kw)
    return scheme, prior, second, _resolve_t_f(cfg, scheme)


def _resolve_t_f(cfg: RunConfig, scheme) -> float:
    if cfg.t_f != "t_M":
        return cfg.t_f
    reference = getattr(scheme, "probe", None) or getattr(scheme, "target", None)
    if reference is None:
        raise ConfigError("t_f = 't_M' needs a scheme with a probe or target state")
    t_m, _ = min_variance_point(reference, cfg.units)
    if not t_m > 0:
        raise ConfigError("t_f = 't_M' needs a contractive probe or target state")
    return t_m


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_table(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


_TRIAL_HEADER = ["x1", "mean_q", "var_q", "mean_p", "var_p", "corr", "h_x", "delta_sq_x", "precision_x",
                 "var_evolved", "contractive"]


def _trial_rows(records, limit, extra=()):
    for rec in records[:limit]:
        m = rec.posterior_moments
        yield [rec.x1, m.mean_q, m.var_q, m.mean_p, m.var_p, m.corr, rec.h_x, rec.delta_sq_x, rec.precision_x,
               rec.var_evolved, rec.contractive, *extra]


class _ValidationFailure(Exception):
    pass


def _run_scheme_check(cfg, out: Path):
    scheme, prior, _, _ = _objects(cfg)
    eps = ins.precision(scheme, prior)
    sig = ins.posterior_deviation(scheme, prior)
    dist = ins.outcome_distribution(scheme, prior)
    unb = ins.check_unbiasedness(scheme, [prior])
    _, var = ins.position_mean_var(prior if scheme.gaussian else ins.as_grid_state(scheme, prior))
    additivity = abs(dist.position_variance - (eps + var))
    abcd = getattr(scheme, "abcd", None)
    d = abcd.d.real if abcd is not None else math.nan
    plausible = is_plausible(abcd) if abcd is not None else False
    onc = onc_satisfied(abcd) if plausible else ""
    completeness = 0.0
    if not scheme.rank_one:
        q = np.linspace(prior.mean_position - 4 * prior.std_q, prior.mean_position + 4 * prior.std_q, 9)
        mean, std = scheme.conditional_outcome(q)
        x = np.linspace((mean - 10 * std).min(), (mean + 10 * std).max(), 20001)
        completeness = float(np.max(np.abs(go.completeness_grid(scheme, q, x) - 1)))
    header = ["scheme", "epsilon_sq", "sigma_sq", "outcome_mean", "outcome_variance", "total_uncertainty",
              "additivity_error", "pom_bias", "reduction_bias_max", "reduction_bias_mean", "d", "plausible",
              "onc_satisfied", "completeness_error", "seed"]
    row = [cfg.scheme["kind"], eps, sig, dist.position_mean, dist.position_variance, dist.position_variance,
           additivity, unb.pom_max_deviation, unb.reduction_max_deviation, unb.reduction_mean_deviation, d,
           plausible, onc, completeness, cfg.seed]
    _write_table(out / "scheme_check.csv", header, [row])
    tol = 1e-9 if scheme.gaussian else 1e-6
    if completeness > 1e-6 or (unb.pom_unbiased and additivity > tol * max(1.0, var)):
        raise _ValidationFailure(f"completeness error {completeness:.2e}, additivity error {additivity:.2e}")


def _repeated(cfg, scheme, prior, second, t_f):
    config = ex.RepeatedMeasurementConfig(scheme, prior, t_f, cfg.n_trials, cfg.seed, cfg.units, second, cfg.n_batches)
    return ex.run_repeated(config)


def _run_sql_sweep(cfg, out: Path):
    scheme, prior, second, t_f = _objects(cfg)
    if not isinstance(scheme, ins.ThreeStep):
        raise ConfigError("sql-sweep needs scheme.kind = three-step")
    header = ["zeta_z", "d", "epsilon_sq", "sigma_sq", "delta_sq_pred", "delta_sq_stderr", "sql", "violated",
              "onc_lhs", "onc_violated", "contractive_fraction", "t_f", "n_trials", "seed"]
    rows, trial_rows = [], []
    for z in cfg.sweep["zeta_z"]:
        sch = ins.ThreeStep.breaching(z, scheme.probe)
        records, rep = _repeated(cfg, sch, prior, second, t_f)
        rows.append([z, sch.abcd.d.real, ins.precision(sch, prior), rep.posterior_deviation,
                     rep.predictive_uncertainty, rep.predictive_stderr, rep.sql_value, rep.breaches_sql,
                     rep.avg_precision_evolved, rep.onc_violated, rep.contractive_fraction, t_f, cfg.n_trials, cfg.seed])
        trial_rows.extend(_trial_rows(records, cfg.max_trial_rows, (z, cfg.seed)))
    _write_table(out / "sql_sweep.csv", header, rows)
    if cfg.max_trial_rows:
        _write_table(out / "trials.csv", _TRIAL_HEADER + ["zeta_z", "seed"], trial_rows)


def _run_rp_montecarlo(cfg, out: Path):
    scheme, prior, second, t_f = _objects(cfg)
    if not isinstance(scheme, (ins.RadiationPressureSmallQ, ins.RadiationPressureFull)):
        raise ConfigError("rp-montecarlo needs scheme.kind = rp-small-q or rp-full")
    records, rep = _repeated(cfg, scheme, prior, second, t_f)
    header = ["alpha_mag", "r", "l_tau", "feedback_gain", "presqueeze", "contractive_fraction",
              "contractive_stderr", "delta_sq_pred", "delta_sq_stderr", "sql", "violated", "onc_lhs", "sigma_sq",
              "onc_violated", "t_f", "n_trials", "seed"]
    row = [scheme.alpha_mag, scheme.r, scheme.l_tau, scheme.feedback_gain, scheme.presqueeze,
           rep.contractive_fraction, rep.contractive_stderr, rep.predictive_uncertainty, rep.predictive_stderr,
           rep.sql_value, rep.breaches_sql, rep.avg_precision_evolved, rep.posterior_deviation, rep.onc_violated,
           t_f, cfg.n_trials, cfg.seed]
    _write_table(out / "rp_montecarlo.csv", header, [row])
    if cfg.max_trial_rows:
        _write_table(out / "trials.csv", _TRIAL_HEADER + ["seed"], _trial_rows(records, cfg.max_trial_rows, (cfg.seed,)))


def _random_states(prior: GaussianState, n: int, rng: np.random.Generator):
    """States of comparable width and position to ``prior``."""
    out = []
    for _ in range(n):
        v = prior.var_q * rng.uniform(0.5, 2.0)
        A = (1 + 1j * rng.uniform(-1, 1)) / (4 * v)
        q0 = prior.mean_position + 0.2 * math.sqrt(v) * rng.uniform(-1, 1)
        k0 = prior.mean_wavenumber + 0.2 * rng.uniform(-1, 1) / math.sqrt(v)
        out.append(GaussianState(A, q0, k0, 0.25 * math.log(2 * A.real / math.pi)))
    return out


def _run_oracle_validate(cfg, out: Path):
    scheme, prior, _, t_f = _objects(cfg)
    if not scheme.gaussian:
        raise ConfigError("oracle-validate compares closed forms; use a Gaussian-preserving scheme")
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for j, state in enumerate(_random_states(prior, cfg.oracle["n_states"], rng)):
        gs = go.discretize(state, n_points=cfg.n_points)
        rows.append(["discretize", j, "", go.l2_distance(gs, state)])
        rows.append(["free_evolve", j, "", go.l2_distance(go.free_evolve_grid(gs, t_f, cfg.units),
                                                          free_evolve(state, t_f, cfg.units))])
        dist = ins.outcome_distribution(scheme, state, validate=False)
        for x in dist.sample(rng, cfg.oracle["n_outcomes_checked"]):
            closed = ins.reduce(scheme, state, x, validate=False).posterior
            grid = ins.reduce(scheme, gs, x, validate=False).posterior
            rows.append(["reduce", j, x, go.l2_distance(grid, closed)])
    _write_table(out / "oracle_validate.csv", ["check", "state_index", "outcome", "l2_distance", "seed"],
                 [r + [cfg.seed] for r in rows])
    worst = max(r[3] for r in rows)
    summary = [[check, max(r[3] for r in rows if r[0] == check)] for check in ("discretize", "free_evolve", "reduce")]
    _write_table(out / "oracle_summary.csv", ["check", "max_l2_distance", "seed"], [s + [cfg.seed] for s in summary])
    if worst > 1e-6:
        raise _ValidationFailure(f"grid oracle disagreement {worst:.2e} exceeds 1e-6")


def _run_variance_curves(cfg, out: Path):
    _, prior, _, _ = _objects(cfg)
    vc = cfg.variance_curves
    t = np.linspace(0.0, vc["t_max"], vc["n_t"])
    table = ex.braginskii_vs_yuen(prior, t, cfg.units)
    cols = ["t", "yuen", "braginskii", "braginskii_bound", "sql", "robertson_floor"]
    _write_table(out / "variance_curves.csv", cols + ["seed"],
                 ([*(table[c][i] for c in cols), cfg.seed] for i in range(len(t))))


_RUNNERS = {
    "scheme-check": _run_scheme_check,
    "sql-sweep": _run_sql_sweep,
    "rp-montecarlo": _run_rp_montecarlo,
    "oracle-validate": _run_oracle_validate,
    "variance-curves": _run_variance_curves,
}


def _canonical(cfg: RunConfig, experiment: str) -> dict:
    return {"experiment": experiment, "seed": cfg.seed, "n_trials": cfg.n_trials, "config": cfg.raw}


def _write_manifest(out: Path, cfg: RunConfig, experiment: str, status: str):
    canon = _canonical(cfg, experiment)
    run_id = hashlib.sha256(json.dumps(canon, sort_keys=True, default=str).encode()).hexdigest()
    manifest = {
        "run_id": run_id,
        "experiment": experiment,
        "seed": cfg.seed,
        "n_trials": cfg.n_trials,
        "status": status,
        "config": cfg.raw,
        "versions": {
            "freemass": __version__,
            "numpy": np.__version__,
            "pyyaml": yaml.__version__,
            "python": platform.python_version(),
        },
        "created": datetime.now(timezone.utc).isoformat(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return run_id


def run(cfg: RunConfig, experiment: str, out_dir) -> int:
    """Execute ``experiment`` and write its artifacts; returns the exit status."""
    if cfg.experiment is not None and cfg.experiment != experiment:
        raise ConfigError(f"config is for experiment '{cfg.experiment}', not '{experiment}'")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        _RUNNERS[experiment](cfg, out)
    except _ValidationFailure as err:
        _write_manifest(out, cfg, experiment, f"validation-failed: {err}")
        print(f"freemass: validation failed: {err}", file=sys.stderr)
        return 1
    except ConfigError:
        raise
    except FreemassError as err:
        _write_manifest(out, cfg, experiment, f"numerical-error: {err}")
        print(f"freemass: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    _write_manifest(out, cfg, experiment, "ok")
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freemass", description="Repeated position measurements of a free mass.")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", required=True, help="YAML run configuration")
    p.add_argument("--out", help=f"output directory (default ${ENV_OUT} or ./freemass-out)")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--trials", type=int, help="override n_trials")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as err:
        print(f"freemass: cannot read config: {err}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text)
        overrides = {}
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be >= 0")
            overrides["seed"] = args.seed
        if args.trials is not None:
            if args.trials < 1:
                raise ConfigError("--trials must be >= 1")
            overrides["n_trials"] = args.trials
        if overrides:
            cfg = replace(cfg, **overrides)
        out = args.out or os.environ.get(ENV_OUT) or "freemass-out"
        return run(cfg, args.experiment, out)
    except ConfigError as err:
        print(f"freemass: config error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"freemass: I/O error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

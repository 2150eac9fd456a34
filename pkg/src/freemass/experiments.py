r"""Repeated position measurements of a free mass.

The protocol measures once with ``scheme``, lets the posterior evolve freely
for ``t_f`` and predicts the outcome of a second measurement by the mean
value :math:`h(x) = \mathrm{Tr}[\rho_x(t_f)\hat q]`.  The accuracy of that
prediction,

.. math::

    \Delta^2(t_f, \rho, x) = \int dx'\, [s x' - h(x)]^2\, p(x'|\rho_x(t_f)),

averaged over the first outcome, is the predictive uncertainty compared with
the standard quantum limit :math:`\hbar t_f/m`.  For an unbiased second
measurement it splits into the evolved precision plus the evolved posterior
variance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import grid_oracle as go
from . import instruments as ins
from .gaussian_states import NATURAL, GaussianState, Moments, PhysicalUnits, free_evolve, moments, variance_curve

__all__ = [
    "RepeatedMeasurementConfig",
    "TrialRecord",
    "SqlReport",
    "OncLedger",
    "Fraction",
    "run_repeated",
    "sql_value",
    "onc_ledger",
    "contractive_fraction_sweep",
    "braginskii_vs_yuen",
    "default_second_scheme",
]


def sql_value(t_f: float, units: PhysicalUnits = NATURAL) -> float:
    """Standard quantum limit ``hbar t_f / m``."""
    if not t_f > 0:
        raise ValueError(f"t_f must be positive, got {t_f!r}")
    return units.hbar * t_f / units.mass


def default_second_scheme(scheme):
    """The first scheme, except that the grid-backed radiation-pressure readout
    is replaced by its small-displacement form."""
    if isinstance(scheme, ins.RadiationPressureFull):
        return scheme.small_q()
    return scheme


@dataclass(frozen=True)
class RepeatedMeasurementConfig:
    scheme: object
    prior: object
    t_f: float
    n_trials: int = 10_000
    seed: int = 0
    units: PhysicalUnits = NATURAL
    second_scheme: object = None
    n_batches: int = 20

    def __post_init__(self):
        if not (self.t_f > 0 and math.isfinite(self.t_f)):
            raise ValueError(f"t_f must be positive, got {self.t_f!r}")
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials!r}")
        if self.n_batches < 1:
            raise ValueError(f"n_batches must be >= 1, got {self.n_batches!r}")
        if not isinstance(self.prior, (GaussianState, go.GridState)):
            raise TypeError("prior must be a GaussianState or GridState")

    @property
    def second(self):
        return self.second_scheme if self.second_scheme is not None else default_second_scheme(self.scheme)


@dataclass(frozen=True)
class TrialRecord:
    x1: float
    posterior_moments: Moments
    h_x: float
    delta_sq_x: float
    contractive: bool
    precision_x: float
    var_evolved: float


@dataclass(frozen=True)
class SqlReport:
    predictive_uncertainty: float
    predictive_stderr: float
    sql_value: float
    avg_precision_evolved: float
    avg_precision_stderr: float
    avg_var_evolved: float
    avg_var_stderr: float
    posterior_deviation: float
    onc_violated: bool
    contractive_fraction: float
    contractive_stderr: float
    n_trials: int
    n_batches: int
    t_f: float
    seed: int

    @property
    def breaches_sql(self) -> bool:
        return self.predictive_uncertainty < self.sql_value

    @property
    def margin_in_stderr(self) -> float:
        """``(sql - predictive) / stderr``; infinite when the estimate has no spread."""
        gap = self.sql_value - self.predictive_uncertainty
        if self.predictive_stderr == 0:
            return math.copysign(math.inf, gap) if gap else 0.0
        return gap / self.predictive_stderr


class OncLedger(NamedTuple):
    lhs: float
    rhs: float
    violated: bool


class Fraction(NamedTuple):
    value: float
    stderr: float


def _batch_stats(values, batches):
    """Grand mean and batch-means standard error."""
    values = np.asarray(values, dtype=float)
    means = np.array([values[idx].mean() for idx in batches])
    mean = float(values.mean())
    if len(means) < 2:
        return mean, math.nan
    return mean, float(means.std(ddof=1) / math.sqrt(len(means)))


def _batches(n_trials: int, n_batches: int):
    return np.array_split(np.arange(n_trials), min(n_batches, n_trials))


def _prepare_prior(scheme, prior):
    if isinstance(prior, GaussianState) and not scheme.gaussian:
        return ins.as_grid_state(scheme, prior)
    return prior


def _evolve(state, t, units):
    if isinstance(state, GaussianState):
        return free_evolve(state, t, units)
    return go.free_evolve_grid(state, t, units)


def _second_measurement(second, evolved):
    mean, var = ins.outcome_moments(second, evolved, validate=False)
    h = ins.position_mean_var(evolved)[0]
    delta_sq = var + (mean - h) ** 2
    return h, delta_sq, ins.precision(second, evolved, validate=False)


def _trial(config, prior, x):
    post = ins.reduce(config.scheme, prior, x, validate=False).posterior
    mom = ins.posterior_moments(post, config.units)
    evolved = _evolve(post, config.t_f, config.units)
    h, delta_sq, eps = _second_measurement(config.second, evolved)
    var_t = ins.position_mean_var(evolved)[1]
    return TrialRecord(float(x), mom, float(h), float(delta_sq), bool(mom.corr < 0), float(eps), float(var_t))


def _sample_first(config, prior):
    dist = ins.outcome_distribution(config.scheme, prior)
    children = np.random.SeedSequence(config.seed).spawn(min(config.n_batches, config.n_trials))
    batches = _batches(config.n_trials, config.n_batches)
    xs = np.empty(config.n_trials)
    for child, idx in zip(children, batches):
        xs[idx] = dist.sample(np.random.default_rng(child), len(idx))
    return xs, batches


def run_repeated(config: RepeatedMeasurementConfig):
    """Monte Carlo over first outcomes.

    Each batch draws its outcomes from its own child of
    ``SeedSequence(seed)``, so results are reproducible bit for bit.

    Returns
    -------
    records : list of TrialRecord
    report : SqlReport
        Standard errors are batch means over ``n_batches`` batches.
    """
    prior = _prepare_prior(config.scheme, config.prior)
    xs, batches = _sample_first(config, prior)
    records = [_trial(config, prior, x) for x in xs]
    delta = np.array([r.delta_sq_x for r in records])
    eps = np.array([r.precision_x for r in records])
    var = np.array([r.var_evolved for r in records])
    contr = np.array([r.contractive for r in records], dtype=float)
    pred, pred_se = _batch_stats(delta, batches)
    lhs, lhs_se = _batch_stats(eps, batches)
    avg_var, var_se = _batch_stats(var, batches)
    frac, frac_se = _batch_stats(contr, batches)
    rhs = ins.posterior_deviation(config.scheme, prior, validate=False)
    report = SqlReport(
        predictive_uncertainty=pred,
        predictive_stderr=pred_se,
        sql_value=sql_value(config.t_f, config.units),
        avg_precision_evolved=lhs,
        avg_precision_stderr=lhs_se,
        avg_var_evolved=avg_var,
        avg_var_stderr=var_se,
        posterior_deviation=rhs,
        onc_violated=_violated(lhs, rhs),
        contractive_fraction=frac,
        contractive_stderr=frac_se,
        n_trials=config.n_trials,
        n_batches=len(batches),
        t_f=config.t_f,
        seed=config.seed,
    )
    return records, report


def _violated(lhs: float, rhs: float, rtol: float = 1e-12) -> bool:
    return bool(lhs < rhs - rtol * max(abs(rhs), 1e-300))


def onc_ledger(config: RepeatedMeasurementConfig) -> OncLedger:
    r"""Sides of the necessary condition :math:`\int p\,\varepsilon^2[\rho_x(t_f)] \geq \sigma^2[\rho]`.

    Gaussian runs average the evolved precision by Gauss-Hermite quadrature
    over the first outcome, which is exact; grid runs use Monte Carlo.
    """
    prior = _prepare_prior(config.scheme, config.prior)
    rhs = ins.posterior_deviation(config.scheme, prior, validate=False)
    dist = ins.outcome_distribution(config.scheme, prior)
    if dist.kind == "gaussian":
        xs, ws = ins._hermite_outcomes(dist)
        lhs = 0.0
        for x, w in zip(xs, ws):
            post = ins.reduce(config.scheme, prior, x, validate=False).posterior
            lhs += w * ins.precision(config.second, _evolve(post, config.t_f, config.units), validate=False)
    else:
        lhs = run_repeated(config)[1].avg_precision_evolved
    return OncLedger(float(lhs), float(rhs), _violated(lhs, rhs))


def contractive_fraction_sweep(scheme, prior, n_trials: int = 10_000, seed: int = 0, *, outcomes=None,
                               n_batches: int = 20, units: PhysicalUnits = NATURAL) -> Fraction:
    """Fraction of first outcomes whose posterior has negative correlation.

    ``outcomes`` replaces the sampled outcomes when given.
    """
    prior = _prepare_prior(scheme, prior)
    if outcomes is None:
        cfg = RepeatedMeasurementConfig(scheme, prior, 1.0, n_trials, seed, units, n_batches=n_batches)
        xs, batches = _sample_first(cfg, prior)
    else:
        xs = np.asarray(outcomes, dtype=float)
        batches = _batches(len(xs), n_batches)
    flags = np.empty(len(xs))
    for j, x in enumerate(xs):
        post = ins.reduce(scheme, prior, x, validate=False).posterior
        flags[j] = ins.posterior_moments(post, units).corr < 0
    return Fraction(*_batch_stats(flags, batches))


def braginskii_vs_yuen(state: GaussianState, t, units: PhysicalUnits = NATURAL) -> dict:
    """Position variance versus time with and without the correlation term.

    Columns
    -------
    yuen
        Full variance including ``2 corr t / m``.
    braginskii
        The same with the correlation dropped.
    braginskii_bound
        ``var_q + hbar**2 t**2 / (4 m**2 var_q)``, its Heisenberg lower bound.
    sql
        ``hbar t / m``, the minimum of ``braginskii_bound`` over ``var_q``.
    robertson_floor
        ``hbar**2 t**2 / (4 m**2 var_q)``, a floor for any state.
    """
    t = np.asarray(t, dtype=float)
    mo = moments(state, units)
    s = t / units.mass
    return {
        "t": t,
        "yuen": variance_curve(state, t, units),
        "braginskii": mo.var_q + mo.var_p * s**2,
        "braginskii_bound": mo.var_q + units.hbar**2 * s**2 / (4 * mo.var_q),
        "sql": units.hbar * s,
        "robertson_floor": units.hbar**2 * s**2 / (4 * mo.var_q),
    }

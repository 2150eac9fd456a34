r"""Measurement schemes as system-only reduction operators.

Every scheme is described by the ordered factor tuple of its reduction
operator :math:`\Omega(x)`, split into

* ``pre_factors()``: outcome-independent unitaries applied before the
  interaction (the radiation-pressure pre-squeeze);
* the *kernel* :math:`K(x; q)`: a multiplicative factor, the only place the
  outcome statistics come from, since
  :math:`p(x|\psi) = \int |K(x;q)|^2 |\psi'(q)|^2 dq`;
* ``post_factors(x)``: outcome-dependent unitaries (dilatations, feedback
  shifts) that change the posterior but never the outcome density.

The Gordon-Louisell scheme is the exception: its operator is rank one,
:math:`\Omega(x) = |\psi_x\rangle\langle x|`.

Posterior states, outcome distributions and noise functionals are computed
in closed form for Gaussian states and Gaussian-preserving schemes, and by
the grid oracle otherwise.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple, Union

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from . import grid_oracle as go
from .exceptions import InvalidSchemeError, NormalizationError, SmallQValidityError
from .factors import Dilation, GaussianFactor, PointwiseFactor, PositionShift, RankOne
from .gaussian_states import (
    GaussianState,
    Moments,
    PhysicalUnits,
    NATURAL,
    dilate,
    make_tcs,
    moments,
    multiply_gaussian_factor,
    normalize,
    norm_squared,
    shift_position,
)
from .lie_algebra import AbcdMatrix, ThreeStepParams, abcd_from_three_step, breaching_three_step
from .outcomes import OutcomeDistribution

__all__ = [
    "VonNeumann",
    "ThreeStep",
    "GordonLouisell",
    "RadiationPressureSmallQ",
    "RadiationPressureFull",
    "SchemeDescriptor",
    "PosteriorResult",
    "UnbiasednessReport",
    "BiasWarning",
    "SMALL_Q_THRESHOLD",
    "reduction_operator_description",
    "outcome_distribution",
    "reduce",
    "sample_outcome",
    "precision",
    "posterior_deviation",
    "total_uncertainty",
    "outcome_moments",
    "check_unbiasedness",
    "posterior_moments",
    "as_grid_state",
]

SMALL_Q_THRESHOLD = 0.1
_HERMITE_NODES = 24
_BIAS_TOL = 1e-9


class BiasWarning(UserWarning):
    """A functional was evaluated for a biased outcome distribution."""


def _check_centered_even(probe: GaussianState, what: str):
    if abs(probe.mean_position) > 1e-12 or abs(probe.mean_wavenumber) > 1e-12:
        raise InvalidSchemeError(f"{what} probe must be even with <Q> = 0, got mean {probe.mean_position!r}")
    if abs(norm_squared(probe) - 1) > 1e-9:
        raise InvalidSchemeError(f"{what} probe must be normalized")


class _KernelScheme:
    """Shared machinery of schemes with a multiplicative kernel."""

    rank_one = False
    gaussian = True

    def pre_factors(self) -> tuple:
        return ()

    def post_factors(self, x: float) -> tuple:
        return ()

    def kernel(self, x, q):
        quad, lin, const = self._kernel_coefficients(np.asarray(x, dtype=float))
        q = np.asarray(q, dtype=float)
        return np.exp(-quad * q**2 + lin * q + const)

    def kernel_factor(self, x: float):
        quad, lin, const = self._kernel_coefficients(float(x))
        return GaussianFactor(complex(quad), complex(lin), complex(const))

    def factors(self, x: float) -> tuple:
        return self.pre_factors() + (self.kernel_factor(x),) + self.post_factors(x)

    def conditional_outcome(self, q):
        """Mean and standard deviation of ``x`` for a position eigenstate at kernel coordinate ``q``."""
        q = np.asarray(q, dtype=float)
        return self.pom_gain * q + self.pom_offset, np.full(q.shape, math.sqrt(self.pom_noise_var))

    @property
    def pom_offset(self) -> float:
        return 0.0

    @property
    def outcome_scale(self) -> float:
        return 1.0

    def check_state(self, state):
        pass


@dataclass(frozen=True)
class ThreeStep(_KernelScheme):
    r"""Pre-squeeze, :math:`qP` entanglement and position feedback.

    The reduction operator is
    :math:`\Omega(x) = e^{i\zeta_+ x p/\hbar} e^{-i\zeta_z qp/\hbar}\,
    e^{\zeta_z/2}\varphi(e^{\zeta_z}x + \zeta_- e^{2\zeta_z} q)`,
    i.e. multiplication by the probe wavefunction followed by the
    dilatation ``lam = exp(-zeta_z)`` and the shift ``-zeta_plus * x``.
    """

    params: ThreeStepParams
    probe: GaussianState

    def __post_init__(self):
        _check_centered_even(self.probe, "three-step")
        if self.params.zeta_minus == 0:
            raise InvalidSchemeError("zeta_minus = 0 carries no information about the system")

    @classmethod
    def breaching(cls, zeta_z: float, probe: GaussianState) -> "ThreeStep":
        return cls(breaching_three_step(zeta_z), probe)

    @classmethod
    def from_d(cls, d: float, probe: GaussianState) -> "ThreeStep":
        """Plausible scheme (``a = c = 1``) with the given ``d = exp(-zeta_z)``.

        Raises
        ------
        InvalidSchemeError
            For ``d <= 0``, which the three-step family cannot realize.
        """
        if not d > 0:
            raise InvalidSchemeError(f"d = {d!r} <= 0 is not realizable by a three-step sequence")
        zeta = -math.log(d)
        return cls(ThreeStepParams(math.expm1(zeta), -math.exp(-zeta), zeta), probe)

    @property
    def abcd(self) -> AbcdMatrix:
        return abcd_from_three_step(self.params)

    @property
    def pom_gain(self) -> float:
        return -self.params.zeta_minus * math.exp(self.params.zeta_z)

    @property
    def pom_noise_var(self) -> float:
        return math.exp(-2 * self.params.zeta_z) * self.probe.var_q

    def _kernel_coefficients(self, x):
        z, zm = self.params.zeta_z, self.params.zeta_minus
        quad, lin, const = self.probe.affine_exponent(math.exp(z) * x, zm * math.exp(2 * z))
        return quad, lin, const + 0.5 * z

    def post_factors(self, x: float) -> tuple:
        out = []
        if self.params.zeta_z != 0:
            out.append(Dilation(math.exp(-self.params.zeta_z)))
        if self.params.zeta_plus != 0:
            out.append(PositionShift(-self.params.zeta_plus * x))
        return tuple(out)


@dataclass(frozen=True)
class VonNeumann(_KernelScheme):
    r"""Impulsive :math:`qP` coupling: :math:`\Omega(x) = \varphi(x - q)`."""

    probe: GaussianState

    def __post_init__(self):
        _check_centered_even(self.probe, "von Neumann")

    @property
    def abcd(self) -> AbcdMatrix:
        return AbcdMatrix(1, 0, 1, 1)

    @property
    def pom_gain(self) -> float:
        return 1.0

    @property
    def pom_noise_var(self) -> float:
        return self.probe.var_q

    def _kernel_coefficients(self, x):
        return self.probe.affine_exponent(x, -1.0)


@dataclass(frozen=True)
class GordonLouisell:
    r"""Ideal position readout followed by preparation of ``target`` centred at the outcome.

    :math:`\Omega(x) = |\psi_x\rangle\langle x|` with
    :math:`\psi_x(q) = \psi_0(q - x)`; ``target`` is the template
    :math:`\psi_0` and must have zero mean position.
    """

    target: GaussianState

    rank_one = True
    gaussian = True

    def __post_init__(self):
        if abs(self.target.mean_position) > 1e-12:
            raise InvalidSchemeError("GL target template must be centred at q = 0")
        object.__setattr__(self, "target", normalize(self.target))

    @classmethod
    def tcs(cls, mu: complex, nu: complex, units: PhysicalUnits = NATURAL) -> "GordonLouisell":
        return cls(make_tcs(mu, nu, 0.0, units))

    @property
    def abcd(self) -> AbcdMatrix:
        return AbcdMatrix(1, -1, 1, 0)

    @property
    def outcome_scale(self) -> float:
        return 1.0

    def target_at(self, x: float) -> GaussianState:
        return shift_position(self.target, x)

    def pre_factors(self) -> tuple:
        return ()

    def factors(self, x: float) -> tuple:
        return (RankOne(self.target_at(x), float(x)),)

    def check_state(self, state):
        pass


@dataclass(frozen=True)
class _RadiationPressure(_KernelScheme):
    """Common parameters of the radiation-pressure schemes.

    Positions enter through ``q / l_tau``; ``feedback_gain`` multiplies the
    outcome-proportional shift ``-feedback_gain * alpha_mag * l_tau * X`` and
    ``presqueeze`` is the log-dilatation applied before the interaction.
    """

    alpha_mag: float
    r: float = 0.0
    l_tau: float = 1.0
    feedback_gain: float = 1.0
    presqueeze: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha_mag) and self.alpha_mag > 0):
            raise InvalidSchemeError(f"alpha_mag must be positive, got {self.alpha_mag!r}")
        if not (np.isfinite(self.l_tau) and self.l_tau > 0):
            raise InvalidSchemeError(f"l_tau must be positive, got {self.l_tau!r}")
        for name in ("r", "feedback_gain", "presqueeze"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidSchemeError(f"{name} must be finite")

    @property
    def outcome_scale(self) -> float:
        return self.l_tau * math.exp(-self.presqueeze)

    @property
    def pom_gain(self) -> float:
        return 1.0 / self.l_tau

    @property
    def pom_noise_var(self) -> float:
        return 1.0 / (4 * self.alpha_mag**2 * math.exp(2 * self.r))

    def pre_factors(self) -> tuple:
        if self.presqueeze == 0:
            return ()
        # q -> q exp(presqueeze) in the Heisenberg picture
        return (Dilation(math.exp(-self.presqueeze)),)

    def post_factors(self, x: float) -> tuple:
        if self.feedback_gain == 0:
            return ()
        return (PositionShift(-self.feedback_gain * self.alpha_mag * self.l_tau * x),)

    def without_feedback(self):
        return replace(self, feedback_gain=0.0)


@dataclass(frozen=True)
class RadiationPressureSmallQ(_RadiationPressure):
    r"""Radiation-pressure readout linearized in :math:`\underline q = q/l_\tau`.

    With :math:`\beta = |\alpha|^2 e^{2r}` the kernel is

    .. math::

        K(X; q) = (2\beta/\pi)^{1/4}
        \exp\left[-\beta (X - \underline q)^2
        + i|\alpha|^2(\underline q^2 X + \underline q - 2X)
        + \tfrac{i}{2}(e^{2r} - 1)\underline q\right].

    Only valid while :math:`|\langle\underline q\rangle| + 3\,\mathrm{std}(\underline q) < 0.1`
    after the pre-squeeze; outside that window use
    :class:`RadiationPressureFull`.
    """

    def _kernel_coefficients(self, x):
        a2, e2r, l = self.alpha_mag**2, math.exp(2 * self.r), self.l_tau
        quad = (a2 * e2r - 1j * a2 * x) / l**2
        lin = (2 * a2 * e2r * x + 1j * a2 + 0.5j * (e2r - 1)) / l
        const = 0.25 * math.log(2 * a2 * e2r / math.pi) - a2 * e2r * x**2 - 2j * a2 * x
        return quad, lin, const

    def small_q_extent(self, state) -> float:
        """``|<q'>| + 3 std(q')`` of the pre-squeezed scaled coordinate."""
        if isinstance(state, GaussianState):
            mean, var = state.mean_position, state.var_q
        else:
            mean, var = go.position_moments_grid(state)
        scale = math.exp(self.presqueeze) / self.l_tau
        return scale * (abs(mean) + 3 * math.sqrt(var))

    def check_state(self, state):
        extent = self.small_q_extent(state)
        if not extent < SMALL_Q_THRESHOLD:
            raise SmallQValidityError(
                f"state extends to |q/l_tau| ~ {extent:.3g} >= {SMALL_Q_THRESHOLD}; "
                "use RadiationPressureFull for large displacements"
            )


@dataclass(frozen=True)
class RadiationPressureFull(_RadiationPressure):
    r"""Radiation-pressure readout with the exact :math:`\sin`/:math:`\cos` dependence.

    .. math::

        K(X; q) = \left(\frac{2|\alpha|^2}{\pi k^2}\right)^{1/4}
        e^{-i(\phi + \underline q)/2}
        \exp\left\{-i|\alpha|^2\cos\underline q\,(2X - \sin\underline q)
        - |\alpha|^2 (X - \sin\underline q)^2 \left[\frac{1}{k^2} + iW\right]\right\},

    with :math:`k^2 = e^{2r}\sin^2\underline q + e^{-2r}\cos^2\underline q`,
    :math:`\phi = -\arg(\cos\underline q + i e^{2r}\sin\underline q)` and
    :math:`W = \sin\underline q\cos\underline q\,(1 - e^{4r})/(k^2 e^{2r})`.
    :math:`|K|^2` is a normal density in ``X`` centred at
    :math:`\sin\underline q`, so the instrument is complete.  Grid-backed.
    """

    grid_points: int = go.DEFAULT_POINTS
    n_outcomes: int = go.DEFAULT_OUTCOMES

    gaussian = False

    def kernel(self, x, q):
        x = np.asarray(x, dtype=float)
        u = np.asarray(q, dtype=float) / self.l_tau
        a2, e2r = self.alpha_mag**2, math.exp(2 * self.r)
        s, c = np.sin(u), np.cos(u)
        k2 = e2r * s**2 + c**2 / e2r
        phi = -np.arctan2(e2r * s, c)
        w = s * c * (1 - e2r**2) / (k2 * e2r)
        dev = x - s
        expo = -1j * a2 * c * (2 * x - s) - a2 * dev**2 * (1 / k2 + 1j * w)
        return (2 * a2 / (math.pi * k2)) ** 0.25 * np.exp(expo - 0.5j * (phi + u))

    def kernel_factor(self, x: float):
        x = float(x)
        return PointwiseFactor(lambda q: self.kernel(x, q), f"radiation-pressure kernel at X={x!r}")

    def conditional_outcome(self, q):
        u = np.asarray(q, dtype=float) / self.l_tau
        e2r = math.exp(2 * self.r)
        k2 = e2r * np.sin(u) ** 2 + np.cos(u) ** 2 / e2r
        return np.sin(u), np.sqrt(k2) / (2 * self.alpha_mag)

    def small_q(self) -> RadiationPressureSmallQ:
        return RadiationPressureSmallQ(self.alpha_mag, self.r, self.l_tau, self.feedback_gain, self.presqueeze)


SchemeDescriptor = Union[VonNeumann, ThreeStep, GordonLouisell, RadiationPressureSmallQ, RadiationPressureFull]


class PosteriorResult(NamedTuple):
    outcome: float
    posterior: object
    density_at_x: float


@dataclass(frozen=True)
class UnbiasednessReport:
    """Worst deviations of ``E[scale x | rho] - <q>`` and ``<q>_x - scale x``.

    ``reduction_mean_deviation`` is the outcome-averaged reduction bias,
    which vanishes for every scheme with an unbiased POM.
    """

    pom_max_deviation: float
    reduction_max_deviation: float
    reduction_mean_deviation: float
    tol: float

    @property
    def pom_unbiased(self) -> bool:
        return self.pom_max_deviation <= self.tol

    @property
    def reduction_unbiased(self) -> bool:
        return self.reduction_max_deviation <= self.tol


def as_grid_state(scheme, state, n_points: int | None = None):
    if isinstance(state, go.GridState):
        return state
    n = n_points or getattr(scheme, "grid_points", go.DEFAULT_POINTS)
    return go.discretize(state, n_points=n)


def _use_closed_form(scheme, state) -> bool:
    return scheme.gaussian and isinstance(state, GaussianState)


def posterior_moments(state, units: PhysicalUnits = NATURAL) -> Moments:
    if isinstance(state, GaussianState):
        return moments(state, units)
    return go.moments_grid(state, units)


def position_mean_var(state):
    if isinstance(state, GaussianState):
        return state.mean_position, state.var_q
    return go.position_moments_grid(state)


def _apply_gaussian(state: GaussianState, f) -> GaussianState:
    if isinstance(f, Dilation):
        return dilate(state, f.lam)
    if isinstance(f, PositionShift):
        return shift_position(state, f.dq)
    if isinstance(f, GaussianFactor):
        return multiply_gaussian_factor(state, f.quadratic, f.linear, f.const)
    if isinstance(f, RankOne):
        P, B, C = state.polynomial()
        value = -P * f.at**2 + B * f.at + C
        return replace(f.target, log_norm=f.target.log_norm + value)
    raise TypeError(f"factor {f!r} has no closed form")


def reduction_operator_description(scheme, x: float) -> tuple:
    """Ordered factor tuple of ``Omega(x)``; factors are applied left to right."""
    return scheme.factors(x)


def _pre_affine(scheme):
    """``(slope, offset)`` with kernel coordinate ``q' = slope * q + offset``."""
    slope, offset = 1.0, 0.0
    for f in scheme.pre_factors():
        if isinstance(f, Dilation):
            slope, offset = slope / f.lam, offset / f.lam
        elif isinstance(f, PositionShift):
            offset += f.dq
    return slope, offset


def _gaussian_pom(scheme, mean: float, var: float):
    """Outcome mean and variance for a Gaussian position distribution."""
    if scheme.rank_one:
        return mean, var
    slope, offset = _pre_affine(scheme)
    g = scheme.pom_gain * slope
    return g * mean + scheme.pom_gain * offset + scheme.pom_offset, g**2 * var + scheme.pom_noise_var


def outcome_distribution(scheme, state, *, validate: bool = True) -> OutcomeDistribution:
    """Distribution ``p(x | state)`` of the raw readout.

    Raises
    ------
    SmallQValidityError
        For the small-displacement radiation-pressure scheme outside its regime.
    """
    if validate:
        scheme.check_state(state)
    if _use_closed_form(scheme, state):
        mean, var = _gaussian_pom(scheme, state.mean_position, state.var_q)
        return OutcomeDistribution.gaussian(mean, var, scheme.outcome_scale)
    n_out = getattr(scheme, "n_outcomes", go.DEFAULT_OUTCOMES)
    return go.distribution_grid(scheme, as_grid_state(scheme, state), n_out)


def reduce(scheme, state, x: float, *, validate: bool = True) -> PosteriorResult:
    """Normalized posterior ``Omega(x) psi / ||Omega(x) psi||``.

    Raises
    ------
    NormalizationError
        If the outcome has zero probability density for ``state``.
    """
    if validate:
        scheme.check_state(state)
    if _use_closed_form(scheme, state):
        out = state
        for f in scheme.factors(x):
            out = _apply_gaussian(out, f)
        density = norm_squared(out)
        if not (density > 0 and math.isfinite(density)):
            raise NormalizationError(f"outcome {x!r} has density {density!r}")
        return PosteriorResult(float(x), normalize(out), density)
    res = go.apply_reduction_grid(scheme, as_grid_state(scheme, state), x)
    return PosteriorResult(float(x), res.state, res.weight)


def sample_outcome(scheme, state, rng, size=None, *, validate: bool = True):
    """Draw readouts from ``p(x | state)``.

    ``rng`` is a ``numpy.random.Generator`` or an integer seed.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    return outcome_distribution(scheme, state, validate=validate).sample(rng, size)


def precision(scheme, state, *, validate: bool = True) -> float:
    r"""Precision :math:`\varepsilon^2 = \int (s x - q)^2\, |\Omega(x)\psi(q)|^2 dq\,dx`.

    ``s`` is the scheme's ``outcome_scale``.  Gaussian schemes are evaluated
    in closed form, including the bias terms of a non-plausible scheme.
    """
    if validate:
        scheme.check_state(state)
    if scheme.rank_one:
        return 0.0
    if scheme.gaussian:
        # depends on the state only through its first two position moments
        mean, var = position_mean_var(state)
        slope, offset = _pre_affine(scheme)
        s = scheme.outcome_scale
        g = scheme.pom_gain * slope
        h = scheme.pom_gain * offset + scheme.pom_offset
        return (s * g - 1) ** 2 * var + ((s * g - 1) * mean + s * h) ** 2 + s**2 * scheme.pom_noise_var
    n_out = getattr(scheme, "n_outcomes", go.DEFAULT_OUTCOMES)
    return go.precision_grid(scheme, as_grid_state(scheme, state), n_out)


def outcome_moments(scheme, state, *, validate: bool = True):
    """Mean and variance of the position estimate ``s x``.

    Gaussian-kernel schemes give them from the position moments of any
    state, Gaussian or not; grid-backed schemes tabulate the density.
    """
    if validate:
        scheme.check_state(state)
    if scheme.gaussian:
        mean, var = _gaussian_pom(scheme, *position_mean_var(state))
        s = scheme.outcome_scale
        return s * mean, s**2 * var
    dist = outcome_distribution(scheme, state, validate=False)
    return dist.position_mean, dist.position_variance


def _hermite_outcomes(dist: OutcomeDistribution, n: int = _HERMITE_NODES):
    z, w = hermegauss(n)
    return dist.mean + dist.std * z, w / math.sqrt(2 * math.pi)


def posterior_deviation(scheme, state, *, validate: bool = True) -> float:
    r"""Posterior deviation :math:`\sigma^2 = \int p(x)\,[\mathrm{Var}_x + (\langle q\rangle_x - s x)^2]\,dx`.

    Gaussian schemes have an outcome-independent posterior variance and a
    posterior mean affine in ``x``, so Gauss-Hermite quadrature is exact;
    other cases use the tabulated density.
    """
    if validate:
        scheme.check_state(state)
    s = scheme.outcome_scale
    if _use_closed_form(scheme, state):
        dist = outcome_distribution(scheme, state, validate=False)
        xs, ws = _hermite_outcomes(dist)
        total = 0.0
        for x, w in zip(xs, ws):
            post = reduce(scheme, state, x, validate=False).posterior
            total += w * (post.var_q + (post.mean_position - s * x) ** 2)
        return float(total)
    n_out = getattr(scheme, "n_outcomes", go.DEFAULT_OUTCOMES)
    return go.posterior_deviation_grid(scheme, as_grid_state(scheme, state), n_out)


def _pom_bias(scheme, state, dist: OutcomeDistribution) -> float:
    mean, _ = position_mean_var(state)
    return dist.position_mean - mean


def total_uncertainty(scheme, state, *, validate: bool = True) -> float:
    r"""Variance :math:`\Delta\bar x^2` of the position estimate ``s x``.

    For an unbiased POM this equals :math:`\varepsilon^2 + \mathrm{Var}(q)`.
    A :class:`BiasWarning` is issued when the POM is biased; the value is
    then the raw variance of the estimate.
    """
    dist = outcome_distribution(scheme, state, validate=validate)
    _, var = position_mean_var(state)
    bias = _pom_bias(scheme, state, dist)
    if abs(bias) > 1e-6 * max(1.0, math.sqrt(var)):
        warnings.warn(f"POM is biased by {bias:.3g}; returning the raw estimate variance", BiasWarning, stacklevel=2)
    return dist.position_variance


def check_unbiasedness(scheme, states, *, tol: float = _BIAS_TOL, n_outcomes: int = 9) -> UnbiasednessReport:
    """Test ``E[s x | rho] = <q>`` and ``<q>_x = s x`` over a sample of states.

    Reduction bias is probed at ``n_outcomes`` Gauss-Hermite points of each
    outcome distribution; the averaged bias uses the quadrature weights.
    """
    pom_dev = red_dev = 0.0
    red_mean = 0.0
    s = scheme.outcome_scale
    for state in states:
        dist = outcome_distribution(scheme, state, validate=False)
        pom_dev = max(pom_dev, abs(_pom_bias(scheme, state, dist)))
        if dist.kind == "gaussian":
            xs, ws = _hermite_outcomes(dist, n_outcomes)
        else:
            qs = np.linspace(0.02, 0.98, n_outcomes)
            xs = np.interp(qs, dist._cumulative(), dist.x)
            ws = np.full(n_outcomes, 1.0 / n_outcomes)
        avg = 0.0
        for x, w in zip(xs, ws):
            post = reduce(scheme, state, x, validate=False).posterior
            mean, _ = position_mean_var(post)
            red_dev = max(red_dev, abs(mean - s * x))
            avg += w * (mean - s * x)
        if dist.kind == "gaussian":
            red_mean = max(red_mean, abs(avg))
        else:
            red_mean = max(red_mean, abs(avg / ws.sum()))
    return UnbiasednessReport(float(pom_dev), float(red_dev), float(red_mean), tol)

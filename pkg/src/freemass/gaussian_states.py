r"""Closed-form algebra of pure one-dimensional Gaussian wavefunctions.

A state is stored through its exponent,

.. math::

    \psi(q) = \exp\left[c - A (q - \bar q)^2 + i \bar k (q - \bar q)\right],

with complex ``exponent_quadratic`` :math:`A` (:math:`\mathrm{Re}\,A > 0`),
real ``mean_position`` :math:`\bar q`, real ``mean_wavenumber`` :math:`\bar k`
and complex ``log_norm`` :math:`c`.  Every map used by the measurement
schemes (Gaussian-factor multiplication, translation, dilatation, free
evolution) is affine on these coefficients, so the states never leave the
family.  Unnormalized states are allowed; :func:`normalize` is explicit.

Momenta are :math:`p = \hbar k`; ``PhysicalUnits`` carries :math:`\hbar`,
:math:`m` and :math:`\omega`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import NormalizationError

__all__ = [
    "PhysicalUnits",
    "GaussianState",
    "Moments",
    "make_muw",
    "make_tcs",
    "squeezed_tcs_params",
    "moments",
    "normalize",
    "norm_squared",
    "free_evolve",
    "variance_curve",
    "min_variance_point",
    "multiply_gaussian_factor",
    "shift_position",
    "dilate",
    "overlap",
    "states_close",
    "is_contractive",
]


@dataclass(frozen=True)
class PhysicalUnits:
    """Values of hbar, the free mass and the reference angular frequency."""

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and strictly positive, got {value!r}")


NATURAL = PhysicalUnits()


@dataclass(frozen=True)
class Moments:
    """First and second moments of a pure state.

    ``corr`` is the symmetrized covariance :math:`\\mathrm{Re}\\langle\\Delta q\\Delta p\\rangle`.
    """

    mean_q: float
    var_q: float
    mean_p: float
    var_p: float
    corr: float

    def heisenberg_excess(self, hbar: float = 1.0) -> float:
        """``var_q * var_p - corr**2 - hbar**2 / 4``; zero for pure Gaussians."""
        return self.var_q * self.var_p - self.corr**2 - hbar**2 / 4


@dataclass(frozen=True)
class GaussianState:
    exponent_quadratic: complex
    mean_position: float = 0.0
    mean_wavenumber: float = 0.0
    log_norm: complex = 0.0

    def __post_init__(self):
        A = complex(self.exponent_quadratic)
        if not (np.isfinite(A.real) and np.isfinite(A.imag)) or A.real <= 0:
            raise NormalizationError(f"Re(A) must be > 0 for a normalizable state, got A={A!r}")
        object.__setattr__(self, "exponent_quadratic", A)
        object.__setattr__(self, "mean_position", float(self.mean_position))
        object.__setattr__(self, "mean_wavenumber", float(self.mean_wavenumber))
        object.__setattr__(self, "log_norm", complex(self.log_norm))

    @property
    def var_q(self) -> float:
        return 1.0 / (4.0 * self.exponent_quadratic.real)

    @property
    def std_q(self) -> float:
        return math.sqrt(self.var_q)

    def polynomial(self):
        """Coefficients ``(P, B, C)`` with ``log psi(q) = -P q**2 + B q + C``."""
        A, q0, k0 = self.exponent_quadratic, self.mean_position, self.mean_wavenumber
        return A, 2 * A * q0 + 1j * k0, self.log_norm - A * q0**2 - 1j * k0 * q0

    @classmethod
    def from_polynomial(cls, P, B, C) -> "GaussianState":
        """Inverse of :meth:`polynomial`."""
        P = complex(P)
        if P.real <= 0:
            raise NormalizationError(f"quadratic coefficient {P!r} is not normalizable")
        q0 = B.real / (2 * P.real)
        k0 = B.imag - 2 * P.imag * q0
        c = C + P * q0**2 + 1j * k0 * q0
        return cls(P, q0, k0, c)

    def __call__(self, q):
        """Evaluate the wavefunction at position(s) ``q``."""
        q = np.asarray(q, dtype=float)
        u = q - self.mean_position
        return np.exp(self.log_norm - self.exponent_quadratic * u**2 + 1j * self.mean_wavenumber * u)

    def affine_exponent(self, offset, slope):
        """Polynomial coefficients of ``log psi(offset + slope * q)`` in ``q``.

        ``offset`` may be an array; the returned coefficients broadcast with it.
        """
        A, q0, k0, c = self.exponent_quadratic, self.mean_position, self.mean_wavenumber, self.log_norm
        gamma = np.asarray(offset) - q0
        quad = A * slope**2
        lin = -2 * A * slope * gamma + 1j * k0 * slope
        const = c - A * gamma**2 + 1j * k0 * gamma
        return quad, lin, const


def make_muw(q0: float = 0.0, k0: float = 0.0, delta_sq: float = 1.0, units: PhysicalUnits = NATURAL) -> GaussianState:
    """Minimum-uncertainty wave packet centred at ``q0`` with wavenumber ``k0``.

    ``delta_sq`` is the position variance.  The packet has zero
    position-momentum correlation and saturates the Heisenberg bound.
    """
    if not (delta_sq > 0):
        raise ValueError(f"delta_sq must be positive, got {delta_sq!r}")
    return GaussianState(1.0 / (4.0 * delta_sq), q0, k0, 0.25 * math.log(1.0 / (2 * math.pi * delta_sq)))


def make_tcs(mu: complex, nu: complex, alpha: complex = 0.0, units: PhysicalUnits = NATURAL, *, atol: float = 1e-9) -> GaussianState:
    r"""Twisted coherent (squeezed) state :math:`|\mu\nu\alpha\omega\rangle` of the free mass.

    Parameters
    ----------
    mu, nu : complex
        Squeeze parameters with :math:`|\mu|^2 - |\nu|^2 = 1`.
    alpha : complex
        ``q0 + 1j * p0``; position and momentum of the centre.
    units : PhysicalUnits
        ``omega`` sets the reference width :math:`\hbar/(2m\omega)`.

    Notes
    -----
    The correlation equals :math:`-\hbar\,\mathrm{Im}(\mu^*\nu)`, so the state
    is contractive whenever :math:`\mathrm{Im}(\mu^*\nu) > 0`.
    """
    mu, nu, alpha = complex(mu), complex(nu), complex(alpha)
    if abs(abs(mu) ** 2 - abs(nu) ** 2 - 1.0) > atol:
        raise ValueError(f"|mu|^2 - |nu|^2 must equal 1, got {abs(mu) ** 2 - abs(nu) ** 2!r}")
    xi = (mu.conjugate() * nu).imag
    width = abs(mu - nu) ** 2
    m, w, hbar = units.mass, units.omega, units.hbar
    A = m * w / (2 * hbar) * (1 + 2j * xi) / width
    return GaussianState(A, alpha.real, alpha.imag / hbar, 0.25 * math.log(m * w / (math.pi * hbar * width)))


def squeezed_tcs_params(xi: float):
    """``(mu, nu) = (cosh r, i sinh r)`` with ``Im(mu* nu) = xi``."""
    r = 0.5 * math.asinh(2 * xi)
    return complex(math.cosh(r)), 1j * math.sinh(r)


def moments(state: GaussianState, units: PhysicalUnits = NATURAL) -> Moments:
    A = state.exponent_quadratic
    hbar = units.hbar
    return Moments(
        mean_q=state.mean_position,
        var_q=1.0 / (4 * A.real),
        mean_p=hbar * state.mean_wavenumber,
        var_p=hbar**2 * abs(A) ** 2 / A.real,
        corr=-hbar * A.imag / (2 * A.real),
    )


def norm_squared(state: GaussianState) -> float:
    return math.exp(2 * state.log_norm.real) * math.sqrt(math.pi / (2 * state.exponent_quadratic.real))


def normalize(state: GaussianState) -> GaussianState:
    """Rescale to unit norm; the global phase in ``log_norm`` is kept."""
    A = state.exponent_quadratic
    return replace(state, log_norm=complex(0.25 * math.log(2 * A.real / math.pi), state.log_norm.imag))


def free_evolve(state: GaussianState, t: float, units: PhysicalUnits = NATURAL) -> GaussianState:
    """Free-particle Schrodinger evolution over time ``t``.

    Negative ``t`` evolves backwards; the map is a group in ``t``.
    """
    A = state.exponent_quadratic
    hbar, m = units.hbar, units.mass
    denom = 1 + 2j * hbar * A * t / m
    A_t = A / denom
    k0 = state.mean_wavenumber
    q_t = state.mean_position + hbar * k0 * t / m
    c_t = state.log_norm - 0.5 * cmath.log(denom) + 1j * hbar * k0**2 * t / (2 * m)
    return GaussianState(A_t, q_t, k0, c_t)


def variance_curve(state: GaussianState, t, units: PhysicalUnits = NATURAL):
    """Position variance after free evolution for time(s) ``t``.

    Uses the full quadratic including the correlation term, so contractive
    states show an initial decrease.
    """
    mo = moments(state, units)
    s = np.asarray(t, dtype=float) / units.mass
    return mo.var_q + 2 * mo.corr * s + mo.var_p * s**2


def min_variance_point(state: GaussianState, units: PhysicalUnits = NATURAL):
    """Time and value of the minimum of :func:`variance_curve` over ``t >= 0``.

    Non-contractive states (``corr >= 0``) give ``(0.0, var_q)``.
    """
    mo = moments(state, units)
    if mo.corr >= 0:
        return 0.0, mo.var_q
    t_min = -mo.corr * units.mass / mo.var_p
    return t_min, mo.var_q - mo.corr**2 / mo.var_p


def multiply_gaussian_factor(state: GaussianState, factor_quadratic=0.0, factor_linear=0.0, factor_const=0.0) -> GaussianState:
    """Multiply by ``exp(-a q**2 + b q + c)``.  The result is unnormalized."""
    P, B, C = state.polynomial()
    P2 = P + factor_quadratic
    if complex(P2).real <= 0:
        raise NormalizationError(
            f"product with Gaussian factor (a={factor_quadratic!r}) is not normalizable; check scheme parameters"
        )
    return GaussianState.from_polynomial(P2, complex(B + factor_linear), complex(C + factor_const))


def shift_position(state: GaussianState, dq: float) -> GaussianState:
    """Translate: ``psi(q) -> psi(q - dq)``."""
    return replace(state, mean_position=state.mean_position + dq)


def dilate(state: GaussianState, lam: float) -> GaussianState:
    """Unitary dilatation ``psi(q) -> sqrt(lam) psi(lam q)``.

    ``var_q`` scales by ``1/lam**2`` and ``var_p`` by ``lam**2``; the
    correlation is unchanged.
    """
    if not (lam > 0):
        raise ValueError(f"dilatation factor must be positive, got {lam!r}")
    return GaussianState(
        state.exponent_quadratic * lam**2,
        state.mean_position / lam,
        state.mean_wavenumber * lam,
        state.log_norm + 0.5 * math.log(lam),
    )


def overlap(a: GaussianState, b: GaussianState) -> complex:
    """Inner product ``<a|b>`` (antilinear in ``a``)."""
    Pa, Ba, Ca = a.polynomial()
    Pb, Bb, Cb = b.polynomial()
    P = Pa.conjugate() + Pb
    R = Ba.conjugate() + Bb
    S = Ca.conjugate() + Cb
    return cmath.sqrt(math.pi / P) * cmath.exp(R**2 / (4 * P) + S)


def states_close(a: GaussianState, b: GaussianState, atol: float = 1e-12) -> bool:
    """Field-wise comparison; the phase of ``log_norm`` is compared modulo 2 pi."""
    dphase = (a.log_norm.imag - b.log_norm.imag + math.pi) % (2 * math.pi) - math.pi
    return (
        abs(a.exponent_quadratic - b.exponent_quadratic) <= atol * max(1.0, abs(a.exponent_quadratic))
        and abs(a.mean_position - b.mean_position) <= atol * max(1.0, abs(a.mean_position))
        and abs(a.mean_wavenumber - b.mean_wavenumber) <= atol * max(1.0, abs(a.mean_wavenumber))
        and abs(a.log_norm.real - b.log_norm.real) <= atol
        and abs(dphase) <= atol
    )


def is_contractive(state: GaussianState) -> bool:
    # corr has the sign of -Im(A)
    return state.exponent_quadratic.imag > 0

r"""Two-by-two representation of the system-probe quadratic interactions.

The generators :math:`J_+ = iQp/\hbar`, :math:`J_- = iqP/\hbar` and
:math:`J_z = i(QP - qp)/2\hbar` close a :math:`gl(2,\mathbb{C})` algebra and
are represented by

.. math::

    J_+ \mapsto \begin{pmatrix}0&1\\0&0\end{pmatrix},\quad
    J_- \mapsto \begin{pmatrix}0&0\\1&0\end{pmatrix},\quad
    J_z \mapsto \tfrac12\begin{pmatrix}1&0\\0&-1\end{pmatrix}.

Any evolution in the class is then summarised by the matrix
``[[a, -b], [-c, d]]`` of unit determinant.  The output coordinates are
``q_out = a q + b Q`` (system) and ``x = c q + d Q`` (probe readout).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NotPlausibleError

__all__ = [
    "HamiltonianParams",
    "ThreeStepParams",
    "GlFormParams",
    "AbcdMatrix",
    "J_PLUS",
    "J_MINUS",
    "J_Z",
    "abcd_from_hamiltonian",
    "abcd_from_three_step",
    "abcd_from_gl_form",
    "breaching_three_step",
    "hamiltonian_from_zeta",
    "is_plausible",
    "onc_satisfied",
]

J_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])
J_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]])
J_Z = 0.5 * np.array([[1.0, 0.0], [0.0, -1.0]])

PLAUSIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class HamiltonianParams:
    """Couplings of ``H = -k_plus Q p - k_minus q P + k_z (q p - Q P)``."""

    k_plus: float
    k_minus: float
    k_z: float

    def generator(self) -> np.ndarray:
        """Representation of ``-i H / hbar``."""
        return self.k_plus * J_PLUS + self.k_minus * J_MINUS + 2 * self.k_z * J_Z

    def __neg__(self):
        return HamiltonianParams(-self.k_plus, -self.k_minus, -self.k_z)


@dataclass(frozen=True)
class ThreeStepParams:
    """Pre-squeeze ``zeta_z``, entangling ``zeta_minus`` and feedback ``zeta_plus``."""

    zeta_plus: float
    zeta_minus: float
    zeta_z: float


@dataclass(frozen=True)
class GlFormParams:
    """Feedback gain ``g1``, rotation fraction ``g2`` and aspect ratio ``s``."""

    g1: float
    g2: float
    s: float

    def __post_init__(self):
        if self.s == 0:
            raise ValueError("GL form requires s != 0")


@dataclass(frozen=True)
class AbcdMatrix:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        scale = max(1.0, abs(self.a * self.d), abs(self.b * self.c))
        if abs(self.determinant - 1) > 1e-10 * scale:
            raise ValueError(f"ad - bc must equal 1, got {self.determinant!r}")

    @classmethod
    def from_matrix(cls, M) -> "AbcdMatrix":
        M = np.asarray(M)
        return cls(M[0, 0], -M[0, 1], -M[1, 0], M[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, -self.b], [-self.c, self.d]])

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def as_tuple(self):
        return self.a, self.b, self.c, self.d

    def __matmul__(self, other: "AbcdMatrix") -> "AbcdMatrix":
        return AbcdMatrix.from_matrix(self.matrix @ other.matrix)

    def allclose(self, other: "AbcdMatrix", atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=atol))


def _cosh_sinhc(K_sq: float):
    """``cosh K`` and ``sinh K / K`` for ``K = sqrt(K_sq)``, real or imaginary."""
    if abs(K_sq) < 1e-8:
        # series through K^4; error O(K^6)
        return 1 + K_sq / 2 + K_sq**2 / 24, 1 + K_sq / 6 + K_sq**2 / 120
    if K_sq > 0:
        K = math.sqrt(K_sq)
        return math.cosh(K), math.sinh(K) / K
    y = math.sqrt(-K_sq)
    return math.cos(y), math.sin(y) / y


def abcd_from_hamiltonian(p: HamiltonianParams) -> AbcdMatrix:
    """Closed-form exponential of the interaction class."""
    K_sq = p.k_z**2 + p.k_plus * p.k_minus
    ch, shc = _cosh_sinhc(K_sq)
    return AbcdMatrix(
        a=ch + p.k_z * shc,
        b=-p.k_plus * shc,
        c=-p.k_minus * shc,
        d=ch - p.k_z * shc,
    )


def abcd_from_three_step(p: ThreeStepParams) -> AbcdMatrix:
    """Ordered product ``exp(zeta_plus J+) exp(zeta_minus J-) exp(2 zeta_z J_z)``."""
    ez = math.exp(p.zeta_z)
    return AbcdMatrix(
        a=(1 + p.zeta_plus * p.zeta_minus) * ez,
        b=-p.zeta_plus / ez,
        c=-p.zeta_minus * ez,
        d=1 / ez,
    )


def abcd_from_gl_form(p: GlFormParams) -> AbcdMatrix:
    """Feedback ``exp(-g1 J+)`` after the rotation ``exp(pi g2 (J+/s - s J-) / 2)``."""
    theta = 0.5 * math.pi * p.g2
    cs, sn = math.cos(theta), math.sin(theta)
    return AbcdMatrix(
        a=cs + p.g1 * p.s * sn,
        b=-sn / p.s + p.g1 * cs,
        c=p.s * sn,
        d=cs,
    )


def breaching_three_step(zeta_z: float) -> ThreeStepParams:
    """Three-step parameters with ``a = c = 1`` and ``d = exp(-zeta_z)``."""
    if not (zeta_z > 0):
        raise ValueError(f"zeta_z must be > 0, got {zeta_z!r}")
    return ThreeStepParams(zeta_plus=math.expm1(zeta_z), zeta_minus=-math.exp(-zeta_z), zeta_z=zeta_z)


def hamiltonian_from_zeta(zeta_z: float) -> HamiltonianParams:
    """Couplings reproducing :func:`breaching_three_step` as a single exponential.

    The ratio ``k_z / k_minus = (exp(-zeta_z) - 1) / 2`` lies in ``(-1/2, 0)``.
    """
    if not (zeta_z > 0):
        raise ValueError(f"zeta_z must be > 0, got {zeta_z!r}")
    d = math.exp(-zeta_z)
    one_minus_d = -math.expm1(-zeta_z)
    ratio = math.sqrt(one_minus_d / (d + 3))
    k_z = ratio * math.asin(0.5 * one_minus_d / ratio)
    return HamiltonianParams(k_plus=2 * k_z, k_minus=-2 * k_z / one_minus_d, k_z=k_z)


def is_plausible(m: AbcdMatrix, tol: float = PLAUSIBILITY_TOL) -> bool:
    """``a = c = 1``: vanishing probe noise gives vanishing precision and deviation."""
    return abs(m.a - 1) <= tol and abs(m.c - 1) <= tol


def onc_satisfied(m: AbcdMatrix, tol: float = PLAUSIBILITY_TOL) -> bool:
    """Whether a plausible interaction can have precision below posterior deviation.

    Raises
    ------
    NotPlausibleError
        If ``a = c = 1`` does not hold within ``tol``; the criterion
        ``|d| < 1`` only applies to plausible interactions.
    """
    if not is_plausible(m, tol):
        raise NotPlausibleError(f"plausibility a = c = 1 fails: a={m.a!r}, c={m.c!r}")
    return abs(m.d) < 1

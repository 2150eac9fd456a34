"""Elementary operators from which every reduction operator is composed.

A scheme's reduction operator at outcome ``x`` is an ordered tuple of these
factors, applied left to right to the system wavefunction.  The Gaussian and
grid executors both interpret the same tuple.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gaussian_states import GaussianState

__all__ = ["Dilation", "PositionShift", "GaussianFactor", "PointwiseFactor", "RankOne"]


@dataclass(frozen=True)
class Dilation:
    """Unitary ``psi(q) -> sqrt(lam) psi(lam q)``."""

    lam: float


@dataclass(frozen=True)
class PositionShift:
    """Unitary ``psi(q) -> psi(q - dq)``."""

    dq: float


@dataclass(frozen=True)
class GaussianFactor:
    """Multiplication by ``exp(-quadratic q**2 + linear q + const)``."""

    quadratic: complex
    linear: complex
    const: complex

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        return np.exp(-self.quadratic * q**2 + self.linear * q + self.const)


@dataclass(frozen=True)
class PointwiseFactor:
    """Multiplication by an arbitrary function of the position."""

    func: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, q):
        return self.func(np.asarray(q, dtype=float))


@dataclass(frozen=True)
class RankOne:
    """``psi -> psi(at) * target``: projection on ``|at>`` followed by preparation."""

    target: GaussianState
    at: float

"""Outcome distributions ``p(x | rho)`` of a single measurement."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["OutcomeDistribution"]


@dataclass(frozen=True)
class OutcomeDistribution:
    """Distribution of the raw readout ``x``.

    ``kind`` is ``"gaussian"`` (closed form, ``mean``/``variance`` exact) or
    ``"grid"`` (density tabulated on ``x``).  Readouts are in the scheme's
    native units; multiplying by ``scale`` gives a position estimate.
    """

    kind: str
    mean: float
    variance: float
    scale: float = 1.0
    x: np.ndarray | None = field(default=None, repr=False)
    density: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def gaussian(cls, mean: float, variance: float, scale: float = 1.0) -> "OutcomeDistribution":
        return cls("gaussian", float(mean), float(variance), float(scale))

    @classmethod
    def tabulated(cls, x, density, scale: float = 1.0) -> "OutcomeDistribution":
        x = np.array(x, dtype=float)
        density = np.clip(np.asarray(density, dtype=float), 0.0, None)
        density = density / np.trapezoid(density, x)
        mean = np.trapezoid(x * density, x)
        variance = np.trapezoid((x - mean) ** 2 * density, x)
        x.setflags(write=False)
        density.setflags(write=False)
        return cls("grid", float(mean), float(variance), float(scale), x, density)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def position_mean(self) -> float:
        return self.scale * self.mean

    @property
    def position_variance(self) -> float:
        return self.scale**2 * self.variance

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "gaussian":
            if self.variance == 0:
                raise ValueError("degenerate distribution has no density")
            return np.exp(-((x - self.mean) ** 2) / (2 * self.variance)) / math.sqrt(2 * math.pi * self.variance)
        return np.interp(x, self.x, self.density, left=0.0, right=0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "gaussian":
            z = (x - self.mean) / math.sqrt(2 * self.variance)
            return 0.5 * (1 + np.vectorize(math.erf)(z))
        return np.interp(x, self.x, self._cumulative(), left=0.0, right=1.0)

    def _cumulative(self):
        steps = 0.5 * (self.density[1:] + self.density[:-1]) * np.diff(self.x)
        cum = np.concatenate([[0.0], np.cumsum(steps)])
        return cum / cum[-1]

    def sample(self, rng: np.random.Generator, size=None):
        """Draw readouts: normal sampling, or inverse CDF on the tabulated density."""
        if self.kind == "gaussian":
            return rng.normal(self.mean, self.std, size)
        u = rng.random(size)
        return np.interp(u, self._cumulative(), self.x)

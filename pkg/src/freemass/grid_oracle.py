"""Brute-force wavefunctions on a uniform periodic position grid.

The grid engine interprets the same factor tuples as the closed-form Gaussian
path, so it serves as an independent check of every Gaussian result and as
the only executor for the non-Gaussian radiation-pressure kernels.

Integrals use the trapezoid rule on the periodic grid (a plain sum times the
spacing), which is spectrally accurate for smooth, decaying integrands.
Translations and dilatations act on the grid coordinates rather than on the
samples, so they are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import GridError, NormalizationError
from .factors import Dilation, GaussianFactor, PointwiseFactor, PositionShift, RankOne
from .gaussian_states import NATURAL, GaussianState, Moments, PhysicalUnits
from .gaussian_states import moments as gaussian_moments
from .outcomes import OutcomeDistribution

__all__ = [
    "Grid",
    "GridState",
    "GridReduction",
    "default_grid",
    "discretize",
    "free_evolve_grid",
    "apply_reduction_grid",
    "distribution_grid",
    "precision_grid",
    "posterior_deviation_grid",
    "completeness_grid",
    "moments_grid",
    "position_moments_grid",
    "evaluate_grid",
    "l2_distance",
    "dump_grid_text",
]

DEFAULT_POINTS = 4096
DEFAULT_OUTCOMES = 2048
DEFAULT_SIGMAS = 12.0
BOUNDARY_TOL = 1e-10
SPECTRAL_TOL = 1e-10
MAX_POINTS = 1 << 22


@dataclass(frozen=True)
class Grid:
    """``n_points`` samples ``q_min + j h`` with ``h = (q_max - q_min) / n_points``."""

    q_min: float
    q_max: float
    n_points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.q_max > self.q_min:
            raise GridError(f"need q_max > q_min, got [{self.q_min}, {self.q_max}]")
        n = self.n_points
        if n < 256 or n & (n - 1):
            raise GridError(f"n_points must be a power of two >= 256, got {n}")

    @classmethod
    def centered(cls, center: float, half_width: float, n_points: int = DEFAULT_POINTS) -> "Grid":
        return cls(center - half_width, center + half_width, n_points)

    @property
    def spacing(self) -> float:
        return (self.q_max - self.q_min) / self.n_points

    @property
    def points(self) -> np.ndarray:
        return self.q_min + self.spacing * np.arange(self.n_points)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n_points, self.spacing)

    def shifted(self, dq: float) -> "Grid":
        return Grid(self.q_min + dq, self.q_max + dq, self.n_points)

    def scaled(self, factor: float) -> "Grid":
        return Grid(self.q_min * factor, self.q_max * factor, self.n_points)


@dataclass(frozen=True)
class GridState:
    grid: Grid
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != (self.grid.n_points,):
            raise GridError(f"expected {self.grid.n_points} amplitudes, got shape {amp.shape}")
        if not np.all(np.isfinite(amp)):
            raise GridError("non-finite amplitudes")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.spacing)

    def normalized(self) -> "GridState":
        n2 = self.norm_squared
        if not n2 > 0:
            raise NormalizationError("cannot normalize a zero wavefunction")
        return GridState(self.grid, self.amplitudes / math.sqrt(n2))

    def boundary_ratio(self) -> float:
        mag = np.abs(self.amplitudes)
        peak = mag.max()
        if peak == 0:
            return 0.0
        edge = max(mag[:4].max(), mag[-4:].max())
        return float(edge / peak)

    def spectral_tail_ratio(self) -> float:
        spec = np.abs(np.fft.fft(self.amplitudes))
        k = np.abs(self.grid.wavenumbers)
        band = k >= 0.875 * k.max()
        return float(spec[band].max() / spec.max())


class GridReduction(NamedTuple):
    state: GridState
    weight: float


def _check_fits(gs: GridState, what: str):
    ratio = gs.boundary_ratio()
    if ratio > BOUNDARY_TOL:
        raise GridError(f"{what}: boundary amplitude {ratio:.2e} of peak exceeds {BOUNDARY_TOL:.0e}; widen the box")


def _check_band(gs: GridState, what: str):
    ratio = gs.spectral_tail_ratio()
    if ratio > SPECTRAL_TOL:
        raise GridError(f"{what}: spectral content {ratio:.2e} near Nyquist; refine the grid")


def default_grid(state: GaussianState, n_points: int = DEFAULT_POINTS, n_sigma: float = DEFAULT_SIGMAS) -> Grid:
    """Box of ``mean +- n_sigma`` amplitude standard deviations."""
    return Grid.centered(state.mean_position, n_sigma * state.std_q, n_points)


def discretize(state: GaussianState, grid: Grid | None = None, *, n_points: int = DEFAULT_POINTS) -> GridState:
    """Sample a Gaussian state pointwise on ``grid``.

    Raises
    ------
    GridError
        If the state is not contained in the box or not resolved by it.
    """
    grid = default_grid(state, n_points) if grid is None else grid
    gs = GridState(grid, state(grid.points))
    _check_fits(gs, "discretize")
    mo = gaussian_moments(state)
    k_needed = abs(state.mean_wavenumber) + 10 * math.sqrt(mo.var_p)
    if k_needed > math.pi / grid.spacing:
        raise GridError(f"discretize: wavenumber content up to {k_needed:.3g} exceeds Nyquist {math.pi / grid.spacing:.3g}")
    return gs


def position_moments_grid(gs: GridState):
    """``(mean_q, var_q)`` by quadrature."""
    w = np.abs(gs.amplitudes) ** 2
    total = w.sum()
    q = gs.points
    mean = float((q * w).sum() / total)
    return mean, float(((q - mean) ** 2 * w).sum() / total)


def moments_grid(gs: GridState, units: PhysicalUnits = NATURAL) -> Moments:
    """All five moments; momenta are evaluated spectrally."""
    _check_band(gs, "moments_grid")
    hbar = units.hbar
    psi = gs.amplitudes
    mean_q, var_q = position_moments_grid(gs)
    spec = np.fft.fft(psi)
    k = gs.grid.wavenumbers
    pk = np.abs(spec) ** 2
    mean_k = float((k * pk).sum() / pk.sum())
    var_k = float(((k - mean_k) ** 2 * pk).sum() / pk.sum())
    dpsi = np.fft.ifft(1j * k * spec)
    norm = float(np.sum(np.abs(psi) ** 2))
    dq = gs.points - mean_q
    cross = np.sum(np.conj(psi) * dq * (-1j * hbar) * (dpsi - 1j * mean_k * psi)) / norm
    return Moments(mean_q, var_q, hbar * mean_k, hbar**2 * var_k, float(cross.real))


def free_evolve_grid(gs: GridState, t: float, units: PhysicalUnits = NATURAL, *, n_sigma: float = DEFAULT_SIGMAS) -> GridState:
    """Spectral free propagation by ``exp(-i hbar k**2 t / 2m)``.

    The box is extended (same spacing, zero padding) so that the predicted
    evolved packet keeps ``n_sigma`` standard deviations on either side.
    """
    if t == 0:
        return gs
    _check_band(gs, "free_evolve_grid")
    mo = moments_grid(gs, units)
    s = t / units.mass
    mean_t = mo.mean_q + mo.mean_p * s
    std_t = math.sqrt(max(mo.var_q + 2 * mo.corr * s + mo.var_p * s**2, 0.0))
    h = gs.grid.spacing
    lo = min(gs.grid.q_min, mean_t - n_sigma * std_t)
    hi = max(gs.grid.q_max, mean_t + n_sigma * std_t)
    n_left = int(math.ceil((gs.grid.q_min - lo) / h))
    n_total = gs.grid.n_points + n_left + int(math.ceil((hi - gs.grid.q_max) / h))
    n_pow = 1 << (n_total - 1).bit_length()
    if n_pow > MAX_POINTS:
        raise GridError(f"free_evolve_grid: evolved packet needs {n_pow} points at the current spacing (cap {MAX_POINTS})")
    amp = np.zeros(n_pow, dtype=complex)
    amp[n_left : n_left + gs.grid.n_points] = gs.amplitudes
    q_min = gs.grid.q_min - n_left * h
    grid = Grid(q_min, q_min + n_pow * h, n_pow)
    k = grid.wavenumbers
    evolved = np.fft.ifft(np.fft.fft(amp) * np.exp(-0.5j * units.hbar * k**2 * s))
    out = GridState(grid, evolved)
    _check_fits(out, "free_evolve_grid")
    return out


def evaluate_grid(gs: GridState, x: float) -> complex:
    """Band-limited (trigonometric) interpolation of the amplitude at ``x``."""
    coeff = np.fft.fft(gs.amplitudes) / gs.grid.n_points
    return complex(np.sum(coeff * np.exp(1j * gs.grid.wavenumbers * (x - gs.grid.q_min))))


def _apply_factor(gs: GridState, f) -> GridState:
    if isinstance(f, Dilation):
        return GridState(gs.grid.scaled(1.0 / f.lam), gs.amplitudes * math.sqrt(f.lam))
    if isinstance(f, PositionShift):
        return GridState(gs.grid.shifted(f.dq), gs.amplitudes)
    if isinstance(f, (GaussianFactor, PointwiseFactor)):
        return GridState(gs.grid, gs.amplitudes * f(gs.points))
    if isinstance(f, RankOne):
        value = evaluate_grid(gs, f.at)
        target = discretize(f.target, n_points=gs.grid.n_points)
        return GridState(target.grid, target.amplitudes * value)
    raise TypeError(f"unknown factor {f!r}")


def apply_reduction_grid(scheme, gs: GridState, x: float) -> GridReduction:
    """Apply the reduction operator at outcome ``x`` and renormalize.

    Returns the normalized posterior together with the pre-normalization
    weight, which is the outcome density ``p(x | psi)`` in native units.
    """
    out = gs
    for f in scheme.factors(x):
        out = _apply_factor(out, f)
    weight = out.norm_squared
    if not weight > 0:
        raise NormalizationError(f"outcome {x!r} has zero probability density")
    return GridReduction(out.normalized(), weight)


def _pre_transform(scheme, gs: GridState) -> GridState:
    out = gs
    for f in scheme.pre_factors():
        out = _apply_factor(out, f)
    return out


def _outcome_axis(scheme, pre: GridState, n_outcomes: int, n_std: float = 8.0):
    w = np.abs(pre.amplitudes) ** 2
    mask = w > 1e-16 * w.max()
    mean, std = scheme.conditional_outcome(pre.points[mask])
    std = np.broadcast_to(std, mean.shape)
    return np.linspace((mean - n_std * std).min(), (mean + n_std * std).max(), n_outcomes), mask


def _kernel_rows(scheme, x, q, chunk: int = 128):
    for start in range(0, len(x), chunk):
        xs = x[start : start + chunk]
        yield start, np.abs(scheme.kernel(xs[:, None], q[None, :])) ** 2


def distribution_grid(scheme, gs: GridState, n_outcomes: int = DEFAULT_OUTCOMES) -> OutcomeDistribution:
    """Tabulate ``p(x) = integral |Omega(x; q) psi(q)|**2 dq`` on an outcome grid.

    The outcome axis covers the conditional means +- 8 conditional standard
    deviations over the support of the state.
    """
    if scheme.rank_one:
        p = np.abs(gs.amplitudes) ** 2
        return OutcomeDistribution.tabulated(gs.points, p / (p.sum() * gs.grid.spacing), scheme.outcome_scale)
    pre = _pre_transform(scheme, gs)
    x, mask = _outcome_axis(scheme, pre, n_outcomes)
    q = pre.points[mask]
    w = np.abs(pre.amplitudes[mask]) ** 2 * pre.grid.spacing
    density = np.empty(len(x))
    for start, K in _kernel_rows(scheme, x, q):
        density[start : start + len(K)] = K @ w
    mass = np.trapezoid(density, x)
    expected = pre.norm_squared
    if abs(mass - expected) > 1e-6 * expected:
        raise GridError(f"outcome grid lost {abs(mass - expected) / expected:.2e} of the probability mass")
    return OutcomeDistribution.tabulated(x, density / mass, scheme.outcome_scale)


def _original_coordinates(scheme, q):
    """Map kernel coordinates back through the pre-factors."""
    q = np.asarray(q, dtype=float)
    for f in reversed(scheme.pre_factors()):
        if isinstance(f, Dilation):
            q = q * f.lam
        elif isinstance(f, PositionShift):
            q = q - f.dq
    return q


def precision_grid(scheme, gs: GridState, n_outcomes: int = DEFAULT_OUTCOMES) -> float:
    """Double integral of ``(scale x - q)**2`` against ``|Omega(x; q) psi(q)|**2``."""
    if scheme.rank_one:
        return 0.0
    pre = _pre_transform(scheme, gs)
    x, mask = _outcome_axis(scheme, pre, n_outcomes)
    q = pre.points[mask]
    q_orig = _original_coordinates(scheme, q)
    w = np.abs(pre.amplitudes[mask]) ** 2 * pre.grid.spacing
    tw = np.full(len(x), x[1] - x[0])
    tw[[0, -1]] *= 0.5
    total = 0.0
    for start, K in _kernel_rows(scheme, x, q):
        xs = x[start : start + len(K)]
        err = (scheme.outcome_scale * xs[:, None] - q_orig[None, :]) ** 2
        total += float(tw[start : start + len(K)] @ ((K * err) @ w))
    return total / pre.norm_squared


def posterior_deviation_grid(scheme, gs: GridState, n_outcomes: int = DEFAULT_OUTCOMES) -> float:
    """Average of ``var_x + (mean_x - scale x)**2`` over the tabulated outcomes."""
    dist = distribution_grid(scheme, gs, n_outcomes)
    vals = np.empty(len(dist.x))
    for j, x in enumerate(dist.x):
        if dist.density[j] < 1e-14 * dist.density.max():
            vals[j] = 0.0
            continue
        post = apply_reduction_grid(scheme, gs, x).state
        mean, var = position_moments_grid(post)
        vals[j] = var + (mean - scheme.outcome_scale * x) ** 2
    return float(np.trapezoid(vals * dist.density, dist.x))


def completeness_grid(scheme, q, x) -> np.ndarray:
    """``integral dx |Omega(x; q)|**2`` for each kernel coordinate ``q``."""
    q = np.asarray(q, dtype=float)
    x = np.asarray(x, dtype=float)
    K = np.abs(scheme.kernel(x[:, None], q[None, :])) ** 2
    return np.trapezoid(K, x, axis=0)


def l2_distance(gs: GridState, state: GaussianState) -> float:
    """L2 distance between the normalized rays, after optimal global phase."""
    g = gs.amplitudes
    s = state(gs.points)
    h = gs.grid.spacing
    g = g / math.sqrt(np.sum(np.abs(g) ** 2) * h)
    s = s / math.sqrt(np.sum(np.abs(s) ** 2) * h)
    phase = np.angle(np.sum(np.conj(s) * g))
    return float(math.sqrt(np.sum(np.abs(g - np.exp(1j * phase) * s) ** 2) * h))


def dump_grid_text(gs: GridState, path, delimiter: str = ","):
    """Write ``q, Re psi, Im psi`` rows for plotting."""
    data = np.column_stack([gs.points, gs.amplitudes.real, gs.amplitudes.imag])
    np.savetxt(path, data, delimiter=delimiter, header=delimiter.join(["q", "re_psi", "im_psi"]), comments="")

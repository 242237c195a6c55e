"""Worst-case (minimum over input states) average fidelity and sweeps over channels."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ecs import EcsParams, check_channel_angles, concurrence_closed
from .errors import DomainError
from .protocol import StrategyId, fidelity_terms, select_strategy

TWO_PI = 2.0 * math.pi
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

GRID_OMEGA = 61
GRID_XI = 121
REFINE_WIDTH = 1e-7
MAX_STARTS = 4
MAX_SWEEPS = 200


def golden_section(f, a: float, b: float, tol: float = REFINE_WIDTH) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``.

    The interval is shrunk to width ``tol``; the better of its two ends
    and midpoint is returned so minima sitting on a bound are hit exactly.
    """
    h = b - a
    if h <= tol:
        xs = (a, b)
    else:
        n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
        c, d = a + INV_PHI2 * h, a + INV_PHI * h
        yc, yd = f(c), f(d)
        for _ in range(n - 1):
            if yc < yd:
                b, d, yd = d, c, yc
                h *= INV_PHI
                c = a + INV_PHI2 * h
                yc = f(c)
            else:
                a, c, yc = c, d, yd
                h *= INV_PHI
                d = a + INV_PHI * h
                yd = f(d)
        lo, hi = (a, d) if yc < yd else (c, b)
        xs = (lo, 0.5 * (lo + hi), hi)
    best = min(xs, key=f)
    return best, f(best)


@dataclass(frozen=True)
class MinFidelityResult:
    f_min: float
    omega_star: float
    xi_star: float
    strategy: StrategyId


@dataclass(frozen=True)
class SweepRecord:
    alpha_sq: float
    theta: float
    phi: float
    f_min: float
    omega_star: float
    xi_star: float
    concurrence: float


def _grid_local_minima(values: np.ndarray) -> list[tuple[int, int]]:
    """Indices no larger than their neighbours; omega is bounded, xi periodic."""
    padded = np.pad(values, ((1, 1), (0, 0)), constant_values=np.inf)
    centre = padded[1:-1]
    is_min = (
        (centre <= padded[:-2])
        & (centre <= padded[2:])
        & (centre <= np.roll(centre, 1, axis=1))
        & (centre <= np.roll(centre, -1, axis=1))
    )
    idx = np.argwhere(is_min)
    order = np.argsort(values[is_min], kind="stable")
    return [tuple(int(k) for k in idx[i]) for i in order]


def _refine(obj, omega: float, xi: float, value: float, h_omega: float, h_xi: float):
    """Coordinate descent, one golden-section line search per axis per sweep."""
    for _ in range(MAX_SWEEPS):
        start = value
        lo, hi = max(0.0, omega - h_omega), min(math.pi, omega + h_omega)
        w, v = golden_section(lambda t: obj(t, xi), lo, hi)
        # only move on strict improvement so flat directions keep the grid value
        if v < value - 1e-16:
            omega, value = w, v
        x, v = golden_section(lambda t: obj(omega, t), xi - h_xi, xi + h_xi)
        if v < value - 1e-16:
            xi, value = x % TWO_PI, v
        if start - value < 1e-15:
            break
    return omega, xi, value


def min_average_fidelity(
    p: EcsParams,
    strategy: StrategyId | None = None,
    n_omega: int = GRID_OMEGA,
    n_xi: int = GRID_XI,
) -> MinFidelityResult:
    """Minimum of the average fidelity over all input cat qubits.

    A coarse ``n_omega x n_xi`` grid over ``omega in [0, pi]`` and
    ``xi in [0, 2pi)`` seeds coordinate-descent refinement from the best few
    grid-local minima.
    """
    if strategy is None:
        strategy = select_strategy(p.phi)
    f = fidelity_terms(p.x, p.theta, p.phi, strategy)

    omegas = np.linspace(0.0, math.pi, n_omega)
    xis = TWO_PI * np.arange(n_xi) / n_xi
    cw, sw = np.cos(omegas)[:, None], np.sin(omegas)[:, None]
    cx, sx = np.cos(xis)[None, :], np.sin(xis)[None, :]
    grid = f(cw, sw, cx, sx)

    def obj(w: float, x: float) -> float:
        return f(math.cos(w), math.sin(w), math.cos(x), math.sin(x))

    h_omega, h_xi = omegas[1] - omegas[0], xis[1] - xis[0]
    best = None
    for i, j in _grid_local_minima(grid)[:MAX_STARTS]:
        cand = _refine(obj, float(omegas[i]), float(xis[j]), float(grid[i, j]), h_omega, h_xi)
        if best is None or cand[2] < best[2] - 1e-15:
            best = cand
    omega, xi, value = best
    return MinFidelityResult(float(value), float(omega), float(xi), StrategyId(strategy))


def _x_of(alpha_sq):
    a2 = np.asarray(getattr(alpha_sq, "mean_photon_number", alpha_sq), dtype=float)
    if np.any(a2 < 0) or not np.all(np.isfinite(a2)):
        raise DomainError("|alpha|^2 must be finite and >= 0")
    return np.exp(-a2)


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def fmin_nmecs_closed(alpha_sq):
    """Worst-case fidelity of the ``theta = pi/2, phi = 0`` channel; 1/2 at ``alpha = 0``."""
    x = _x_of(alpha_sq)
    x2 = x * x
    return _scalar(1.0 - x2 * (1.0 + x2) / (2.0 * (1.0 + x2 * x2)))


def fmin_mecs_closed(alpha_sq):
    """Worst-case fidelity of the maximally entangled ``theta = pi/2, phi = pi`` channel."""
    x2 = _x_of(alpha_sq) ** 2
    return _scalar(1.0 - 2.0 * x2 / (1.0 + x2) ** 2)


def fidelity_gap(alpha_sq):
    """``fmin_nmecs_closed - fmin_mecs_closed`` in factored form."""
    x2 = _x_of(alpha_sq) ** 2
    x4 = x2 * x2
    return _scalar(x2 * (3.0 + x4) * (1.0 - x2) / (2.0 * (1.0 + x4) * (1.0 + x2) ** 2))


def _sweep_point(args) -> SweepRecord:
    alpha_sq, theta, phi, n_omega, n_xi = args
    p = EcsParams.from_mean_photon_number(alpha_sq, theta, phi)
    r = min_average_fidelity(p, n_omega=n_omega, n_xi=n_xi)
    return SweepRecord(alpha_sq, theta, phi, r.f_min, r.omega_star, r.xi_star, concurrence_closed(p))


def sweep_surface(
    alpha_sq: float,
    theta_grid: Sequence[float],
    phi_grid: Sequence[float],
    workers: int = 1,
    n_omega: int = GRID_OMEGA,
    n_xi: int = GRID_XI,
) -> list[SweepRecord]:
    """Minimum average fidelity on a ``theta x phi`` grid, theta-major order."""
    alpha_sq = float(getattr(alpha_sq, "mean_photon_number", alpha_sq))
    if not alpha_sq > 0:
        raise DomainError(f"surface sweeps need |alpha|^2 > 0, got {alpha_sq}")
    if len(theta_grid) == 0 or len(phi_grid) == 0:
        raise DomainError("theta and phi grids must be nonempty")
    for t in theta_grid:
        for ph in phi_grid:
            check_channel_angles(float(t), float(ph))
    jobs = [(alpha_sq, float(t), float(ph), n_omega, n_xi) for t in theta_grid for ph in phi_grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves submission order, so output order is the grid order
            return list(pool.map(_sweep_point, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    return [_sweep_point(j) for j in jobs]


@dataclass(frozen=True)
class GapPoint:
    alpha_sq: float
    f1: float
    f2: float
    d: float


@dataclass(frozen=True)
class GapCurve:
    points: list[GapPoint]
    peak: GapPoint


def gap_curve(alpha_sq_range: tuple[float, float], steps: int) -> GapCurve:
    """Sample both closed-form worst-case fidelities and their gap at ``steps`` points."""
    lo, hi = (float(v) for v in alpha_sq_range)
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    if not (0.0 <= lo < hi and math.isfinite(hi)):
        raise DomainError(f"bad |alpha|^2 range [{lo}, {hi}]")
    a2 = np.linspace(lo, hi, steps)
    f1, f2 = fmin_nmecs_closed(a2), fmin_mecs_closed(a2)
    d = fidelity_gap(a2)
    points = [GapPoint(*map(float, row)) for row in zip(a2, f1, f2, d)]
    return GapCurve(points, points[int(np.argmax(d))])


def compare_strategies(p: EcsParams) -> dict[StrategyId, MinFidelityResult]:
    """Worst-case fidelity under each correction table, regardless of ``phi``."""
    return {s: min_average_fidelity(p, s) for s in StrategyId}

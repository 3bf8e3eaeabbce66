"""Euler-Maclaurin evaluation of zeta(s, alpha), truncated sums, time-grid
averages g_T / g_{T,N}, time moments and the hitting-density estimate.

Grid evaluations are cached per (sigma, alpha, grid, config) and computed by
the kernels module, so sweeping a w-grid reuses one set of node values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

# B_{2k} for 2k = 2..14 (14 only feeds the remainder bound)
_B2K = (
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6,
)
_MAX_ORDER = 12


class PoleAt1(Exception):
    """zeta(s, alpha) was requested at (or numerically at) s = 1."""


class ToleranceNotMet(Exception):
    """The error estimate could not be pushed below the requested tolerance."""


@dataclass(frozen=True)
class EMConfig:
    """Euler-Maclaurin settings: base truncation, Bernoulli order, tolerance."""

    truncation: int = 32
    order: int = 10
    tol: float = 1e-10

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation >= 1 required")
        if self.order < 2 or self.order % 2 or self.order > _MAX_ORDER:
            raise ValueError(f"order must be even, in [2, {_MAX_ORDER}]")
        if self.tol <= 0:
            raise ValueError("tol > 0 required")

    @property
    def n_bernoulli(self) -> int:
        return self.order // 2


DEFAULT_EM = EMConfig()


def _alpha_float(alpha) -> float:
    a = float(alpha)
    if not 0.0 < a <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    return a


def _remainder_bound(sigma: float, t: float, trunc: int, alpha: float, k: int) -> float:
    """Classical bound: |first omitted Bernoulli term| * |s+2K+1|/(sigma+2K+1)."""
    x = trunc + alpha
    s_abs = math.hypot(sigma, t)
    poch = 1.0
    for j in range(2 * k + 1):
        poch *= math.hypot(sigma + j, t)
    lead = abs(_B2K[k]) / math.factorial(2 * k + 2) * poch * x ** (-(sigma + 2 * k + 1))
    return lead * math.hypot(sigma + 2 * k + 1, t) / (sigma + 2 * k + 1)


def _choose_truncation(sigma: float, tmax: float, alpha: float, cfg: EMConfig) -> int:
    m = max(cfg.truncation, math.ceil(abs(tmax) / math.pi) + 10)
    while _remainder_bound(sigma, tmax, m, alpha, cfg.n_bernoulli) > cfg.tol:
        m *= 2
        if m > 1 << 26:
            raise ToleranceNotMet(
                f"EM remainder stuck above tol={cfg.tol} at truncation {m}")
    return m


def _term_arrays(alpha: float, sigma: float, m: int):
    n = np.arange(m, dtype=np.float64) + alpha
    return np.log(n), n ** -sigma


def hurwitz_zeta(s: complex, alpha_real: float, cfg: EMConfig = DEFAULT_EM) -> complex:
    """zeta(s, alpha) by Euler-Maclaurin with a certified remainder estimate."""
    s = complex(s)
    a = _alpha_float(alpha_real)
    if abs(s - 1.0) < 1e-12:
        raise PoleAt1("zeta(s, alpha) has its pole at s = 1")
    m = _choose_truncation(s.real, s.imag, a, cfg)
    logs, rads = _term_arrays(a, s.real, m)
    bof = np.array([_B2K[k - 1] / math.factorial(2 * k)
                    for k in range(1, cfg.n_bernoulli + 1)])
    out = kernels.zeta_em_nodes(np.array([s.imag]), s.real, a, logs, rads, bof)
    return complex(out[0])


def zeta_truncated(s: complex, alpha, n_trunc: int) -> complex:
    """Plain partial sum of (n + alpha)^(-s), n <= N."""
    a = _alpha_float(alpha)
    n = np.arange(n_trunc + 1) + a
    return complex(np.sum(n ** (-complex(s))))


@dataclass(frozen=True)
class TimeGrid:
    """Midpoint grid on [0, T]: nodes (j + 1/2) * (T / count)."""

    T: float
    count: int

    def __post_init__(self):
        if self.T <= 0 or self.count < 1:
            raise ValueError("need T > 0 and count >= 1")

    @staticmethod
    def with_step(T: float, step: float) -> "TimeGrid":
        count = max(1, round(T / step))
        return TimeGrid(T, count)

    @property
    def step(self) -> float:
        return self.T / self.count

    def nodes(self) -> np.ndarray:
        return (np.arange(self.count) + 0.5) * self.step

    def halved(self) -> "TimeGrid":
        return TimeGrid(self.T, 2 * self.count)


DEFAULT_STEP = 0.05

_node_cache: dict = {}


def _alpha_key(alpha):
    try:
        return ("ap", alpha.a, alpha.b, alpha.sign, alpha.d)
    except AttributeError:
        return ("f", float(alpha))


def zeta_nodes(sigma: float, alpha, grid: TimeGrid,
               cfg: EMConfig = DEFAULT_EM) -> np.ndarray:
    """zeta(sigma + i t, alpha) on all grid nodes (cached)."""
    key = ("em", sigma, _alpha_key(alpha), grid, cfg, kernels.BACKEND)
    hit = _node_cache.get(key)
    if hit is not None:
        return hit
    a = _alpha_float(alpha)
    if abs(sigma - 1.0) < 1e-12:
        raise PoleAt1("grid would cross s = 1")
    m = _choose_truncation(sigma, grid.T, a, cfg)
    logs, rads = _term_arrays(a, sigma, m)
    bof = np.array([_B2K[k - 1] / math.factorial(2 * k)
                    for k in range(1, cfg.n_bernoulli + 1)])
    vals = kernels.zeta_em_nodes(grid.nodes(), sigma, a, logs, rads, bof)
    _node_cache[key] = vals
    return vals


def zeta_truncated_nodes(sigma: float, alpha, n_trunc: int,
                         grid: TimeGrid) -> np.ndarray:
    key = ("tr", sigma, _alpha_key(alpha), n_trunc, grid, kernels.BACKEND)
    hit = _node_cache.get(key)
    if hit is not None:
        return hit
    a = _alpha_float(alpha)
    logs, rads = _term_arrays(a, sigma, n_trunc + 1)
    vals = kernels.zeta_trunc_nodes(grid.nodes(), logs, rads)
    _node_cache[key] = vals
    return vals


def psi_mean(values: np.ndarray, w: complex) -> complex:
    """Average of psi_w over an array of complex values."""
    return complex(np.mean(np.exp(1j * (values.real * w.real + values.imag * w.imag))))


def g_T(w: complex, sigma: float, alpha, grid: TimeGrid,
        cfg: EMConfig = DEFAULT_EM) -> complex:
    """Midpoint-rule time average of psi_w(zeta(sigma + i t, alpha))."""
    if sigma <= 0.5:
        raise ValueError("sigma > 1/2 required")
    return psi_mean(zeta_nodes(sigma, alpha, grid, cfg), w)


def g_TN(w: complex, sigma: float, alpha, n_trunc: int, grid: TimeGrid) -> complex:
    """Same average with the truncated sum zeta_N in place of zeta."""
    if sigma <= 0.5:
        raise ValueError("sigma > 1/2 required")
    return psi_mean(zeta_truncated_nodes(sigma, alpha, n_trunc, grid), w)


def time_moment(mu: int, nu: int, sigma: float, alpha, n_trunc: int,
                grid: TimeGrid) -> complex:
    """Quadrature of the mixed moment of zeta_N along the grid."""
    if mu < 0 or nu < 0 or mu + nu > 3:
        raise ValueError("mu + nu <= 3 required")
    if n_trunc > 64:
        raise ValueError("N <= 64 required")
    z = zeta_truncated_nodes(sigma, alpha, n_trunc, grid)
    return complex(np.mean(z ** mu * np.conj(z) ** nu))


def density_estimate(sigma: float, alpha, z0: complex, eps: float,
                     grid: TimeGrid, cfg: EMConfig = DEFAULT_EM) -> float:
    """Fraction of grid nodes with |zeta(sigma+it, alpha) - z0| < eps."""
    if eps < 0:
        raise ValueError("eps >= 0 required")
    if not 0.5 < sigma < 1.0:
        raise ValueError("sigma in (1/2, 1) required")
    if eps == 0.0:
        return 0.0
    z = zeta_nodes(sigma, alpha, grid, cfg)
    return float(np.mean(np.abs(z - z0) < eps))


def step_halving_gap(w: complex, sigma: float, alpha, grid: TimeGrid,
                     n_trunc: int | None = None,
                     cfg: EMConfig = DEFAULT_EM) -> float:
    """|g(step) - g(step/2)|, the step-acceptance measure."""
    if n_trunc is None:
        return abs(g_T(w, sigma, alpha, grid, cfg)
                   - g_T(w, sigma, alpha, grid.halved(), cfg))
    return abs(g_TN(w, sigma, alpha, n_trunc, grid)
               - g_TN(w, sigma, alpha, n_trunc, grid.halved()))


def clear_node_cache() -> None:
    _node_cache.clear()

"""The random model X_alpha(n): seeded phase assignments, truncated random
series samples, Monte Carlo characteristic functions, exact moments and the
all-arcs window event.

Phases are functions of (seed, stream id) through the counter-based mixer in
``kernels``; the i-th Monte Carlo sample uses the derived seed of index i, so
sample streams are reproducible and worker-count independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .quadfield import (
    UNIT_KEY,
    AlphaParam,
    OrdVector,
    factor_int,
    ord_vector,
)

TWO_PI = 2.0 * math.pi


def _lam_code(key: tuple) -> int:
    """Injective integer encoding of a stream key."""
    if key == UNIT_KEY:
        return 0
    if len(key) == 1:            # rational prime stream (the alpha = 1 model)
        return key[0] * 8 + 7
    p, split_type, which = key
    t = {"inert": 0, "ramified": 1, "split": 2}[split_type]
    return p * 8 + t * 2 + which + 1


def _lam_sort_key(key: tuple):
    return (0, 0, 0) if key == UNIT_KEY else (1, key[0], _lam_code(key))


@lru_cache(maxsize=1024)
def _rational_ord(n: int) -> tuple:
    """ord vector of the positive rational n+1 (the alpha = 1 degenerate case):
    plain prime exponents, no unit coordinate."""
    return tuple(sorted(factor_int(n + 1).items()))


@lru_cache(maxsize=256)
def shifted_ord(alpha: AlphaParam, n: int) -> OrdVector:
    return ord_vector(alpha.shifted(n), alpha.field)


class PhaseAssignment:
    """Lazily evaluated map (stream key) -> theta in [0, 2 pi), fixed by seed.

    Values are pure functions of (seed, key); the memo dict is write-once,
    so concurrent duplicate computation is harmless.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._memo: dict[tuple, float] = {}

    def theta(self, key: tuple) -> float:
        th = self._memo.get(key)
        if th is None:
            th = kernels.theta_scalar(self.seed, kernels.lam_hash(_lam_code(key)))
            self._memo[key] = th
        return th


def derived_seed(seed: int, index: int) -> int:
    """Per-sample seed for Monte Carlo sample `index`."""
    with np.errstate(over="ignore"):
        return int(kernels._sample_seed(np.uint64(seed), np.uint64(index)))


def sample_x(n: int, alpha, phases: PhaseAssignment) -> complex:
    """One realization of X_alpha(n) = prod_lam X(lam)^{ord(n+alpha, lam)}."""
    if n < 0:
        raise ValueError("n >= 0 required")
    if alpha == 1:
        phi = sum(a * phases.theta((p,)) for p, a in _rational_ord(n))
        return complex(math.cos(phi), math.sin(phi))
    vec = shifted_ord(alpha, n)
    phi = vec.unit_exp * phases.theta(UNIT_KEY)
    phi += sum(a * phases.theta(key) for key, a in vec.items())
    return complex(math.cos(phi), math.sin(phi))


def zeta_n_sample(sigma: float, n_trunc: int, alpha, phases: PhaseAssignment) -> complex:
    """One realization of the truncated random series sum_{n<=N} X(n)/(n+alpha)^sigma."""
    if sigma <= 0.5:
        raise ValueError("sigma > 1/2 required")
    af = 1.0 if alpha == 1 else float(alpha)
    return sum(sample_x(n, alpha, phases) * (n + af) ** -sigma
               for n in range(n_trunc + 1))


@dataclass(frozen=True)
class ModelTable:
    """Sparse ord-exponent table of (n + alpha) for 0 <= n <= N, kernel-ready."""

    lam_keys: tuple
    lam_ids: np.ndarray        # uint64 (L,)
    indptr: np.ndarray         # int64 (N+2,)
    cols: np.ndarray           # int64 (nnz,)
    vals: np.ndarray           # float64 (nnz,)

    def weights(self, sigma: float, alpha) -> np.ndarray:
        af = 1.0 if alpha == 1 else float(alpha)
        n = self.indptr.shape[0] - 1
        return (np.arange(n) + af) ** -sigma

    def coeff_vector(self, rows: list[int], exps: list[int]) -> np.ndarray:
        """Column-space coefficients of sum_j e_j * ord(row_j)."""
        c = np.zeros(len(self.lam_keys))
        for r, e in zip(rows, exps):
            for k in range(self.indptr[r], self.indptr[r + 1]):
                c[self.cols[k]] += e * self.vals[k]
        return c


@lru_cache(maxsize=64)
def model_table(alpha, n_trunc: int) -> ModelTable:
    rows = []
    keys: set[tuple] = set()
    for n in range(n_trunc + 1):
        if alpha == 1:
            entries = {(p,): a for p, a in _rational_ord(n)}
        else:
            vec = shifted_ord(alpha, n)
            entries = dict(vec.items())
            if vec.unit_exp:
                entries[UNIT_KEY] = vec.unit_exp
        rows.append(entries)
        keys |= set(entries)
    lam_keys = tuple(sorted(keys, key=_lam_sort_key))
    index = {k: i for i, k in enumerate(lam_keys)}
    indptr = [0]
    cols: list[int] = []
    vals: list[float] = []
    for entries in rows:
        for key in sorted(entries, key=_lam_sort_key):
            cols.append(index[key])
            vals.append(float(entries[key]))
        indptr.append(len(cols))
    lam_ids = np.array([kernels.lam_hash(_lam_code(k)) for k in lam_keys],
                       dtype=np.uint64)
    return ModelTable(lam_keys, lam_ids, np.array(indptr, dtype=np.int64),
                      np.array(cols, dtype=np.int64), np.array(vals))


def draw_samples(sigma: float, n_trunc: int, alpha, m_samples: int,
                 seed: int) -> np.ndarray:
    """M independent samples of zeta_N(sigma, X_alpha); sample i is a pure
    function of (seed, i), so any partition over workers reproduces it."""
    if m_samples < 1:
        raise ValueError("M >= 1 required")
    if sigma <= 0.5:
        raise ValueError("sigma > 1/2 required")
    tab = model_table(alpha, n_trunc)
    return kernels.model_samples(seed, tab.lam_ids, tab.indptr, tab.cols,
                                 tab.vals, tab.weights(sigma, alpha), m_samples)


def empirical_char(w: complex, samples: np.ndarray) -> complex:
    """Mean of psi_w(z) = exp(i Re(z conj(w))) over the samples."""
    if len(samples) == 0:
        raise ValueError("empty sample set")
    z = np.asarray(samples)
    return complex(np.mean(np.exp(1j * (z.real * w.real + z.imag * w.imag))))


def power_moment_mc(rows: list[int], exps: list[int], alpha, m_samples: int,
                    seed: int, n_trunc: int | None = None) -> complex:
    """Monte Carlo estimate of E[prod_j X_alpha(row_j)^{e_j}]."""
    top = max(rows) if n_trunc is None else n_trunc
    tab = model_table(alpha, top)
    coeffs = tab.coeff_vector(rows, exps)
    return complex(kernels.power_mean(seed, tab.lam_ids, coeffs, m_samples))


def moment_exact(mu: int, nu: int, sigma: float, n_trunc: int, alpha) -> float:
    """E[zeta_N^mu conj(zeta_N)^nu] as the exact relation-tuple sum."""
    if mu < 0 or nu < 0 or mu + nu > 3:
        raise ValueError("need mu, nu >= 0 with mu + nu <= 3")
    if n_trunc > 64:
        raise ValueError("N <= 64 required (cost grows like (N+1)^(mu+nu))")
    if alpha == 1:
        raise ValueError("exact moments are defined here for quadratic alpha")
    af = float(alpha)
    vecs = [shifted_ord(alpha, n) for n in range(n_trunc + 1)]

    def side(count: int, sign: int):
        """Vector-sum key -> total weight, over ordered index tuples."""
        empty = OrdVector(vecs[0].d2 if vecs else 0, (), 0)
        states = {_vec_key(empty): (empty, 1.0)}
        out: dict = {}
        for _ in range(count):
            nxt: dict = {}
            for _, (vec, wsum) in states.items():
                for n in range(n_trunc + 1):
                    nv = OrdVector.combine([(1, vec), (sign, vecs[n])])
                    w = wsum * (n + af) ** -sigma
                    k = _vec_key(nv)
                    if k in nxt:
                        old_vec, old_w = nxt[k]
                        nxt[k] = (old_vec, old_w + w)
                    else:
                        nxt[k] = (nv, w)
            states = nxt
        for k, (vec, w) in states.items():
            out[k] = out.get(k, 0.0) + w
        return out

    left = side(mu, +1)
    right = side(nu, -1)
    total = 0.0
    for k, w in left.items():
        # relation: sum of mu-side vector with nu-side vector equals zero,
        # i.e. left key must equal the negation of the right key
        kw = right.get(_negate_key(k))
        if kw is not None:
            total += w * kw
    return total


def _vec_key(vec: OrdVector) -> tuple:
    return vec.prime_part + (("unit", vec.unit_exp),)


def _negate_key(key: tuple) -> tuple:
    return tuple((k, -a) for k, a in key[:-1]) + (("unit", -key[-1][1]),)


@dataclass(frozen=True)
class OmegaWindow:
    """The all-arcs event: X_alpha(n) within 2*pi*delta of theta_n for n <= N."""

    centers: tuple          # theta_n, 0 <= n <= N
    delta: float

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValueError("delta must lie in (0, 1/2)")

    @property
    def halfwidth(self) -> float:
        return TWO_PI * self.delta


def omega0_probability(n_trunc: int, delta: float, alpha, centers,
                       m_samples: int, seed: int) -> dict:
    """MC probability that every X_alpha(n) lands in its arc, next to the
    independence prediction (2 delta)^(N+1)."""
    window = OmegaWindow(tuple(float(c) for c in centers), delta)
    if len(window.centers) != n_trunc + 1:
        raise ValueError("need one center per 0 <= n <= N")
    tab = model_table(alpha, n_trunc)
    hits = kernels.omega0_hits(seed, tab.lam_ids, tab.indptr, tab.cols, tab.vals,
                               np.array(window.centers), window.halfwidth,
                               m_samples)
    p_hat = hits / m_samples
    pred = (2.0 * delta) ** (n_trunc + 1)
    return {
        "mc_estimate": p_hat,
        "independent_prediction": pred,
        "hits": hits,
        "samples": m_samples,
        "mc_sigma": math.sqrt(max(pred * (1 - pred), p_hat * (1 - p_hat)) / m_samples),
        "zero_hits": hits == 0,
    }


def hit_probability(samples: np.ndarray, z0: complex, eps: float) -> float:
    """Fraction of samples inside the open disc |z - z0| < eps."""
    if eps <= 0:
        raise ValueError("eps > 0 required")
    z = np.asarray(samples)
    return float(np.mean(np.abs(z - z0) < eps))


def find_center_phases(sigma: float, n_trunc: int, alpha, z0: complex,
                       n_search: int, seed: int) -> dict:
    """Search MC outcomes for one with zeta_N close to z0 and record the
    phase angles of its X_alpha(n); these become Omega_0 centers."""
    tab = model_table(alpha, n_trunc)
    weights = tab.weights(sigma, alpha)
    best = (math.inf, -1, None)
    chunk = 8192
    for lo in range(0, n_search, chunk):
        hi = min(lo + chunk, n_search)
        theta = kernels.phase_block(seed, tab.lam_ids, lo, hi)
        n_rows = len(tab.indptr) - 1
        phis = np.zeros((hi - lo, n_rows))
        for r in range(n_rows):
            for k in range(tab.indptr[r], tab.indptr[r + 1]):
                phis[:, r] += tab.vals[k] * theta[:, tab.cols[k]]
        zs = (np.exp(1j * phis) * weights).sum(axis=1)
        d = np.abs(zs - z0)
        j = int(np.argmin(d))
        if d[j] < best[0]:
            best = (float(d[j]), lo + j, np.mod(phis[j], TWO_PI).copy())
    dist, idx, phases = best
    return {"centers": phases, "distance": dist, "sample_index": idx}


def support_radius_check(n: int, sigma: float, alpha) -> dict:
    """The K_alpha mass b_N and the no-single-term-dominates condition."""
    from .cassels import k_alpha_set, weighted_sum

    kset = k_alpha_set(n, alpha)
    if not kset:
        return {"b_N": 0.0, "single_term_dominates": False, "margin": 0.0,
                "k_size": 0}
    b_n = weighted_sum(kset, sigma, alpha)
    af = float(alpha)
    top = 2.0 * (min(kset) + af) ** -sigma
    return {
        "b_N": b_n,
        "single_term_dominates": top > b_n,
        "margin": b_n - top,
        "k_size": len(kset),
    }

"""Experiment orchestration: multiplicative-relation detection through exact
integer kernels of ord matrices, the limit-theorem comparison ladder, and the
denseness sweep over a two-parameter family of quadratic irrationals.

Relation search is exact end to end: the ord matrix has integer entries, its
left kernel is computed by unimodular row reduction (so the basis spans the
full kernel lattice), bounded vectors are enumerated inside an exact
coefficient box, and every reported relation is re-verified by multiplying
exact field elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .quadfield import UNIT_KEY, AlphaParam
from .random_model import (
    draw_samples,
    empirical_char,
    shifted_ord,
)
from .zeta import TimeGrid, density_estimate, g_TN, hurwitz_zeta, zeta_truncated

KERNEL_ENUM_BUDGET = 2_000_000


class BudgetExceeded(Exception):
    """A relation-search enumeration outgrew its configured budget."""


def ord_matrix(alpha: AlphaParam, rows: list[int]) -> tuple[list[list[int]], list]:
    """Integer matrix whose r-th row is ord(rows[r] + alpha) over the union
    of touched stream keys (unit coordinate last)."""
    vecs = [shifted_ord(alpha, n) for n in rows]
    keys = sorted({k for v in vecs for k, _ in v.items()})
    cols = {k: i for i, k in enumerate(keys)}
    width = len(keys) + 1
    mat = []
    for v in vecs:
        row = [0] * width
        for k, a in v.items():
            row[cols[k]] = a
        row[-1] = v.unit_exp
        mat.append(row)
    return mat, keys + [UNIT_KEY]


def left_kernel_basis(mat: list[list[int]]) -> list[list[int]]:
    """Basis of {v in Z^rows : v^T mat = 0} via tracked unimodular row ops.

    The kernel of an integer linear map is saturated, and the rows of the
    transform matrix sitting over zero rows of the echelon form span it.
    """
    n = len(mat)
    if n == 0:
        return []
    width = len(mat[0])
    a = [list(row) for row in mat]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivot_row = 0
    for col in range(width):
        # find a pivot and clear the column below/above by gcd steps
        if pivot_row >= n:
            break
        rows_with = [r for r in range(pivot_row, n) if a[r][col]]
        if not rows_with:
            continue
        r0 = min(rows_with, key=lambda r: abs(a[r][col]))
        a[pivot_row], a[r0] = a[r0], a[pivot_row]
        u[pivot_row], u[r0] = u[r0], u[pivot_row]
        while True:
            dirty = False
            for r in range(pivot_row + 1, n):
                if a[r][col]:
                    q = a[r][col] // a[pivot_row][col]
                    if q:
                        a[r] = [x - q * y for x, y in zip(a[r], a[pivot_row])]
                        u[r] = [x - q * y for x, y in zip(u[r], u[pivot_row])]
                    if a[r][col]:
                        a[pivot_row], a[r] = a[r], a[pivot_row]
                        u[pivot_row], u[r] = u[r], u[pivot_row]
                        dirty = True
            if not dirty:
                break
        pivot_row += 1
    return [u[r] for r in range(n) if not any(a[r])]


def _enumerate_bounded(basis: list[list[int]], bound: int) -> list[tuple[int, ...]]:
    """All nonzero lattice vectors with sup-norm <= bound, via an exact
    coefficient box from the pseudo-inverse of the basis."""
    if not basis:
        return []
    r = len(basis)
    n = len(basis[0])
    b = [[Fraction(x) for x in row] for row in basis]
    gram = [[sum(b[i][k] * b[j][k] for k in range(n)) for j in range(r)] for i in range(r)]
    ginv = _fraction_inverse(gram)
    # c = (B B^T)^{-1} B v^T, so |c_i| <= bound * ||row_i of (BB^T)^{-1}B||_1
    limits = []
    for i in range(r):
        row = [sum(ginv[i][j] * b[j][k] for j in range(r)) for k in range(n)]
        limits.append(int(math.floor(bound * sum(abs(x) for x in row))) )
    total = 1
    for lim in limits:
        total *= 2 * lim + 1
        if total > KERNEL_ENUM_BUDGET:
            raise BudgetExceeded(f"coefficient box of size {total} too large")
    out = []
    coeffs = [0] * r

    def rec(i):
        if i == r:
            v = [0] * n
            for j in range(r):
                if coeffs[j]:
                    for k in range(n):
                        v[k] += coeffs[j] * basis[j][k]
            if any(v) and max(abs(x) for x in v) <= bound:
                out.append(tuple(v))
            return
        for c in range(-limits[i], limits[i] + 1):
            coeffs[i] = c
            rec(i + 1)

    rec(0)
    return out


def _fraction_inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    r = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(m)]
    for col in range(r):
        piv = next(i for i in range(col, r) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(r):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[r:] for row in aug]


@dataclass(frozen=True)
class RelationBasis:
    rows: tuple
    kernel: tuple          # tuple of integer tuples
    coeff_bound: int

    @property
    def rank(self) -> int:
        return len(self.kernel)


def relation_basis(alpha: AlphaParam, rows: list[int], coeff_bound: int) -> RelationBasis:
    mat, _ = ord_matrix(alpha, rows)
    basis = left_kernel_basis(mat)
    return RelationBasis(tuple(rows), tuple(tuple(v) for v in basis), coeff_bound)


def element_relation_search(field, elems, coeff_bound: int) -> list[tuple[int, ...]]:
    """Kernel search over arbitrary positive field elements (the field-level
    variant of detect_e1; used for degree-2 algebraic integers like sqrt(2))."""
    from .quadfield import ord_vector

    vecs = [ord_vector(y, field) for y in elems]
    keys = sorted({k for v in vecs for k, _ in v.items()})
    cols = {k: i for i, k in enumerate(keys)}
    mat = []
    for v in vecs:
        row = [0] * (len(keys) + 1)
        for k, a in v.items():
            row[cols[k]] = a
        row[-1] = v.unit_exp
        mat.append(row)
    found = _enumerate_bounded(left_kernel_basis(mat), coeff_bound)
    for vec in found:
        prod = field.one()
        for y, e in zip(elems, vec):
            if e:
                prod = prod * (y ** int(e))
        assert prod.is_one(), "kernel vector failed exact product"
    return sorted(found)


def _verify_relation(alpha: AlphaParam, rows: list[int], vec) -> bool:
    prod = alpha.field.one()
    for n, e in zip(rows, vec):
        if e:
            prod = prod * (alpha.shifted(n) ** int(e))
    return prod.is_one()


def detect_e1(alpha: AlphaParam, n_top: int, coeff_bound: int) -> list[tuple[int, ...]]:
    """All nonzero exponent vectors (m_0..m_N), sup-norm <= bound, with
    prod (n+alpha)^{m_n} = 1; empty output certifies relation-freeness at
    these bounds."""
    if n_top > 30 or coeff_bound > 10:
        raise BudgetExceeded("detect_e1 budget: N <= 30 and bound <= 10")
    rows = list(range(n_top + 1))
    rb = relation_basis(alpha, rows, coeff_bound)
    found = _enumerate_bounded([list(v) for v in rb.kernel], coeff_bound)
    for v in found:
        assert _verify_relation(alpha, rows, v), "kernel vector failed exact product"
    return sorted(found)


def detect_e2(alpha: AlphaParam, n_top: int, l_top: int,
              coeff_bound: int) -> list[dict]:
    """Solutions of (n2+alpha)/(n1+alpha) = prod_{n<=N} (n+alpha)^{m_n} with
    N < n1 != n2 <= L, found as kernel vectors with a one-hot tail."""
    if not n_top < l_top <= 60:
        raise BudgetExceeded("detect_e2 budget: N < L <= 60")
    if n_top > 30 or coeff_bound > 10:
        raise BudgetExceeded("detect_e2 budget: N <= 30 and bound <= 10")
    rows = list(range(l_top + 1))
    rb = relation_basis(alpha, rows, max(coeff_bound, 1))
    found = _enumerate_bounded([list(v) for v in rb.kernel], max(coeff_bound, 1))
    out = []
    for v in found:
        tail = v[n_top + 1:]
        nz = [i for i, x in enumerate(tail) if x]
        if len(nz) != 2:
            continue
        i, j = nz
        if {tail[i], tail[j]} != {1, -1}:
            continue
        n1 = n_top + 1 + (i if tail[i] == -1 else j)
        n2 = n_top + 1 + (i if tail[i] == 1 else j)
        ms = [-x for x in v[: n_top + 1]]
        assert _verify_relation(alpha, rows, v)
        out.append({"n1": n1, "n2": n2, "m": ms})
    return sorted(out, key=lambda d: (d["n1"], d["n2"], tuple(d["m"])))


# ---------------------------------------------------------------------------
# experiment drivers


def _w_grid(wmax: float, count: int) -> np.ndarray:
    """Deterministic spiral covering |w| <= wmax, including w = 0."""
    k = np.arange(count, dtype=float)
    r = wmax * k / (count - 1) if count > 1 else np.zeros(1)
    ang = 2.399963229728653 * k  # golden angle, spreads directions
    return r * np.exp(1j * ang)


def run_limit_experiment(config: dict) -> dict:
    """sup_w |g_{T,N} - empirical char of zeta_N(sigma, X_alpha)| on a T ladder."""
    alpha = AlphaParam.make(config["a"], config["b"], config["sign"], config["d"])
    sigma = float(config["sigma"])
    n_trunc = int(config["N"])
    t_list = [float(t) for t in config["T_list"]]
    m_samples = int(config["M"])
    seed = int(config["seed"])
    step = float(config.get("step", 0.05))
    wmax = float(config.get("wmax", 3.0))
    wcount = int(config.get("wcount", 25))
    ws = _w_grid(wmax, wcount)

    samples = draw_samples(sigma, n_trunc, alpha, m_samples, seed)
    ghat = np.array([empirical_char(w, samples) for w in ws])

    af = float(alpha)
    tail_sq = float(
        (hurwitz_zeta(2.0 * sigma, af) - zeta_truncated(2.0 * sigma, af, n_trunc)).real)
    ladder = []
    for t_hor in t_list:
        grid = TimeGrid.with_step(t_hor, step)
        gtn = np.array([g_TN(w, sigma, alpha, n_trunc, grid) for w in ws])
        diffs = np.abs(gtn - ghat)
        ladder.append({
            "T": t_hor,
            "sup_diff": float(np.max(diffs)),
            "diff_at_zero": float(diffs[0]),
            "mean_diff": float(np.mean(diffs)),
        })
    return {
        "schema": "v1",
        "kind": "limit",
        "alpha": {"a": alpha.a, "b": alpha.b,
                  "sign": "+" if alpha.sign > 0 else "-", "d": alpha.d},
        "sigma": sigma,
        "N": n_trunc,
        "M": m_samples,
        "seed": seed,
        "step": step,
        "w_grid": {"wmax": wmax, "count": wcount},
        "mc_sigma": 1.0 / math.sqrt(m_samples),
        "truncation_tail_sq": tail_sq,
        "ladder": ladder,
        "nonincreasing_within_noise": bool(
            all(ladder[i + 1]["sup_diff"] <= ladder[i]["sup_diff"] + 0.01
                for i in range(len(ladder) - 1))),
    }


def run_dense_experiment(config: dict) -> dict:
    """Per-alpha hitting densities over the family, with exceptional flags."""
    from .cassels import enumerate_A_cd

    c = float(config["c"])
    d = int(config["d"])
    a_max = int(config["a_max"])
    sigma = float(config["sigma"])
    z0 = complex(config.get("z0_re", 1.0), config.get("z0_im", 0.0))
    eps = float(config["eps"])
    t_hor = float(config["T"])
    step = float(config.get("step", 0.05))
    e1_n = int(config.get("e1_N", 3))
    e1_bound = int(config.get("e1_bound", 5))
    e2_l = int(config.get("e2_L", 12))

    grid = TimeGrid.with_step(t_hor, step)
    rows = []
    for alpha in enumerate_A_cd(c, d, a_max):
        rel1 = detect_e1(alpha, e1_n, e1_bound)
        rel2 = detect_e2(alpha, e1_n, e2_l, e1_bound)
        dens = density_estimate(sigma, alpha, z0, eps, grid)
        rows.append({
            "alpha": {"a": alpha.a, "b": alpha.b,
                      "sign": "+" if alpha.sign > 0 else "-", "d": alpha.d},
            "alpha_float": float(alpha),
            "density": dens,
            "positive": bool(dens > 0.0),
            "e1_relations": len(rel1),
            "e2_relations": len(rel2),
            "exceptional_flag": bool(rel1 or rel2),
        })
    non_exceptional = [r for r in rows if not r["exceptional_flag"]]
    return {
        "schema": "v1",
        "kind": "dense",
        "c": c,
        "d": d,
        "a_max": a_max,
        "sigma": sigma,
        "z0": [z0.real, z0.imag],
        "eps": eps,
        "T": t_hor,
        "step": step,
        "relation_budgets": {"e1_N": e1_n, "e1_bound": e1_bound, "e2_L": e2_l},
        "alphas": rows,
        "all_non_exceptional_positive": bool(
            all(r["positive"] for r in non_exceptional)) if non_exceptional else False,
    }

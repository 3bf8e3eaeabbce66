"""Cassels-variant machinery: decompositions of (n+alpha)*a, the index sets
L, M, K_alpha, S_alpha, T_alpha, weighted sums, rho and the sigma statistics.

Per-n decompositions are exact.  Two independent routes exist and are
cross-checked in tests: `decompose_n` factors one norm by trial division,
while `AlphaContext.factor_range` sieves arithmetic progressions of n for
every candidate prime (fast enough for N log N ~ 1.5e4 in seconds).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy.ntheory.residue_ntheory import sqrt_mod

from .quadfield import (
    AlphaParam,
    IdealHNF,
    PrimeIdealRecord,
    QuadElem,
    _sieve_primes,
    elem_valuation,
    factor_int,
    ideal_denominator,
    make_field,
    prime_ideals_above,
)


def m_upper(n: int) -> int:
    """floor(N * ln N), the shared upper index of L(N) and M(N)."""
    if n < 3:
        raise ValueError("N >= 3 required")
    return math.floor(n * math.log(n))


def range_L(n: int) -> list[int]:
    """L(N) = {N < m <= N log N} (possibly empty at the N=3 boundary)."""
    return list(range(n + 1, m_upper(n) + 1))


def range_M(n: int) -> list[int]:
    """M(N) = {0 <= m <= N log N}."""
    return list(range(0, m_upper(n) + 1))


@dataclass(frozen=True)
class CasselsDecomposition:
    n: int
    xy: int                                    # x_n * y_n, a positive integer
    b_ideal: IdealHNF                          # the bounded ramified leftover
    s_part: tuple                              # ((split record, u_n), ...) sorted

    def s_dict(self) -> dict[PrimeIdealRecord, int]:
        return dict(self.s_part)

    def bounded_norm(self) -> int:
        """N((x_n y_n) b_n), the quantity bounded by 16 d."""
        return self.xy * self.xy * self.b_ideal.norm


class AlphaContext:
    """Per-alpha data: the ideal denominator and fast per-range factorization."""

    def __init__(self, alpha: AlphaParam):
        self.alpha = alpha
        self.field = alpha.field
        self.a_ideal = ideal_denominator(alpha)
        self.a_norm = self.a_ideal.norm
        self.a_factors = {rec: v for rec, v in _factor_known(self.a_ideal, self.field).items()}
        # special primes handled per-n exactly rather than by the sieve
        spec = set(factor_int(2 * alpha.a * self.field.disc * max(self.field.d1, 1)))
        spec |= {rec.p for rec in self.a_factors}
        self.special_primes = sorted(spec)

    # -- exact single-n route -------------------------------------------------

    def shifted_norm(self, n: int) -> int:
        """|N((n + alpha) a)| as an exact integer."""
        val = abs((self.alpha.shifted(n)).norm() * self.a_norm)
        assert val.denominator == 1
        return int(val)

    def factor_n(self, n: int) -> dict[PrimeIdealRecord, int]:
        """Prime-ideal factorization of (n + alpha) * a by norm trial division."""
        g = self.shifted_norm(n)
        out: dict[PrimeIdealRecord, int] = {}
        shifted = self.alpha.shifted(n)
        for p in sorted(factor_int(g)):
            for rec in prime_ideals_above(p, self.field):
                v = elem_valuation(shifted, rec) + self.a_factors.get(rec, 0)
                if v:
                    out[rec] = v
        return out

    # -- sieve route over a whole range ----------------------------------------

    def factor_range(self, n_max: int) -> list[dict[PrimeIdealRecord, int]]:
        """Factorizations of (n + alpha) a for all 0 <= n <= n_max.

        Sieves n-progressions per candidate prime: for generic p, the
        valuation pattern of n + alpha follows Hensel-lifted roots of
        (a n + b)^2 = d (mod p^k).
        """
        alpha = self.alpha
        a, b, d = alpha.a, alpha.b, alpha.d
        sgn = alpha.sign
        f_vals = [abs((a * n + b) ** 2 - d) for n in range(n_max + 1)]
        out: list[dict[PrimeIdealRecord, int]] = [dict() for _ in range(n_max + 1)]

        # special primes exactly, and strip them from the residuals
        for p in self.special_primes:
            recs = prime_ideals_above(p, self.field)
            for n in range(n_max + 1):
                shifted = alpha.shifted(n)
                for rec in recs:
                    v = elem_valuation(shifted, rec) + self.a_factors.get(rec, 0)
                    if v:
                        out[n][rec] = v
                while f_vals[n] % p == 0:
                    f_vals[n] //= p

        fmax = max(f_vals) if f_vals else 1
        sieve_bound = max(2, math.isqrt(fmax))
        special = set(self.special_primes)
        d1 = self.field.d1
        for p in _sieve_primes(sieve_bound):
            if p in special:
                continue
            r = sqrt_mod(d % p, p)
            if r is None:
                continue  # p inert, divides no f_vals
            # sqrt(d2) branch of the record, as a residue mod p
            by_s = {}
            for rec in prime_ideals_above(p, self.field):
                if rec.split_type != "split":
                    continue
                s2 = rec.root if self.field.omega_kind == "sqrt" \
                    else (2 * rec.root - 1) % p
                by_s[s2 % p] = rec
            for s_root in {r % p, (-r) % p}:
                # numerator a n + b + sgn*d1*sqrt(d2) = 0 mod P^k requires
                # sqrt(d) = -s_root branch: sgn*d1*s2(rec) = s_root (mod p)
                rec = by_s.get(sgn * pow(d1, -1, p) * s_root % p)
                if rec is None:
                    continue
                pk, s_k = p, s_root
                while pk <= fmax:
                    n0 = ((-s_k - b) * pow(a, -1, pk)) % pk
                    for n in range(n0, n_max + 1, pk):
                        out[n][rec] = out[n].get(rec, 0) + 1
                        f_vals[n] //= p
                    # Hensel lift s_k to a root of x^2 = d mod p^{k+1}
                    pk_next = pk * p
                    if pk_next > fmax:
                        break
                    inv2s = pow(2 * s_k, -1, pk_next)
                    s_k = (s_k - (s_k * s_k - d) * inv2s) % pk_next
                    pk = pk_next
        # leftovers are single large split primes (p > sqrt(fmax) forces v = 1)
        for n in range(n_max + 1):
            rest = f_vals[n]
            if rest == 1:
                continue
            p = rest
            hit = None
            for rec in prime_ideals_above(p, self.field):
                if rec.split_type != "split":
                    continue
                s2 = rec.root if self.field.omega_kind == "sqrt" \
                    else (2 * rec.root - 1) % p
                if (a * n + b + sgn * d1 * s2) % p == 0:
                    hit = rec
                    break
            assert hit is not None, f"leftover prime {p} did not match a split ideal"
            out[n][hit] = out[n].get(hit, 0) + 1
        return out

    def decompose(self, n: int,
                  factors: dict[PrimeIdealRecord, int] | None = None) -> CasselsDecomposition:
        if factors is None:
            factors = self.factor_n(n)
        xy = 1
        b_ideal = IdealHNF(self.field, 1, 0, 1)
        s_part = []
        for rec, u in sorted(factors.items(), key=lambda kv: (kv[0].p, kv[0].which)):
            assert u > 0, "shifted ideal must be integral"
            if rec.split_type == "inert":
                xy *= rec.p ** u
            elif rec.split_type == "ramified":
                xy *= rec.p ** (u // 2)
                if u % 2:
                    b_ideal = b_ideal.mul(rec.hnf)
            else:
                s_part.append((rec, u))
        return CasselsDecomposition(n, xy, b_ideal, tuple(s_part))


def _factor_known(ideal: IdealHNF, field) -> dict[PrimeIdealRecord, int]:
    from .quadfield import factor_ideal
    return factor_ideal(ideal, field)


@lru_cache(maxsize=32)
def get_context(alpha: AlphaParam) -> AlphaContext:
    return AlphaContext(alpha)


def decompose_n(n: int, alpha: AlphaParam) -> CasselsDecomposition:
    """Exact decomposition (n+alpha)a = (x_n y_n) b_n prod_{P split} P^{u_n}."""
    if n < 0:
        raise ValueError("n >= 0 required")
    return get_context(alpha).decompose(n)


def decompose_range(alpha: AlphaParam, n_max: int) -> list[CasselsDecomposition]:
    ctx = get_context(alpha)
    factors = ctx.factor_range(n_max)
    return [ctx.decompose(n, factors[n]) for n in range(n_max + 1)]


def k_alpha_set(n: int, alpha: AlphaParam,
                factors: list[dict] | None = None) -> set[int]:
    """Members of L(N) owning a prime ideal private among all of M(N)."""
    upper = m_upper(n)
    if factors is None:
        factors = get_context(alpha).factor_range(upper)
    owners: dict[PrimeIdealRecord, int] = {}
    for m in range(0, upper + 1):
        for rec in factors[m]:
            owners[rec] = owners.get(rec, 0) + 1
    out = set()
    for m in range(n + 1, upper + 1):
        if any(owners[rec] == 1 for rec in factors[m]):
            out.add(m)
    return out


def weighted_sum(s: set[int] | list[int], sigma: float, alpha: AlphaParam) -> float:
    """sum_{n in S} (n + alpha)^(-sigma), summed in ascending n."""
    if not 0.5 < sigma < 1.0:
        raise ValueError("sigma must lie in (1/2, 1)")
    af = float(alpha)
    return sum((n + af) ** -sigma for n in sorted(s))


def s_alpha_set(n: int, alpha: AlphaParam,
                decomps: list[CasselsDecomposition] | None = None) -> set[int]:
    """n in L(N) whose split prime powers all satisfy p^u <= N log N."""
    upper = m_upper(n)
    if decomps is None:
        decomps = decompose_range(alpha, upper)
    out = set()
    for m in range(n + 1, upper + 1):
        if all(rec.p ** u <= upper for rec, u in decomps[m].s_part):
            out.add(m)
    return out


def t_alpha_set(n: int, alpha: AlphaParam,
                decomps: list[CasselsDecomposition] | None = None) -> set[int]:
    return set(range_L(n)) - s_alpha_set(n, alpha, decomps)


def rho(n: int, sigma: float, alpha: AlphaParam,
        decomps: list[CasselsDecomposition] | None = None) -> float:
    """Weighted share of S_alpha(N) inside L(N)."""
    lsum = weighted_sum(range_L(n), sigma, alpha)
    if lsum == 0.0:
        raise ValueError("L(N) is empty")
    return weighted_sum(s_alpha_set(n, alpha, decomps), sigma, alpha) / lsum


def rho_upper_bound_constant() -> float:
    """Root of the quadratic 4 rho^2 - (19/8) rho + 1/4 = 0 (larger branch),
    the algebraic constant behind the asymptotic rho bound."""
    qa, qb, qc = 4.0, -19.0 / 8.0, 0.25
    return (-qb + math.sqrt(qb * qb - 4 * qa * qc)) / (2 * qa)


def sigma_stats(n: int, sigma: float, alpha: AlphaParam,
                decomps: list[CasselsDecomposition] | None = None) -> dict:
    """Per-n split-prime log statistics and the aggregate ratios.

    sigma(n) counts log p once per prime power p^v <= N log N dividing the
    shifted ideal; sigma1 keeps v >= 2; sigma2/sigma3 take the v = 1 layer
    split at sqrt(N log N).  The identity sigma = sigma1+sigma2+sigma3 is
    then exact by construction.
    """
    upper = m_upper(n)
    if decomps is None:
        decomps = decompose_range(alpha, upper)
    sqrt_upper = math.sqrt(upper)
    log_upper = math.log(upper)
    rows = {}
    for m in range(n + 1, upper + 1):
        s0 = s1 = s2 = s3 = 0.0
        for rec, u in decomps[m].s_part:
            p = rec.p
            lp = math.log(p)
            vmax = int(log_upper / lp + 1e-12)
            while p ** vmax > upper:
                vmax -= 1
            layers = min(u, vmax)
            if layers >= 1:
                s0 += layers * lp
                if layers >= 2:
                    s1 += (layers - 1) * lp
                if p <= upper:
                    if p > sqrt_upper:
                        s2 += lp
                    else:
                        s3 += lp
        rows[m] = (s0, s1, s2, s3)
    af = float(alpha)
    s_set = s_alpha_set(n, alpha, decomps)
    lsum = weighted_sum(range_L(n), sigma, alpha)
    agg = [0.0, 0.0, 0.0, 0.0]
    for m in sorted(s_set):
        w = (m + af) ** -sigma
        for i in range(4):
            agg[i] += rows[m][i] * w
    rho_val = weighted_sum(s_set, sigma, alpha) / lsum if lsum else 0.0
    log_nl = math.log(upper)
    return {
        "rows": rows,
        "rho": rho_val,
        "sum_sigma": agg[0],
        "sum_sigma1": agg[1],
        "sum_sigma2": agg[2],
        "sum_sigma3": agg[3],
        "lower_ratio_sigma": agg[0] / (log_nl * lsum) if lsum else 0.0,   # vs 2 rho
        "ratio_sigma1": agg[1] / (log_nl * lsum) if lsum else 0.0,        # vs o(1)
        "ratio_sigma2": agg[2] / (log_nl * lsum) if lsum else 0.0,        # vs 1/2
    }


def check_lemma42(alpha: AlphaParam, n_max: int,
                  decomps: list[CasselsDecomposition] | None = None) -> dict:
    """Exact check of N((x_n y_n) b_n) <= 16 d over 0 <= n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max >= 0 required")
    if decomps is None:
        decomps = decompose_range(alpha, n_max)
    worst = max(dc.bounded_norm() for dc in decomps[: n_max + 1])
    bound = 16 * alpha.d
    return {"max_observed_norm": worst, "bound": bound, "pass": worst <= bound}


def check_prop41(n: int, sigma: float, alpha: AlphaParam,
                 factors: list[dict] | None = None) -> dict:
    """Weighted K_alpha mass against the 51/100 share of L."""
    lhs = weighted_sum(k_alpha_set(n, alpha, factors), sigma, alpha)
    lsum = weighted_sum(range_L(n), sigma, alpha)
    rhs = 0.51 * lsum
    return {"N": n, "lhs": lhs, "rhs": rhs,
            "ratio": lhs / lsum if lsum else 0.0, "holds": lhs > rhs}


def check_lemma44(n: int, sigma: float, alpha: AlphaParam, q: int, a_res: int) -> dict:
    """Arithmetic-progression weighted sum vs (1/q) of the total."""
    if q < 1 or not 0 <= a_res < q:
        raise ValueError("need q >= 1 and 0 <= a_res < q")
    members = [m for m in range_L(n) if m % q == a_res]
    prog = weighted_sum(members, sigma, alpha)
    total = weighted_sum(range_L(n), sigma, alpha)
    diff = prog - total / q
    return {"N": n, "q": q, "a": a_res, "progression_sum": prog,
            "expected": total / q, "normalized_error": abs(diff) * n ** sigma}


def enumerate_A_cd(c, d: int, a_max: int) -> list[AlphaParam]:
    """All alpha = (b +/- sqrt(d))/a with a <= a_max satisfying the chain
    c < (b - sqrt(d))/a < (b + sqrt(d))/a < 1 (both signs emitted)."""
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    cf = Fraction(c)
    out: list[AlphaParam] = []
    for a in range(1, a_max + 1):
        for b in range(1, a + 1):
            # b - sqrt(d) > c a  and  b + sqrt(d) < a, exactly
            lo = b - cf * a
            if lo <= 0 or lo * lo <= d:
                continue
            hi = a - b
            if hi <= 0 or hi * hi <= d:
                continue
            for sign in (1, -1):
                alpha = AlphaParam.make(a, b, sign, d)
                assert alpha.in_A_cd(cf)
                out.append(alpha)
    return out


def density_report(alpha: AlphaParam, n: int, sigma: float) -> dict:
    """The CLI-facing report block: sums, rho, ratios, bound checks."""
    upper = m_upper(n)
    ctx = get_context(alpha)
    factors = ctx.factor_range(upper)
    decomps = [ctx.decompose(m, factors[m]) for m in range(upper + 1)]
    l_set = range_L(n)
    k_set = k_alpha_set(n, alpha, factors)
    s_set = s_alpha_set(n, alpha, decomps)
    t_set = set(l_set) - s_set
    lsum = weighted_sum(l_set, sigma, alpha)
    ksum = weighted_sum(k_set, sigma, alpha)
    stats = sigma_stats(n, sigma, alpha, decomps)
    lemma42 = check_lemma42(alpha, min(n, 2000), decomps)
    return {
        "alpha": {"a": alpha.a, "b": alpha.b,
                  "sign": "+" if alpha.sign > 0 else "-", "d": alpha.d},
        "N": n,
        "sigma": sigma,
        "sums": {
            "L": lsum,
            "K": ksum,
            "S": weighted_sum(s_set, sigma, alpha),
            "T": weighted_sum(t_set, sigma, alpha),
        },
        "counts": {"L": len(l_set), "K": len(k_set), "S": len(s_set), "T": len(t_set)},
        "rho": stats["rho"],
        "rho_asymptotic_constant": rho_upper_bound_constant(),
        "ratio_K": ksum / lsum if lsum else 0.0,
        "sigma_stats": {k: stats[k] for k in
                        ("sum_sigma", "sum_sigma1", "sum_sigma2", "sum_sigma3",
                         "lower_ratio_sigma", "ratio_sigma1", "ratio_sigma2")},
        "lemma42": lemma42,
        "holds_prop41": ksum > 0.51 * lsum,
    }

"""Exact arithmetic in real quadratic fields Q(sqrt(d2)).

Elements live on the integral basis (1, w), where w = (1+sqrt(d2))/2 when
d2 = 1 mod 4 and w = sqrt(d2) otherwise, stored as gcd-reduced integer
triples (p + q*w)/den.  Everything here is exact integer/rational
arithmetic; floats appear only to size search boxes and every float-guided
candidate is re-verified exactly.

Conventions fixed for reproducibility:
  * the fundamental unit eps is the smallest unit > 1 in the embedding
    sqrt(d2) -> +sqrt(d2);
  * the canonical generator of a principal ideal I is the unique g > 0
    with sqrt(N(I)) <= g < sqrt(N(I)) * eps;
  * the two prime ideals above a split p are ordered by the second HNF
    basis coordinate B (ascending), giving a stable "first"/"second".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import sympy
from sympy.ntheory.residue_ntheory import sqrt_mod

TRIAL_DIVISION_BOUND = 10**7
GENERATOR_SEARCH_BUDGET = 20_000_000

UNIT_KEY = ("unit",)


class NotPrincipal(Exception):
    """Raised when the bounded window search proves an ideal non-principal."""


class FactorBoundExceeded(Exception):
    """Norm factorization hit the trial-division bound."""


class SearchBudgetExceeded(Exception):
    """A bounded lattice search exceeded its configured budget."""


def squarefree_decompose(d: int) -> tuple[int, int]:
    """Split d = d1^2 * d2 with d2 squarefree; rejects d <= 1 and squares."""
    if d <= 1:
        raise ValueError(f"d must be >= 2, got {d}")
    if math.isqrt(d) ** 2 == d:
        raise ValueError(f"d must not be a perfect square, got {d}")
    d1, d2 = 1, 1
    for p, e in sympy.factorint(d).items():
        d1 *= p ** (e // 2)
        d2 *= p ** (e % 2)
    return d1, d2


class RealQuadraticField:
    """K = Q(sqrt(d2)) with discriminant, unit and class data precomputed."""

    def __init__(self, d: int):
        self.d = d
        self.d1, self.d2 = squarefree_decompose(d)
        if self.d2 % 4 == 1:
            self.disc = self.d2
            self.omega_kind = "half"       # w = (1 + sqrt(d2)) / 2
            self.w0 = (self.d2 - 1) // 4   # w^2 = w0 + w1*w
            self.w1 = 1
        else:
            self.disc = 4 * self.d2
            self.omega_kind = "sqrt"
            self.w0 = self.d2
            self.w1 = 0
        self.omega_real = (1 + math.sqrt(self.d2)) / 2 if self.omega_kind == "half" \
            else math.sqrt(self.d2)
        self._primes_above: dict[int, tuple] = {}
        self._pi_system: dict = {}
        self.eps = _fundamental_unit(self)
        self.class_reps, self.h = _class_group_data(self)

    def one(self) -> "QuadElem":
        return QuadElem.make(self, 1, 0, 1)

    def from_sqrt_coords(self, u: int, v: int, den: int = 1) -> "QuadElem":
        """Element (u + v*sqrt(d2)) / den expressed on the integral basis."""
        if self.omega_kind == "half":
            # sqrt(d2) = 2w - 1
            return QuadElem.make(self, u - v, 2 * v, den)
        return QuadElem.make(self, u, v, den)

    def __eq__(self, other):
        return isinstance(other, RealQuadraticField) and other.d2 == self.d2

    def __hash__(self):
        return hash(("RQF", self.d2))

    def __repr__(self):
        return f"RealQuadraticField(d2={self.d2}, disc={self.disc}, h={self.h})"


@lru_cache(maxsize=None)
def make_field(d: int) -> RealQuadraticField:
    return RealQuadraticField(d)


def _sign_of_p_plus_q_sqrt(p: int, q: int, d2: int) -> int:
    """Exact sign of p + q*sqrt(d2)."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return 1 if q > 0 else -1
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    if p * p > q * q * d2:
        return 1 if p > 0 else -1
    return 1 if q > 0 else -1


@dataclass(frozen=True)
class QuadElem:
    """(p + q*w) / den in lowest terms, den > 0."""

    field: RealQuadraticField
    p: int
    q: int
    den: int

    @staticmethod
    def make(field: RealQuadraticField, p: int, q: int, den: int = 1) -> "QuadElem":
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            p, q, den = -p, -q, -den
        g = math.gcd(math.gcd(p, q), den)
        if g > 1:
            p, q, den = p // g, q // g, den // g
        return QuadElem(field, p, q, den)

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, int):
            return QuadElem.make(self.field, other, 0, 1)
        if isinstance(other, Fraction):
            return QuadElem.make(self.field, other.numerator, 0, other.denominator)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem.make(self.field, self.p * o.den + o.p * self.den,
                             self.q * o.den + o.q * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.field, -self.p, -self.q, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        f = self.field
        # (p1 + q1 w)(p2 + q2 w) with w^2 = w0 + w1 w
        p = self.p * o.p + self.q * o.q * f.w0
        q = self.p * o.q + self.q * o.p + self.q * o.q * f.w1
        return QuadElem.make(f, p, q, self.den * o.den)

    __rmul__ = __mul__

    def conj(self) -> "QuadElem":
        f = self.field
        # w -> Tr(w) - w with Tr(w) = w1
        return QuadElem.make(f, self.p + self.q * f.w1, -self.q, self.den)

    def norm(self) -> Fraction:
        f = self.field
        n = self.p * self.p + self.p * self.q * f.w1 - self.q * self.q * f.w0
        return Fraction(n, self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(2 * self.p + self.q * self.field.w1, self.den)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return QuadElem.make(self.field, c.p * n.denominator, c.q * n.denominator,
                             c.den * n.numerator)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def sqrt_coords(self) -> tuple[int, int, int]:
        """(u, v, den) with value = (u + v*sqrt(d2)) / den (den may gain a 2)."""
        if self.field.omega_kind == "half":
            return 2 * self.p + self.q, self.q, 2 * self.den
        return self.p, self.q, self.den

    def sign(self) -> int:
        u, v, _ = self.sqrt_coords()
        return _sign_of_p_plus_q_sqrt(u, v, self.field.d2)

    def compare(self, other) -> int:
        """Exact sign of self - other (other: QuadElem, int or Fraction)."""
        o = self._coerce(other)
        return (self - o).sign()

    def __gt__(self, other):
        return self.compare(other) > 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def is_one(self) -> bool:
        return self.p == 1 and self.q == 0 and self.den == 1

    def is_integral(self) -> bool:
        return self.den == 1

    def is_unit(self) -> bool:
        return self.den == 1 and abs(self.norm()) == 1

    def __float__(self):
        u, v, den = self.sqrt_coords()
        return (u + v * math.sqrt(self.field.d2)) / den

    def __repr__(self):
        return f"QuadElem({self.p} + {self.q}w)/{self.den}"


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


@dataclass(frozen=True)
class IdealHNF:
    """Integral ideal with Z-basis [A, B + C*w], C | A, C | B, 0 <= B < A."""

    field: RealQuadraticField
    A: int
    B: int
    C: int

    @property
    def norm(self) -> int:
        return self.A * self.C

    @staticmethod
    def from_pairs(field: RealQuadraticField, pairs: Iterable[tuple[int, int]]) -> "IdealHNF":
        """HNF of the Z-module spanned by elements x + y*w given as (x, y)."""
        xs: list[int] = []
        cur = None  # running (x, y) with y = gcd so far
        for (x, y) in pairs:
            if y == 0:
                if x:
                    xs.append(abs(x))
                continue
            if cur is None:
                cur = (x, y)
                continue
            g, u, v = _ext_gcd(cur[1], y)
            combo = (u * cur[0] + v * x, g)
            # eliminate: y-free combination of cur and (x, y)
            xs.append(abs(cur[0] * (y // g) - x * (cur[1] // g)))
            cur = combo
        if cur is None:
            raise ValueError("not a full-rank module (no w component)")
        a = 0
        for x in xs:
            a = math.gcd(a, x)
        if a == 0:
            raise ValueError("not a full-rank module (rank < 2)")
        b, c = cur
        if c < 0:
            b, c = -b, -c
        b %= a
        ideal = IdealHNF(field, a, b, c)
        if a % c or b % c:
            raise ValueError("module is not an ideal (C does not divide A, B)")
        return ideal

    @staticmethod
    def principal(gen: QuadElem) -> "IdealHNF":
        if not gen.is_integral():
            raise ValueError("principal() needs an integral generator")
        f = gen.field
        gw = gen * QuadElem.make(f, 0, 1, 1)
        return IdealHNF.from_pairs(f, [(gen.p, gen.q), (gw.p, gw.q)])

    def basis_elems(self) -> tuple[QuadElem, QuadElem]:
        f = self.field
        return (QuadElem.make(f, self.A, 0, 1), QuadElem.make(f, self.B, self.C, 1))

    def contains(self, x: QuadElem) -> bool:
        if x.den != 1:
            return False
        if x.q % self.C:
            return False
        return (x.p - (x.q // self.C) * self.B) % self.A == 0

    def is_ideal(self) -> bool:
        f = self.field
        w = QuadElem.make(f, 0, 1, 1)
        e1, e2 = self.basis_elems()
        return self.contains(e1 * w) and self.contains(e2 * w)

    def mul(self, other: "IdealHNF") -> "IdealHNF":
        f = self.field
        g1 = self.basis_elems()
        g2 = other.basis_elems()
        pairs = []
        for a in g1:
            for b in g2:
                pr = a * b
                pairs.append((pr.p, pr.q))
        return IdealHNF.from_pairs(f, pairs)

    def __pow__(self, e: int) -> "IdealHNF":
        if e < 0:
            raise ValueError("integral ideals only")
        out = IdealHNF(self.field, 1, 0, 1)
        base = self
        while e:
            if e & 1:
                out = out.mul(base)
            base = base.mul(base)
            e >>= 1
        return out

    def conj(self) -> "IdealHNF":
        e1, e2 = self.basis_elems()
        c1, c2 = e1.conj(), e2.conj()
        return IdealHNF.from_pairs(self.field, [(c1.p, c1.q), (c2.p, c2.q)])

    def divides(self, other: "IdealHNF") -> bool:
        return all(self.contains(e) for e in other.basis_elems())

    def __repr__(self):
        return f"IdealHNF[{self.A}, {self.B}+{self.C}w] (norm {self.norm})"


@dataclass(frozen=True)
class PrimeIdealRecord:
    p: int
    split_type: str          # "inert" | "ramified" | "split"
    which: int               # 0 for the only/first ideal, 1 for the second
    hnf: IdealHNF
    residue_degree: int
    root: int | None         # w = root (mod ideal); None when inert

    @property
    def ram_index(self) -> int:
        return 2 if self.split_type == "ramified" else 1

    @property
    def lam_key(self) -> tuple:
        return (self.p, self.split_type, self.which)

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, {self.split_type}#{self.which})"


def prime_ideals_above(p: int, field: RealQuadraticField) -> list[PrimeIdealRecord]:
    """Factor (p): one inert/ramified record or two split records."""
    if p in field._primes_above:
        return list(field._primes_above[p])
    if p < 2 or not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    w0, w1 = field.w0, field.w1
    roots: list[int] = []
    ramified = field.disc % p == 0
    if p == 2:
        if field.omega_kind == "sqrt":
            # x^2 - d2 mod 2
            roots = [field.d2 % 2] if ramified else []
            if not ramified:
                raise AssertionError("p=2 is ramified whenever 2 | disc")
        else:
            if w0 % 2 == 0:
                roots = [0, 1]          # x(x+1), split
            else:
                roots = []              # x^2+x+1 irreducible, inert
    else:
        dpoly = (w1 * w1 + 4 * w0) % p
        if dpoly == 0:
            roots = [w1 * pow(2, -1, p) % p]
        else:
            r = sqrt_mod(dpoly, p)
            if r is not None:
                inv2 = pow(2, -1, p)
                roots = sorted({(w1 + r) * inv2 % p, (w1 - r) * inv2 % p})
    recs: list[PrimeIdealRecord] = []
    if not roots:
        hnf = IdealHNF(field, p, 0, p)
        recs.append(PrimeIdealRecord(p, "inert", 0, hnf, 2, None))
    elif ramified or len(roots) == 1:
        r = roots[0]
        hnf = IdealHNF(field, p, (-r) % p, 1)
        recs.append(PrimeIdealRecord(p, "ramified", 0, hnf, 1, r))
    else:
        hnfs = sorted(((-r) % p, r) for r in roots)
        for which, (b, r) in enumerate(hnfs):
            recs.append(PrimeIdealRecord(p, "split", which, IdealHNF(field, p, b, 1), 1, r))
    field._primes_above[p] = tuple(recs)
    return recs


def _val_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def elem_valuation(x: QuadElem, rec: PrimeIdealRecord) -> int:
    """Valuation of the field element x at the prime ideal rec."""
    if x.p == 0 and x.q == 0:
        raise ZeroDivisionError("valuation of zero")
    p = rec.p
    v_den = _val_int(x.den, p) * rec.ram_index
    a, b = x.p, x.q
    n = abs(a * a + a * b * x.field.w1 - b * b * x.field.w0)
    vn = _val_int(n, p)
    if rec.split_type == "inert":
        assert vn % 2 == 0
        return vn // 2 - v_den
    if rec.split_type == "ramified":
        return vn - v_den
    # split: strip rational content, then one side takes the rest
    k0 = min(_val_int(a, p) if a else vn, _val_int(b, p) if b else vn)
    if k0:
        a //= p ** k0
        b //= p ** k0
        vn -= 2 * k0
    if (a + b * rec.root) % p == 0:
        return k0 + vn - v_den
    return k0 - v_den


def ideal_valuation(ideal: IdealHNF, rec: PrimeIdealRecord) -> int:
    e1, e2 = ideal.basis_elems()
    return min(elem_valuation(e1, rec), elem_valuation(e2, rec))


@lru_cache(maxsize=4)
def _sieve_primes(bound: int) -> tuple[int, ...]:
    import numpy as np
    mask = np.ones(bound + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(bound) + 1):
        if mask[i]:
            mask[i * i:: i] = False
    return tuple(int(i) for i in np.nonzero(mask)[0])


def factor_int(n: int, bound: int = TRIAL_DIVISION_BOUND) -> dict[int, int]:
    """Trial division with an explicit failure beyond the configured bound."""
    if n <= 0:
        raise ValueError("positive integers only")
    out: dict[int, int] = {}
    limit = min(math.isqrt(n), bound)
    sieve_cap = min(bound, max(1000, limit))
    for p in _sieve_primes(sieve_cap):
        if p > limit:
            break
        if n % p == 0:
            v = _val_int(n, p)
            out[p] = v
            n //= p ** v
            limit = min(math.isqrt(n), bound)
    if n > 1:
        if n > bound * bound:
            raise FactorBoundExceeded(f"cofactor {n} exceeds trial bound {bound}^2")
        out[n] = 1
    return out


def factor_ideal(ideal: IdealHNF, field: RealQuadraticField) -> dict[PrimeIdealRecord, int]:
    """Exact prime-ideal factorization via the norm."""
    out: dict[PrimeIdealRecord, int] = {}
    for p in sorted(factor_int(ideal.norm)):
        for rec in prime_ideals_above(p, field):
            v = ideal_valuation(ideal, rec)
            if v:
                out[rec] = v
    return out


def principal_generator(ideal: IdealHNF, field: RealQuadraticField) -> QuadElem:
    """Canonical generator g > 0 with sqrt(N) <= g < sqrt(N)*eps, or NotPrincipal.

    All integral (u, v) with u + v*w in the window box are enumerated; a
    float box bounds the search and every hit is verified exactly.
    """
    n = ideal.norm
    eps_f = float(field.eps)
    sn = math.sqrt(n)
    wf = field.omega_real
    wcf = field.w1 - wf  # conjugate embedding of w
    denom = wf - wcf     # sqrt(d2) or 2*sqrt(d2)
    v_lo = int(math.floor((sn - sn) / denom)) - 1
    v_hi = int(math.ceil((sn * eps_f + sn) / denom)) + 1
    budget = 0
    eps2_num = (field.eps * field.eps) * n  # exact N * eps^2
    for v in range(v_lo, v_hi + 1):
        u_lo = max(sn - v * wf, -sn - v * wcf)
        u_hi = min(sn * eps_f - v * wf, sn - v * wcf)
        if u_hi < u_lo - 1:
            continue
        lo_i = int(math.floor(u_lo)) - 1
        hi_i = int(math.ceil(u_hi)) + 1
        budget += hi_i - lo_i + 1
        if budget > GENERATOR_SEARCH_BUDGET:
            raise SearchBudgetExceeded("principal generator window too large")
        for u in range(lo_i, hi_i + 1):
            g = QuadElem.make(field, u, v, 1)
            if abs(g.norm()) != n:
                continue
            if g.sign() <= 0 or not ideal.contains(g):
                continue
            g2 = g * g
            if g2.compare(n) < 0:          # g < sqrt(N)
                continue
            if not (g2 < eps2_num):        # g >= sqrt(N)*eps
                continue
            return g
    raise NotPrincipal(f"no generator in the canonical window for {ideal}")


def _fundamental_unit(field: RealQuadraticField) -> QuadElem:
    """Smallest unit > 1, by ascending search on the w-coefficient (Pell-style)."""
    w0, w1 = field.w0, field.w1
    v = 0
    while True:
        v += 1
        if v > 10**7:
            raise SearchBudgetExceeded("fundamental unit search exceeded bound")
        cands = []
        for target in (1, -1):
            # u^2 + w1*u*v - w0*v^2 = target
            disc = w1 * w1 * v * v + 4 * (w0 * v * v + target)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            for num in (-w1 * v + r, -w1 * v - r):
                if num % 2 == 0:
                    g = QuadElem.make(field, num // 2, v, 1)
                    if g > 1:
                        cands.append(g)
        if cands:
            best = cands[0]
            for c in cands[1:]:
                if c < best:
                    best = c
            return best


def fundamental_unit(field: RealQuadraticField) -> QuadElem:
    return field.eps


def _ideals_of_norm_up_to(field: RealQuadraticField, bound: int) -> list[IdealHNF]:
    """All integral ideals of norm <= bound (bound is tiny at desk scale)."""
    prime_powers: list[list[IdealHNF]] = []
    for p in _sieve_primes(max(2, bound)):
        if p > bound:
            break
        for rec in prime_ideals_above(p, field):
            if rec.hnf.norm > bound:
                continue
            powers = []
            cur = rec.hnf
            while cur.norm <= bound:
                powers.append(cur)
                cur = cur.mul(rec.hnf)
            prime_powers.append(powers)
    out = [IdealHNF(field, 1, 0, 1)]
    for powers in prime_powers:
        extra = []
        for ideal in out:
            for pw in powers:
                prod = ideal.mul(pw)
                if prod.norm <= bound:
                    extra.append(prod)
        out.extend(extra)
    return out


def _class_group_data(field: RealQuadraticField) -> tuple[list[IdealHNF], int]:
    """Class representatives and h by Minkowski-bound enumeration."""
    bound = math.isqrt(field.disc) // 2
    ideals = _ideals_of_norm_up_to(field, max(bound, 1))
    reps: list[IdealHNF] = []
    for ideal in ideals:
        equivalent = False
        for rep in reps:
            # ideal ~ rep  <=>  ideal * conj(rep) principal
            try:
                principal_generator(ideal.mul(rep.conj()), field)
                equivalent = True
                break
            except NotPrincipal:
                continue
        if not equivalent:
            reps.append(ideal)
    return reps, len(reps)


def class_number(field: RealQuadraticField) -> int:
    return field.h


def pi_system(field: RealQuadraticField,
              primes: Iterable[PrimeIdealRecord]) -> dict[PrimeIdealRecord, QuadElem]:
    """Canonical generators pi_P of P^h, cached on the field."""
    out = {}
    for rec in primes:
        if rec not in field._pi_system:
            field._pi_system[rec] = principal_generator(rec.hnf ** field.h, field)
        out[rec] = field._pi_system[rec]
    return out


@dataclass(frozen=True)
class OrdVector:
    """Exponent vector of y^h over the pi system and the fundamental unit."""

    d2: int
    prime_part: tuple            # sorted ((lam_key, exponent), ...), exponents != 0
    unit_exp: int

    def is_zero(self) -> bool:
        return not self.prime_part and self.unit_exp == 0

    def items(self):
        return self.prime_part

    @staticmethod
    def combine(terms: Iterable[tuple[int, "OrdVector"]]) -> "OrdVector":
        """Integer combination sum_j e_j * v_j."""
        acc: dict = {}
        unit = 0
        d2 = None
        for e, vec in terms:
            d2 = vec.d2
            unit += e * vec.unit_exp
            for key, a in vec.prime_part:
                acc[key] = acc.get(key, 0) + e * a
        pp = tuple(sorted((k, a) for k, a in acc.items() if a))
        return OrdVector(d2 if d2 is not None else 0, pp, unit)


def ord_vector(y: QuadElem, field: RealQuadraticField,
               pi: dict | None = None) -> OrdVector:
    """The exponent vector of y (prime part = valuations of (y), unit part
    from exact division of y^h by the pi-system generators)."""
    if y.sign() <= 0:
        raise ValueError("ord_vector needs y > 0")
    nrm = y.norm()
    support = set(factor_int(abs(nrm.numerator))) | set(factor_int(nrm.denominator))
    parts: list[tuple[PrimeIdealRecord, int]] = []
    for p in sorted(support):
        for rec in prime_ideals_above(p, field):
            v = elem_valuation(y, rec)
            if v:
                parts.append((rec, v))
    gens = pi if pi is not None else pi_system(field, [rec for rec, _ in parts])
    q = y ** field.h
    for rec, a in parts:
        q = q * (gens[rec] ** (-a))
    if abs(q.norm()) != 1:
        raise AssertionError("pi-system division left a non-unit (internal error)")
    b = 0
    eps = field.eps
    while q > 1:
        q = q / eps
        b += 1
    while q < 1:
        q = q * eps
        b -= 1
    if not q.is_one():
        raise AssertionError("unit power verification failed (internal error)")
    pp = tuple(sorted((rec.lam_key, a) for rec, a in parts))
    return OrdVector(field.d2, pp, b)


@dataclass(frozen=True)
class AlphaParam:
    """Quadratic irrational alpha = (b +/- sqrt(d)) / a in (0, 1)."""

    a: int
    b: int
    sign: int                # +1 or -1
    d: int
    field: RealQuadraticField = dc_field(compare=False, hash=False, repr=False)
    value: QuadElem = dc_field(compare=False, hash=False, repr=False)

    @staticmethod
    def make(a: int, b: int, sign: int, d: int) -> "AlphaParam":
        if a <= 0 or b <= 0:
            raise ValueError("a, b must be positive integers")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        f = make_field(d)
        value = f.from_sqrt_coords(b, sign * f.d1, a)
        if not (value > 0 and value < 1):
            raise ValueError(f"alpha=({b}{'+' if sign > 0 else '-'}sqrt({d}))/{a} "
                             "is not in (0, 1)")
        return AlphaParam(a, b, sign, d, f, value)

    def shifted(self, n: int) -> QuadElem:
        return self.value + n

    def in_A_cd(self, c) -> bool:
        """Exact test of c < (b - sqrt(d))/a < (b + sqrt(d))/a < 1."""
        cf = Fraction(c)
        f = self.field
        lower = f.from_sqrt_coords(self.b, -f.d1, self.a)
        upper = f.from_sqrt_coords(self.b, f.d1, self.a)
        return lower.compare(cf) > 0 and upper.compare(1) < 0

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        s = "+" if self.sign > 0 else "-"
        return f"alpha=({self.b}{s}sqrt({self.d}))/{self.a}"


def ideal_denominator(alpha: AlphaParam) -> IdealHNF:
    """The ideal denominator: the largest integral ideal a with alpha*a integral."""
    f = alpha.field
    val = alpha.value
    out = IdealHNF(f, 1, 0, 1)
    for p in sorted(factor_int(val.den)):
        for rec in prime_ideals_above(p, f):
            v = elem_valuation(val, rec)
            if v < 0:
                out = out.mul(rec.hnf ** (-v))
                # maximality: one factor less would not clear the pole
                assert elem_valuation(val, rec) + (-v) == 0
    for e in out.basis_elems():
        prod = val * e
        if not prod.is_integral():
            raise AssertionError("ideal denominator failed integrality check")
    return out


def multiplicative_relation(ns: list[int], es: list[int], alpha: AlphaParam) -> bool:
    """True iff prod (n_j + alpha)^{e_j} = 1, decided via ord vectors."""
    if len(ns) != len(es):
        raise ValueError("ns and es must have the same length")
    vec = OrdVector.combine(
        (e, ord_vector(alpha.shifted(n), alpha.field)) for n, e in zip(ns, es))
    return vec.is_zero()


def field_to_json(field: RealQuadraticField, pmax: int = 50) -> dict:
    primes = []
    for p in _sieve_primes(max(pmax, 2)):
        if p > pmax:
            break
        for rec in prime_ideals_above(p, field):
            primes.append({
                "p": rec.p,
                "split_type": rec.split_type,
                "which": rec.which,
                "hnf": [rec.hnf.A, rec.hnf.B, rec.hnf.C],
                "norm": rec.hnf.norm,
                "residue_degree": rec.residue_degree,
            })
    return {
        "d": field.d,
        "d1": field.d1,
        "d2": field.d2,
        "disc": field.disc,
        "omega": field.omega_kind,
        "h": field.h,
        "eps": {"p": field.eps.p, "q": field.eps.q, "den": field.eps.den},
        "primes": primes,
    }

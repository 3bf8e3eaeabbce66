"""Decomposition machinery: index sets, exact reconstruction, the residue-class
clustering of shared prime powers, the bounded-part inequality, weighted sums
and the ratio checks."""

import math

import pytest

from hurwitzlab.cassels import (
    check_lemma42,
    check_lemma44,
    check_prop41,
    decompose_n,
    decompose_range,
    density_report,
    enumerate_A_cd,
    get_context,
    k_alpha_set,
    m_upper,
    range_L,
    range_M,
    rho,
    rho_upper_bound_constant,
    s_alpha_set,
    sigma_stats,
    t_alpha_set,
    weighted_sum,
)
from hurwitzlab.quadfield import AlphaParam, IdealHNF, factor_ideal

# frozen from the first verified run (self-oracle; no published table exists)
K_ALPHA_50_SIZE = 135


def test_range_examples(alpha2p):
    assert range_L(10) == list(range(11, 24))
    assert range_L(3) == []                      # boundary: empty, not an error
    assert len(range_M(100)) == 461
    with pytest.raises(ValueError):
        range_L(2)


def test_decompose_n_zero(alpha2p):
    # (alpha) * a is the unit ideal here: the denominator exactly cancels
    dc = decompose_n(0, alpha2p)
    assert dc.xy == 1 and dc.b_ideal.norm == 1 and dc.s_part == ()


def test_single_split_prime_case(alpha2p):
    # n = 1: (1 + alpha) a has prime norm, a single split prime
    dc = decompose_n(1, alpha2p)
    assert dc.xy == 1 and dc.b_ideal.norm == 1
    assert len(dc.s_part) == 1 and dc.s_part[0][1] == 1
    assert dc.s_part[0][0].split_type == "split"


def test_reconstruction_invariant():
    # (x_n y_n) b_n prod P^u  ==  (n + alpha) a, checked as exact ideals
    for params in [(4, 2, 1, 2), (4, 2, -1, 2), (5, 3, 1, 3)]:
        alpha = AlphaParam.make(*params)
        ctx = get_context(alpha)
        field = alpha.field
        decomps = decompose_range(alpha, 200)
        for n in range(201):
            dc = decomps[n]
            rebuilt = IdealHNF.principal(
                field.one() * dc.xy).mul(dc.b_ideal)
            for rec, u in dc.s_part:
                rebuilt = rebuilt.mul(rec.hnf ** u)
            shifted = alpha.shifted(n)
            # (n+alpha) a * (den) == (numerator) * a as integral ideals
            from hurwitzlab.quadfield import QuadElem
            z = QuadElem.make(field, shifted.p, shifted.q, 1)
            lhs = rebuilt.mul(IdealHNF.principal(
                QuadElem.make(field, shifted.den, 0, 1)))
            rhs = IdealHNF.principal(z).mul(ctx.a_ideal)
            assert lhs == rhs, n


def test_bounded_part_is_ramified_exponent_one(alpha3p):
    field = alpha3p.field
    for dc in decompose_range(alpha3p, 300):
        fac = factor_ideal(dc.b_ideal, field)
        assert all(rec.split_type == "ramified" and e == 1
                   for rec, e in fac.items())


def test_lemma42_examples(alpha2p, alpha3p):
    r = check_lemma42(alpha2p, 2000)
    assert r["pass"] and r["bound"] == 32
    r = check_lemma42(alpha3p, 2000)
    assert r["pass"] and r["bound"] == 48
    r0 = check_lemma42(alpha2p, 0)
    assert r0["pass"]


def test_sieve_matches_trial_division(alpha2m, alpha3p):
    for alpha in (alpha2m, alpha3p):
        ctx = get_context(alpha)
        sieved = ctx.factor_range(150)
        for n in range(0, 151, 3):
            assert ctx.factor_n(n) == sieved[n]


def test_residue_class_clustering(alpha2p):
    """Shared split prime powers force a single residue class mod p^v."""
    n = 50
    upper = m_upper(n)
    factors = get_context(alpha2p).factor_range(upper)
    by_rec: dict = {}
    for m, fac in enumerate(factors):
        for rec, u in fac.items():
            if rec.split_type != "split":
                continue
            for v in range(1, u + 1):
                if rec.p ** v <= upper:
                    by_rec.setdefault((rec, v), []).append(m)
    assert by_rec, "expected shared split prime powers at this scale"
    for (rec, v), members in by_rec.items():
        residues = {m % rec.p ** v for m in members}
        assert len(residues) == 1


def test_k_alpha_golden(alpha2p):
    kset = k_alpha_set(50, alpha2p)
    assert len(kset) == K_ALPHA_50_SIZE
    assert kset <= set(range_L(50))


def test_private_prime_membership(alpha2p):
    """Owners of a norm-unique prime land in K; members without any private
    prime stay out (definition re-verified on raw factorizations)."""
    n = 50
    upper = m_upper(n)
    factors = get_context(alpha2p).factor_range(upper)
    owners: dict = {}
    for m in range(upper + 1):
        for rec in factors[m]:
            owners[rec] = owners.get(rec, 0) + 1
    kset = k_alpha_set(n, alpha2p, factors)
    for m in range_L(n):
        private = any(owners[rec] == 1 for rec in factors[m])
        assert (m in kset) == private


def test_weighted_sum_contract(alpha2p):
    assert weighted_sum([], 0.8, alpha2p) == 0.0
    af = float(alpha2p)
    assert weighted_sum([0], 0.77, alpha2p) == pytest.approx(af ** -0.77, rel=1e-14)
    with pytest.raises(ValueError):
        weighted_sum([0, 1], 0.5, alpha2p)
    with pytest.raises(ValueError):
        weighted_sum([0, 1], 1.0, alpha2p)


def test_partition_S_T(alpha2p):
    n = 50
    decomps = decompose_range(alpha2p, m_upper(n))
    s_set = s_alpha_set(n, alpha2p, decomps)
    t_set = t_alpha_set(n, alpha2p, decomps)
    assert s_set | t_set == set(range_L(n))
    assert not s_set & t_set


def test_rho_range_and_constant(alpha2p):
    r = rho(100, 0.8, alpha2p)
    assert 0.0 < r <= 1.0
    # the algebraic constant from the quadratic step, to full precision
    assert rho_upper_bound_constant() == pytest.approx(
        (19.0 + math.sqrt(105.0)) / 64.0, abs=1e-14)
    assert abs(rho_upper_bound_constant() - 0.45698360571811870) < 1e-10


def test_sigma_identity_per_n(alpha2p):
    n = 50
    decomps = decompose_range(alpha2p, m_upper(n))
    stats = sigma_stats(n, 0.8, alpha2p, decomps)
    for m, (s0, s1, s2, s3) in stats["rows"].items():
        assert s0 == pytest.approx(s1 + s2 + s3, abs=1e-12)
    # empty split part => all four vanish
    empty_rows = [m for m in stats["rows"]
                  if not decomps[m].s_part and stats["rows"][m][0] == 0.0]
    for m in empty_rows:
        assert stats["rows"][m] == (0.0, 0.0, 0.0, 0.0)


def test_sigma_aggregate_ratios(alpha2p):
    stats = sigma_stats(400, 0.8, alpha2p)
    # lower bound flavor: weighted sigma mass per log(N log N) beats 2 rho
    # (reported, not asserted asymptotically; desk scale gives solid margin)
    assert stats["lower_ratio_sigma"] >= 2.0 * stats["rho"] - 0.05
    # sigma2 layer obeys the 1/2 + slack ceiling
    assert stats["ratio_sigma2"] <= 0.5 + 0.1


def test_prop41_ladder(alpha2p):
    ratios = []
    for n in (100, 200, 400):
        rep = check_prop41(n, 0.8, alpha2p)
        ratios.append(rep["ratio"])
        assert rep["holds"] == (rep["lhs"] > rep["rhs"])
    assert max(ratios) >= 0.51


def test_lemma44_examples(alpha2p):
    r1 = check_lemma44(100, 0.8, alpha2p, 1, 0)
    assert r1["normalized_error"] == 0.0
    errs = [check_lemma44(n, 0.8, alpha2p, 2, 1)["normalized_error"]
            for n in (100, 400, 1600)]
    assert max(errs) < 5.0        # stays bounded as N grows
    big_q = m_upper(60)
    r = check_lemma44(60, 0.8, alpha2p, big_q, 3)
    assert r["progression_sum"] >= 0.0


def test_enumerate_A_cd(alpha2p, alpha2m):
    fam = enumerate_A_cd(0.1, 2, 4)
    assert {(a.a, a.b, a.sign) for a in fam} == {(4, 2, 1), (4, 2, -1)}
    assert enumerate_A_cd(0.9, 2, 10) == []
    for alpha in enumerate_A_cd(0.2, 5, 9):
        assert 0.2 < float(alpha) < 1.0
    with pytest.raises(ValueError):
        enumerate_A_cd(1.5, 2, 4)


def test_density_report_shape(alpha2p):
    rep = density_report(alpha2p, 50, 0.8)
    assert rep["counts"]["K"] == K_ALPHA_50_SIZE
    assert rep["sums"]["S"] + rep["sums"]["T"] == pytest.approx(rep["sums"]["L"])
    assert 0 < rep["rho"] <= 1
    assert rep["lemma42"]["pass"]
    assert set(rep["alpha"]) == {"a", "b", "sign", "d"}

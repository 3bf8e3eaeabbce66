"""Random model: phase determinism, orthogonality, the relation-indicator
moment identity, characteristic functions against the circle law, exact
moments and the all-arcs event."""

import math
import random

import numpy as np
import pytest

from hurwitzlab import kernels
from hurwitzlab.quadfield import multiplicative_relation
from hurwitzlab.random_model import (
    PhaseAssignment,
    derived_seed,
    draw_samples,
    empirical_char,
    find_center_phases,
    hit_probability,
    model_table,
    moment_exact,
    omega0_probability,
    power_moment_mc,
    sample_x,
    shifted_ord,
    support_radius_check,
    zeta_n_sample,
)


def bessel_j0(x: float) -> float:
    """Power-series oracle sum (-1)^m (x/2)^{2m} / (m!)^2."""
    total, term, m = 1.0, 1.0, 0
    while abs(term) > 1e-18 and m < 300:
        m += 1
        term *= -(x * x / 4.0) / (m * m)
        total += term
    return total


def test_bessel_oracle_reference():
    assert bessel_j0(1.0) == pytest.approx(0.7651976866, abs=1e-9)


def test_phase_assignment_deterministic():
    a = PhaseAssignment(42)
    b = PhaseAssignment(42)
    k1, k2 = (7, "split", 0), ("unit",)
    # evaluation order never matters
    assert (a.theta(k1), a.theta(k2)) == (b.theta(k2), b.theta(k1))[::-1]
    assert PhaseAssignment(43).theta(k1) != a.theta(k1)
    assert 0.0 <= a.theta(k1) < 2.0 * math.pi


def test_sample_x_modulus_and_alpha_one(alpha2p):
    ph = PhaseAssignment(1)
    for n in (0, 3, 11):
        assert abs(abs(sample_x(n, alpha2p, ph)) - 1.0) < 1e-12
    assert sample_x(0, 1, ph) == 1.0 + 0.0j          # degenerate first term
    assert abs(abs(sample_x(5, 1, ph)) - 1.0) < 1e-12


def test_zeta_sample_matches_drawn_stream(alpha2p):
    samples = draw_samples(0.8, 16, alpha2p, 5, seed=99)
    for i in range(5):
        ph = PhaseAssignment(derived_seed(99, i))
        direct = zeta_n_sample(0.8, 16, alpha2p, ph)
        assert abs(samples[i] - direct) < 1e-12


def test_draw_samples_deterministic_and_bounded(alpha2p):
    s1 = draw_samples(0.8, 8, alpha2p, 1000, seed=5)
    s2 = draw_samples(0.8, 8, alpha2p, 1000, seed=5)
    np.testing.assert_array_equal(s1, s2)
    bound = sum((n + float(alpha2p)) ** -0.8 for n in range(9))
    assert np.all(np.abs(s1) <= bound + 1e-9)


def test_empirical_char_at_zero(alpha2p):
    s = draw_samples(0.8, 8, alpha2p, 100, seed=1)
    assert empirical_char(0, s) == 1.0 + 0.0j
    with pytest.raises(ValueError):
        empirical_char(1.0, np.array([]))


def test_orthogonality_pairs(alpha2p):
    m_samples = 40_000
    tol = 4.0 / math.sqrt(m_samples)
    for (m, n) in [(0, 1), (0, 7), (3, 5), (2, 20), (11, 19)]:
        est = power_moment_mc([m, n], [1, -1], alpha2p, m_samples, seed=21,
                              n_trunc=20)
        assert abs(est) <= tol, (m, n, est)
    diag = power_moment_mc([4, 4], [1, -1], alpha2p, 100, seed=21, n_trunc=20)
    assert diag == pytest.approx(1.0)


def test_moment_identity_random_tuples(alpha2p):
    rng = random.Random(17)
    m_samples = 20_000
    tol = 4.0 / math.sqrt(m_samples)
    for _ in range(40):
        k = rng.randint(1, 4)
        ns = [rng.randint(0, 30) for _ in range(k)]
        es = [rng.randint(-3, 3) for _ in range(k)]
        indicator = 1.0 if multiplicative_relation(ns, es, alpha2p) else 0.0
        est = power_moment_mc(ns, es, alpha2p, m_samples, seed=31, n_trunc=30)
        assert abs(est - indicator) <= tol, (ns, es, est, indicator)


def test_single_char_matches_circle_law(alpha2p):
    m_samples = 30_000
    tol = 4.0 / math.sqrt(m_samples)
    for n in (0, 1, 7):
        for w in (0.5, 1.0, 2.5, 4.0):
            est = power_moment_char(n, alpha2p, w, m_samples, seed=70 + n)
            assert abs(est - bessel_j0(w)) <= tol, (n, w, est)


def power_moment_char(n, alpha, w, m_samples, seed):
    """Empirical char of the single unit-modulus variable X_alpha(n)."""
    tab = model_table(alpha, n)
    theta = kernels.phase_block(seed, tab.lam_ids, 0, m_samples)
    phi = np.zeros(m_samples)
    for k in range(tab.indptr[n], tab.indptr[n + 1]):
        phi += tab.vals[k] * theta[:, tab.cols[k]]
    z = np.exp(1j * phi)
    return empirical_char(complex(w), z).real


def test_joint_char_factorizes_for_independent_tuple(alpha2p):
    """A tuple with no bounded relation has factorizing joint chars."""
    from hurwitzlab.experiments import element_relation_search

    ns = [0, 1, 3]
    elems = [alpha2p.shifted(n) for n in ns]
    assert element_relation_search(alpha2p.field, elems, 5) == []
    m_samples = 40_000
    tab = model_table(alpha2p, max(ns))
    theta = kernels.phase_block(517, tab.lam_ids, 0, m_samples)
    phis = []
    for n in ns:
        phi = np.zeros(m_samples)
        for k in range(tab.indptr[n], tab.indptr[n + 1]):
            phi += tab.vals[k] * theta[:, tab.cols[k]]
        phis.append(np.exp(1j * phi))
    tol = 6.0 / math.sqrt(m_samples)
    for ws in [(1.0, 1.0, 1.0), (0.5, 2.0, 1.5), (2.0, 0.0, 3.0)]:
        joint = np.mean(np.exp(1j * sum(z.real * w for z, w in zip(phis, ws))))
        single = np.prod([np.mean(np.exp(1j * z.real * w))
                          for z, w in zip(phis, ws)])
        assert abs(joint - single) <= tol, ws


def test_private_coordinate_structure(alpha2p):
    """Members of K own a stream key untouched by the rest of M."""
    from hurwitzlab.cassels import k_alpha_set, m_upper

    n = 50
    kset = k_alpha_set(n, alpha2p)
    touched: dict = {}
    for m in range(m_upper(n) + 1):
        vec = shifted_ord(alpha2p, m)
        for key, _ in vec.items():
            touched.setdefault(key, set()).add(m)
    checked = 0
    for m in sorted(kset)[:25]:
        vec = shifted_ord(alpha2p, m)
        assert any(touched[key] == {m} for key, _ in vec.items())
        checked += 1
    assert checked


def test_moment_exact_contracts(alpha2p):
    af = float(alpha2p)
    assert moment_exact(1, 0, 0.8, 30, alpha2p) == 0.0
    expect = sum((n + af) ** -1.6 for n in range(31))
    assert moment_exact(1, 1, 0.8, 30, alpha2p) == pytest.approx(expect, rel=1e-12)
    assert moment_exact(2, 1, 0.8, 30, alpha2p) == 0.0
    assert moment_exact(0, 0, 0.8, 10, alpha2p) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        moment_exact(2, 2, 0.8, 10, alpha2p)
    with pytest.raises(ValueError):
        moment_exact(1, 1, 0.8, 100, alpha2p)


def test_moment_exact_vs_mc_second_moment(alpha2p):
    m_samples = 60_000
    s = draw_samples(0.8, 20, alpha2p, m_samples, seed=12)
    mc = float(np.mean(np.abs(s) ** 2))
    exact = moment_exact(1, 1, 0.8, 20, alpha2p)
    assert abs(mc - exact) <= 8.0 / math.sqrt(m_samples)


def test_omega0_probability(alpha2p):
    # N = 0: a single uniform variable, both numbers near 2 delta
    r0 = omega0_probability(0, 0.21, alpha2p, [1.0], 60_000, seed=3)
    assert r0["independent_prediction"] == pytest.approx(0.42)
    assert abs(r0["mc_estimate"] - 0.42) <= 4.0 * r0["mc_sigma"]
    # degenerate delta: no hits, flagged
    r_tiny = omega0_probability(1, 1e-9, alpha2p, [0.0, 0.0], 2000, seed=3)
    assert r_tiny["zero_hits"] and r_tiny["mc_estimate"] == 0.0
    with pytest.raises(ValueError):
        omega0_probability(0, 0.7, alpha2p, [0.0], 10, seed=1)
    with pytest.raises(ValueError):
        omega0_probability(1, 0.2, alpha2p, [0.0], 10, seed=1)


def test_hit_probability(alpha2p):
    s = draw_samples(0.8, 8, alpha2p, 500, seed=2)
    z0 = complex(np.mean(s))
    far = float(np.max(np.abs(s - z0)))
    assert hit_probability(s, z0, far + 1.0) == 1.0
    near = float(np.min(np.abs(s - z0)))
    assert hit_probability(s, z0, near * 0.5 if near > 0 else 1e-12) == 0.0
    with pytest.raises(ValueError):
        hit_probability(s, 0, 0.0)


def test_hit_probability_positive_at_origin_region(alpha2p):
    # golden from the first verified run: sigma=0.8, N=64, z0=0, eps=2.0
    s = draw_samples(0.8, 64, alpha2p, 50_000, seed=2024)
    assert hit_probability(s, 0.0, 2.0) > 0.1


def test_find_center_phases(alpha2p):
    res = find_center_phases(0.8, 3, alpha2p, 1.0 + 0.0j, 2048, seed=8)
    assert res["centers"].shape == (4,)
    ph = PhaseAssignment(derived_seed(8, res["sample_index"]))
    z = zeta_n_sample(0.8, 3, alpha2p, ph)
    assert abs(z - 1.0) == pytest.approx(res["distance"], abs=1e-12)


def test_support_radius_check(alpha2p):
    rep = support_radius_check(100, 0.8, alpha2p)
    assert rep["k_size"] > 0
    assert not rep["single_term_dominates"]
    assert rep["margin"] > 0.0


def test_backend_consistency_of_samples(alpha2p):
    """numpy and numba paths produce the same streams to rounding."""
    if not kernels.NUMBA_ENABLED:
        pytest.skip("numba backend not active")
    tab = model_table(alpha2p, 12)
    w = tab.weights(0.8, alpha2p)
    a = kernels.IMPLS["numba"]["model_samples"](9, tab.lam_ids, tab.indptr,
                                                tab.cols, tab.vals, w, 2000)
    b = kernels.IMPLS["numpy"]["model_samples"](9, tab.lam_ids, tab.indptr,
                                                tab.cols, tab.vals, w, 2000)
    assert np.max(np.abs(a - b)) < 1e-12

"""Acceptance criteria, one test each; the terminal summary prints PASS/FAIL per criterion."""

import math

import numpy as np
import pytest
from scipy.special import lambertw

from signedsums import bounds as bd
from signedsums import generators as gen
from signedsums.exact import max_over_selections, max_over_selections_planar, max_signed_sum
from signedsums.heuristics import bang_ascent, cap_greedy_selection
from signedsums.minimax import SearchSettings, estimate_c, theta_ratio

crit = pytest.mark.criterion


@crit(1, "simplex pair value sqrt(2+2/d); minimax reaches it for d=2,3,4")
def test_simplex_pair_value():
    for d in range(1, 9):
        target = math.sqrt(2 + 2 / d)
        assert max_over_selections(gen.gen_simplex(d), 2).value == pytest.approx(target, abs=1e-9)
    for d in (2, 3, 4):
        est = estimate_c(d, d + 1, 2)
        assert est.value == pytest.approx(math.sqrt(2 + 2 / d), abs=1e-4)


def _polygon_pairs():
    return [(n, k) for k in range(2, 7) for n in range(k, 13) if n % (k - 1) == 0]


@crit(2, "planar polygon-multiplicity attains the planar bound; random planar systems respect it")
def test_planar_sharpness():
    mismatches = []
    for n, k in _polygon_pairs():
        bound, sharp = bd.planar_lower(n, k)
        assert sharp
        for seed in range(200):
            rand = gen.gen_random_uniform(2, n, seed)
            assert max_over_selections_planar(rand, k).value >= bound - 1e-9
        value = max_over_selections_planar(gen.gen_polygon_multiplicity(n, k), k).value
        if abs(value - bound) > 1e-9:
            mismatches.append((n, k, value, bound))
    assert not mismatches, "polygon value != bound at (n, k, value, bound): " + repr(mismatches)


@crit(3, "orthonormal systems give sqrt(k); random systems never go below it")
def test_orthonormal_and_sqrt_k():
    for d in range(1, 7):
        for n in range(1, d + 1):
            cfg = gen.gen_orthonormal(d, n)
            for k in range(1, n + 1):
                assert max_over_selections(cfg, k).value == pytest.approx(math.sqrt(k), abs=1e-12)
    rng = np.random.default_rng(3)
    for seed in range(500):
        d, n = int(rng.integers(1, 5)), int(rng.integers(1, 11))
        cfg = gen.gen_random_uniform(d, n, seed)
        for k in range(1, n + 1):
            assert max_over_selections(cfg, k).value >= math.sqrt(k) - 1e-9


@crit(4, "sign-flip ascent ends with all margins >= 1 and value >= sqrt(n)")
def test_bang_certificate():
    rng = np.random.default_rng(4)
    for seed in range(500):
        d, n = int(rng.integers(1, 9)), int(rng.integers(1, 21))
        cfg = gen.gen_random_uniform(d, n, seed)
        res, cert = bang_ascent(cfg, seed=seed)
        assert cert.min_margin >= 1 - 1e-9
        assert res.value >= math.sqrt(n) - 1e-9


@crit(5, "zero-sum systems of d+1 vectors in even d have full signed sum >= sqrt(d+2)")
def test_zero_sum_even_dimension():
    for d in (2, 4, 6):
        for seed in range(100):
            cfg = gen.gen_zero_sum(d, d + 1, seed)
            assert max_signed_sum(cfg, range(d + 1)).value >= math.sqrt(d + 2) - 1e-9


@crit(6, "planar sweep equals enumeration; heuristics never exceed the exact value")
def test_oracle_equivalence():
    rng = np.random.default_rng(6)
    for seed in range(300):
        n = int(rng.integers(1, 13))
        cfg = gen.gen_random_uniform(2, n, seed)
        for k in range(1, n + 1):
            exact = max_over_selections(cfg, k).value
            assert max_over_selections_planar(cfg, k).value == pytest.approx(exact, abs=1e-9)
            assert cap_greedy_selection(cfg, k).value <= exact + 1e-9
        assert bang_ascent(cfg, seed=seed)[0].value <= max_over_selections(cfg, n).value + 1e-9


@crit(7, "exact values lie between the best exact lower bound and k; Welch bound below the pair value")
def test_bounds_consistency():
    rng = np.random.default_rng(7)
    for seed in range(300):
        d = int(rng.integers(1, 6))
        n = int(rng.integers(max(d, 2), 11))
        k = int(rng.integers(1, n + 1))
        cfg = gen.gen_random_uniform(d, n, seed)
        value = max_over_selections(cfg, k).value
        lowers = [r for r in bd.applicable_bounds(d, n, k)
                  if r.side == "lower" and r.validity == bd.EXACT and r.condition is None]
        assert all(r.validity != bd.ASYMPTOTIC for r in lowers)
        assert max(r.value for r in lowers) - 1e-9 <= value <= k + 1e-12
        assert bd.welch_pair_lower(d, n) <= max_over_selections(cfg, 2).value + 1e-9


@crit(8, "Lambert root residual <= 1e-12 on a 1000-point grid; phi(n, n) = 0.753089")
def test_lambert_solver():
    ns = np.unique(np.round(np.logspace(0, 6, 40)).astype(int))
    pts = [(k, n) for n in ns for k in np.unique(np.linspace(1, n, 25).astype(int))]
    while len(pts) < 1000:
        pts.append((1, len(pts)))
    pts = pts[:1000]
    for k, n in pts:
        phi = bd.lambert_phi(int(k), int(n))
        assert abs(phi * k / n - math.exp(-phi * phi / 2)) <= 1e-12
    assert bd.lambert_phi(50, 50) == pytest.approx(0.753089, abs=1e-5)
    assert bd.lambert_phi(50, 50) == pytest.approx(math.sqrt(lambertw(1.0).real), abs=1e-12)


@crit(9, "orthonormal copies: selecting m copies of a basis vectors gives sqrt(a) m")
def test_orthonormal_copies():
    for d in (2, 3):
        for m in (2, 3):
            cfg = gen.gen_orthonormal_copies(d, m)
            for a in range(1, d + 1):
                value = max_over_selections(cfg, a * m).value
                assert value == pytest.approx(math.sqrt(a) * m, abs=1e-9)


THETA_SETTINGS = SearchSettings(restarts=4, max_iters=300)


@crit(10, "large-parameter bounds: arithmetic, validity flags, and a directional check of n/sqrt(d)")
def test_large_parameter_bounds_substitute():
    # (a) arithmetic, each value recomputed by hand
    assert bd.general_lower(4, 1000, 3) == pytest.approx(3 - 8 * 3 ** (5 / 3) / 100, rel=1e-14)
    assert bd.general_upper(2, 10**6, 700).value == pytest.approx(700 - 700**3 * 1e-12 / 2304, rel=1e-15)
    phi = math.sqrt(lambertw(1.0).real)
    assert bd.large_k_upper(4, 40, 40).value == pytest.approx(4 * phi / math.sqrt(math.pi) * 20, rel=1e-12)
    lo, hi = bd.pair_large_n_bounds(10, 10**6)
    assert (lo.value, hi.value) == pytest.approx((2 - 0.51 * 1e-8 ** (1 / 6), 2 - 0.14 * 1e-8 ** (1 / 6)))
    # (b) every large-parameter bound carries the asymptotic flag and is never chosen as a finite bound
    for d, n, k in [(2, 10, 3), (3, 50, 50), (4, 1000, 3), (10, 10**6, 2), (5, 6, 6)]:
        for r in bd.applicable_bounds(d, n, k):
            if r.name in ("general_upper", "large_k_upper", "pair_large_n_lower", "pair_large_n_upper"):
                assert r.validity == bd.ASYMPTOTIC
        assert bd.best_exact_lower(d, n, k).validity == bd.EXACT
    # directional check on c(d, d, d) sqrt(d) / d
    window = (math.sqrt(2 / math.pi) - 0.05, 4 / math.sqrt(math.pi) + 0.05)
    for d in (4, 9, 16):
        est = estimate_c(d, d, d, THETA_SETTINGS)
        assert window[0] <= theta_ratio(est.value, d, d) <= window[1]

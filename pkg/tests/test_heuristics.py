import math

import numpy as np
import pytest

from signedsums import generators as gen
from signedsums.exact import max_over_selections, max_signed_sum
from signedsums.heuristics import (
    averaging_lower_bound,
    bang_ascent,
    bang_multistart,
    cap_greedy_selection,
)
from signedsums.sphere import random_rotation


@pytest.mark.parametrize("seed", range(30))
def test_bang_terminates_with_certificate(seed):
    cfg = gen.gen_random_uniform(5, 15, seed)
    res, cert = bang_ascent(cfg, seed=seed)
    s = res.sum
    assert cert.min_margin >= 1 - 1e-9
    # margins add up to |s|^2
    assert cert.margins.sum() == pytest.approx(s @ s, rel=1e-12)
    assert res.value >= math.sqrt(cfg.n) - 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_bang_end_point_is_flip_local_max(seed):
    cfg = gen.gen_random_uniform(3, 8, seed)
    res, _ = bang_ascent(cfg, seed=seed)
    eps = np.array(res.selection.signs, dtype=float)
    for i in range(cfg.n):
        e = eps.copy()
        e[i] = -e[i]
        assert np.linalg.norm(e @ cfg.vectors) <= res.value + 1e-12


def test_bang_from_given_signs_is_deterministic():
    cfg = gen.gen_random_uniform(4, 10, 3)
    a, _ = bang_ascent(cfg, np.ones(10))
    b, _ = bang_ascent(cfg, np.ones(10))
    assert a.selection == b.selection
    with pytest.raises(ValueError):
        bang_ascent(cfg, [1, 0, 1])


def test_bang_multistart_not_worse_than_all_plus_start():
    cfg = gen.gen_random_uniform(4, 12, 9)
    single, _ = bang_ascent(cfg, np.ones(12))
    multi, _ = bang_multistart(cfg, starts=6, seed=1)
    assert multi.value >= single.value - 1e-15
    assert multi.value <= max_signed_sum(cfg, range(12)).value + 1e-12


def test_averaging_bound_values():
    cfg = gen.gen_random_uniform(2, 5, 0)
    assert averaging_lower_bound(cfg, 4) == pytest.approx(8 / math.pi, rel=1e-14)
    cfg3 = gen.gen_random_uniform(3, 5, 0)
    # mean of |<v, u>| over S^2 is 1/2
    assert averaging_lower_bound(cfg3, 2) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("seed", range(20))
def test_cap_greedy_below_exact(seed):
    rng = np.random.default_rng(seed)
    d, n = int(rng.integers(2, 5)), int(rng.integers(3, 10))
    cfg = gen.gen_random_uniform(d, n, seed)
    for k in range(1, n + 1):
        res, info = cap_greedy_selection(cfg, k, return_info=True)
        assert res.value <= max_over_selections(cfg, k).value + 1e-12
        if info.guaranteed:
            assert res.value >= k * math.cos(info.radius) - 1e-9


def test_cap_greedy_finds_clustered_vectors():
    cfg = gen.gen_orthonormal_copies(3, 4)
    res = cap_greedy_selection(cfg, 4)
    assert res.value == pytest.approx(4.0, abs=1e-12)
    assert len(set(np.argmax(np.abs(cfg.vectors[list(res.selection.indices)]), axis=1))) == 1


def test_cap_greedy_rotation_invariant_value():
    cfg = gen.gen_random_uniform(3, 9, 4)
    q = random_rotation(3, np.random.default_rng(0))
    for k in (2, 5):
        a = cap_greedy_selection(cfg, k).value
        b = cap_greedy_selection(cfg.rotated(q), k).value
        assert a == pytest.approx(b, abs=1e-9)


def test_cap_greedy_rejects_bad_k():
    with pytest.raises(ValueError):
        cap_greedy_selection(gen.gen_random_uniform(3, 4, 0), 5)

import math

import numpy as np
import pytest

from signedsums import generators as gen
from signedsums.exact import max_over_selections
from signedsums.minimax import (
    SearchSettings,
    certify_not_below,
    estimate_c,
    inner_value,
    resolve_inner,
    theta_ratio,
    warm_start_configs,
)
from signedsums.sphere import random_rotation

QUICK = SearchSettings(restarts=2, max_iters=300)


def test_settings_validation():
    for bad in [dict(restarts=-1), dict(max_iters=0), dict(step_decay=1.0), dict(tolerance=1e-13),
                dict(inner="magic")]:
        with pytest.raises(ValueError):
            SearchSettings(**bad)


def test_inner_solver_choice():
    s = SearchSettings()
    assert resolve_inner(3, 6, 3, s) == "exact"
    assert resolve_inner(2, 60, 20, s) == "planar"
    assert resolve_inner(3, 40, 40, s) == "bang-multistart"
    with pytest.raises(ValueError):
        resolve_inner(3, 6, 3, SearchSettings(inner="planar"))


@pytest.mark.parametrize("d, n, k, expected", [
    (2, 2, 2, math.sqrt(2)),
    (2, 3, 2, math.sqrt(3)),
    (2, 6, 3, math.sqrt(7)),
])
def test_known_planar_values(d, n, k, expected):
    est = estimate_c(d, n, k, QUICK)
    assert est.value == pytest.approx(expected, abs=1e-6)
    # the estimate is an actual configuration value
    assert max_over_selections(est.best_config, k).value == pytest.approx(est.value, abs=1e-12)


def test_estimate_never_above_warm_starts():
    d, n, k = 3, 4, 2
    est = estimate_c(d, n, k, QUICK)
    for _, cfg in warm_start_configs(d, n, k):
        assert est.value <= inner_value(cfg, k) + 1e-12


def test_random_restarts_alone_descend():
    s = SearchSettings(restarts=3, max_iters=800, warm_starts=False, seed=4)
    est = estimate_c(2, 3, 2, s)
    assert est.value == pytest.approx(math.sqrt(3), abs=1e-5)
    start = min(inner_value(gen.gen_random_uniform(2, 3, 0), 2), 2.0)
    assert est.value <= start


def test_determinism_and_rotation_invariance():
    a = estimate_c(3, 4, 3, QUICK)
    b = estimate_c(3, 4, 3, QUICK)
    assert a.value == b.value
    q = random_rotation(3, np.random.default_rng(1))
    c = estimate_c(3, 4, 3, QUICK, init_rotation=q)
    assert c.value == pytest.approx(a.value, abs=1e-8)


def test_certify_and_theta():
    cfg = gen.gen_simplex(3)
    assert certify_not_below(cfg, 2, math.sqrt(8 / 3))
    assert not certify_not_below(cfg, 2, 1.7)
    assert theta_ratio(4.0, 4, 4) == 2.0


def test_argument_checks():
    with pytest.raises(ValueError):
        estimate_c(3, 2, 2)
    with pytest.raises(ValueError):
        estimate_c(3, 4, 5)
    with pytest.raises(ValueError):
        estimate_c(3, 4, 2, SearchSettings(restarts=0, warm_starts=False))

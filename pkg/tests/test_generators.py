import math

import numpy as np
import pytest

from signedsums import generators as gen
from signedsums.generators import GeneratorError, GeneratorSpec, generate


@pytest.mark.parametrize("d", range(1, 9))
def test_simplex_gram_and_zero_sum(d):
    u = gen.gen_simplex(d).vectors
    assert u.shape == (d + 1, d)
    expected = (1 + 1 / d) * np.eye(d + 1) - 1 / d
    assert np.allclose(u @ u.T, expected, atol=1e-13)
    assert np.linalg.norm(u.sum(axis=0)) < 1e-13


def test_planar_simplex_directions():
    u = gen.gen_simplex(2).vectors
    ang = np.degrees(np.mod(np.arctan2(u[:, 1], u[:, 0]), 2 * np.pi))
    assert np.allclose(ang, [90, 210, 330], atol=1e-10)


def test_orthonormal_and_copies():
    assert np.array_equal(gen.gen_orthonormal(4, 3).vectors, np.eye(4)[:3])
    u = gen.gen_orthonormal_copies(2, 3).vectors
    assert np.array_equal(u, [[1, 0], [1, 0], [1, 0], [0, 1], [0, 1], [0, 1]])
    with pytest.raises(GeneratorError):
        gen.gen_orthonormal(2, 3)


def test_polygon_multiplicity_layout():
    u = gen.gen_polygon_multiplicity(6, 3).vectors
    ang = np.arctan2(u[:, 1], u[:, 0])
    assert np.allclose(ang, np.repeat([0, math.pi / 3, 2 * math.pi / 3], 2))
    with pytest.raises(GeneratorError, match=r"\(k-1\) must divide n"):
        gen.gen_polygon_multiplicity(5, 3)


def test_simplex_plus_orthonormal():
    u = gen.gen_simplex_plus_orthonormal(5, 2).vectors
    assert u.shape == (6, 5)
    assert np.allclose(u[:3, :2] @ u[:3, :2].T, 1.5 * np.eye(3) - 0.5)
    assert np.array_equal(u[3:, 2:], np.eye(3))
    for h in (0, 3, 6):
        with pytest.raises(GeneratorError):
            gen.gen_simplex_plus_orthonormal(5, h)


def test_random_uniform_is_seed_deterministic():
    a = gen.gen_random_uniform(3, 20, seed=7)
    b = gen.gen_random_uniform(3, 20, seed=7)
    c = gen.gen_random_uniform(3, 20, seed=8)
    assert a == b and not a == c
    assert np.allclose(np.linalg.norm(a.vectors, axis=1), 1.0, atol=1e-15)


@pytest.mark.parametrize("d, n", [(2, 3), (4, 5), (6, 7), (3, 10)])
def test_zero_sum(d, n):
    for seed in range(5):
        u = gen.gen_zero_sum(d, n, seed).vectors
        assert np.linalg.norm(u.sum(axis=0)) <= 1e-9
        assert np.allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-12)


def test_delta_separated_respects_spacing():
    cfg = gen.gen_delta_separated(3, 0.6, seed=1, patience=200)
    u = cfg.vectors
    g = np.clip(u @ u.T, -1, 1)
    iu = np.triu_indices(cfg.n, 1)
    assert np.arccos(g[iu]).min() >= 0.6 - 1e-12
    assert cfg.n > 10


def test_antipodal_separated():
    delta = 0.6
    cfg = gen.gen_antipodal_separated(3, 6, delta, seed=2)
    u = cfg.vectors
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            assert np.linalg.norm(u[i] - u[j]) >= delta - 1e-12
            assert np.linalg.norm(u[i] + u[j]) >= delta - 1e-12
    with pytest.raises(GeneratorError):
        gen.gen_antipodal_separated(3, 40, 1.4, seed=0, budget=10_000)


def test_generate_dispatch_and_metadata():
    spec = GeneratorSpec(kind="polygon", n=6, k=3)
    cfg = generate(spec)
    assert cfg.n == 6 and cfg.dim == 2
    assert generate(GeneratorSpec(kind="simplex", d=3)).n == 4
    with pytest.raises(GeneratorError):
        generate(GeneratorSpec(kind="random-uniform", d=3))
    with pytest.raises(GeneratorError):
        generate(GeneratorSpec(kind="nope", d=3, n=3))

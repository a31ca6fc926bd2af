"""Named and randomized unit-vector configurations.

Randomized generators take an integer ``seed`` and keep their RNG local, so
equal arguments always give equal configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sphere import Configuration, GeometryError

KINDS = (
    "orthonormal",
    "orthonormal-copies",
    "simplex",
    "polygon-multiplicity",
    "simplex-plus-orthonormal",
    "random-uniform",
    "zero-sum",
    "delta-separated",
    "antipodal-separated",
)

ZERO_SUM_TOL = 1e-9
ZERO_SUM_MAX_ITERS = 10_000
ZERO_SUM_MAX_SEEDS = 16


class GeneratorError(GeometryError):
    """Generator parameters violate a precondition, or a randomized search failed."""


def _rng(seed, *extra) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), *extra]))


def gen_orthonormal(d: int, n: int) -> Configuration:
    """First ``n`` standard basis vectors of R^d."""
    if not 1 <= n <= d:
        raise GeneratorError(f"orthonormal needs 1 <= n <= d, got n={n}, d={d}")
    return Configuration(np.eye(d)[:n])


def gen_orthonormal_copies(d: int, m: int) -> Configuration:
    """Each of e_1..e_d repeated ``m`` times in a row: n = m*d vectors."""
    if d < 1 or m < 1:
        raise GeneratorError(f"orthonormal-copies needs d, m >= 1, got d={d}, m={m}")
    return Configuration(np.repeat(np.eye(d), m, axis=0))


def gen_simplex(d: int) -> Configuration:
    """Vertices of the regular simplex inscribed in S^{d-1}; n = d + 1.

    Coordinates come from factoring the Gram matrix (1 + 1/d) I - J/d, then
    triangularizing so the output is canonical: the first vertex is e_d
    (for d = 2 the directions are 90, 210 and 330 degrees).
    """
    if d < 1:
        raise GeneratorError(f"simplex needs d >= 1, got {d}")
    n = d + 1
    gram = (1.0 + 1.0 / d) * np.eye(n) - np.full((n, n), 1.0 / d)
    w, v = np.linalg.eigh(gram)
    # eigenvalue 0 belongs to the all-ones vector and comes first
    u = v[:, 1:] * np.sqrt(np.clip(w[1:], 0.0, None))
    q, r = np.linalg.qr(u[:d].T)
    u = u @ q
    # sign convention: first vertex positive, the others' leading new coordinate negative
    signs = -np.sign(np.diag(r))
    signs[0] = -signs[0]
    u = u * signs
    u = u[:, ::-1]
    # exact zero sum and unit norms up to rounding
    u -= u.mean(axis=0)
    return Configuration(u)


def gen_polygon_multiplicity(n: int, k: int) -> Configuration:
    """Planar system whose antipodal closure is a regular 2n/(k-1)-gon, each vertex k-1 times."""
    if k < 2:
        raise GeneratorError(f"polygon-multiplicity needs k >= 2, got {k}")
    if n < 1 or n % (k - 1):
        raise GeneratorError(f"(k-1) must divide n (got n={n}, k={k})")
    per_half = n // (k - 1)
    angles = np.repeat(np.arange(per_half) * math.pi / per_half, k - 1)
    return Configuration(np.column_stack([np.cos(angles), np.sin(angles)]))


def gen_simplex_plus_orthonormal(d: int, h: int) -> Configuration:
    """Regular simplex spanning the first ``h`` coordinates plus e_{h+1}, ..., e_d."""
    if h % 2:
        raise GeneratorError(f"subspace dimension h must be even, got {h}")
    if h == 0:
        raise GeneratorError("h = 0 leaves a one-point simplex in a 0-dimensional subspace; rejected")
    if not 0 < h <= d:
        raise GeneratorError(f"need 0 < h <= d, got h={h}, d={d}")
    out = np.zeros((d + 1, d))
    out[: h + 1, :h] = gen_simplex(h).vectors
    out[h + 1 :, h:] = np.eye(d - h)
    return Configuration(out)


def gen_random_uniform(d: int, n: int, seed: int = 0) -> Configuration:
    """``n`` independent uniform points on S^{d-1} (normalized Gaussians)."""
    if d < 1 or n < 1:
        raise GeneratorError(f"random-uniform needs d, n >= 1, got d={d}, n={n}")
    rng = _rng(seed)
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    # a Gaussian sample of norm < 1e-9 is astronomically rare; redraw those rows
    while np.any(norms < 1e-9):
        bad = norms < 1e-9
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    return Configuration(g / norms[:, None])


def _zero_sum_attempt(d, n, rng):
    u = rng.standard_normal((n, d))
    u /= np.linalg.norm(u, axis=1)[:, None]
    for _ in range(ZERO_SUM_MAX_ITERS):
        u = u - u.mean(axis=0)
        norms = np.linalg.norm(u, axis=1)
        if np.any(norms < 1e-6):
            return None
        u /= norms[:, None]
        if np.linalg.norm(u.sum(axis=0)) <= 0.1 * ZERO_SUM_TOL:
            return u
    return None


def gen_zero_sum(d: int, n: int, seed: int = 0) -> Configuration:
    """Unit vectors summing to zero, by alternating mean-removal and renormalization.

    A draw that has not converged after 10^4 sweeps is abandoned for a fresh
    sub-seed; 16 failed draws raise GeneratorError.
    """
    if d < 1 or n < d + 1:
        raise GeneratorError(f"zero-sum needs d >= 1 and n >= d+1, got d={d}, n={n}")
    for attempt in range(ZERO_SUM_MAX_SEEDS):
        u = _zero_sum_attempt(d, n, _rng(seed, attempt))
        if u is None:
            continue
        cfg = Configuration(u)
        if np.linalg.norm(cfg.vectors.sum(axis=0)) <= ZERO_SUM_TOL:
            return cfg
    raise GeneratorError(f"zero-sum iteration did not converge for d={d}, n={n}, seed={seed}")


def gen_delta_separated(d: int, delta: float, seed: int = 0, patience: int = 10_000,
                        batch: int = 4096) -> Configuration:
    """Greedy geodesically ``delta``-separated set on S^{d-1}.

    Uniform candidates are accepted when no accepted point lies within angle
    ``delta``. Stops after ``patience * size`` consecutive rejections, so the
    result is separated but only approximately maximal.
    """
    if d < 2:
        raise GeneratorError(f"delta-separated needs d >= 2, got {d}")
    if not 0.0 < delta < 0.5 * math.pi:
        raise GeneratorError(f"delta must lie in (0, pi/2), got {delta}")
    rng = _rng(seed)
    cos_delta = math.cos(delta)
    pts = np.empty((64, d))
    size = 0
    misses = 0
    while True:
        cand = rng.standard_normal((batch, d))
        cand /= np.linalg.norm(cand, axis=1)[:, None]
        if size:
            ok = np.max(cand @ pts[:size].T, axis=1) <= cos_delta
        else:
            ok = np.ones(batch, dtype=bool)
        prev = -1
        done = False
        for j in np.flatnonzero(ok):
            if size and np.max(pts[:size] @ cand[j]) > cos_delta:
                continue
            misses += j - prev - 1
            if size and misses >= patience * size:
                done = True
                break
            if size == pts.shape[0]:
                pts = np.vstack([pts, np.empty_like(pts)])
            pts[size] = cand[j]
            size += 1
            misses = 0
            prev = j
        if done:
            break
        misses += batch - prev - 1
        if size and misses >= patience * size:
            break
    return Configuration(pts[:size])


def gen_antipodal_separated(d: int, n: int, delta: float, seed: int = 0,
                            budget: int = 2_000_000, batch: int = 4096) -> Configuration:
    """``n`` points with both |x_i - x_j| >= delta and |x_i + x_j| >= delta (chordal).

    Every two-term signed sum of the result then has norm at most sqrt(4 - delta^2).
    """
    if d < 2:
        raise GeneratorError(f"antipodal-separated needs d >= 2, got {d}")
    if n < 1:
        raise GeneratorError(f"need n >= 1, got {n}")
    if not 0.0 < delta <= math.sqrt(2.0):
        raise GeneratorError(f"chordal separation must lie in (0, sqrt 2], got {delta}")
    rng = _rng(seed)
    # |x - y| >= delta and |x + y| >= delta  <=>  |<x, y>| <= 1 - delta^2 / 2
    max_abs_ip = 1.0 - 0.5 * delta * delta
    pts = np.empty((n, d))
    size = 0
    drawn = 0
    while size < n:
        if drawn >= budget:
            raise GeneratorError(
                f"found only {size} of {n} antipodally {delta}-separated points within {budget} candidates")
        cand = rng.standard_normal((batch, d))
        cand /= np.linalg.norm(cand, axis=1)[:, None]
        drawn += batch
        ok = np.max(np.abs(cand @ pts[:size].T), axis=1) <= max_abs_ip if size else np.ones(batch, bool)
        for j in np.flatnonzero(ok):
            if size and np.max(np.abs(pts[:size] @ cand[j])) > max_abs_ip:
                continue
            pts[size] = cand[j]
            size += 1
            if size == n:
                break
    return Configuration(pts)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for one generator call, as accepted by :func:`generate`."""

    kind: str
    d: int | None = None
    n: int | None = None
    seed: int = 0
    delta: float | None = None
    k: int | None = None
    m: int | None = None
    h: int | None = None
    extra: dict = field(default_factory=dict)

    def metadata(self) -> dict:
        meta = {"kind": self.kind}
        for key in ("d", "n", "seed", "delta", "k", "m", "h"):
            val = getattr(self, key)
            if val is not None:
                meta[key] = val
        return meta


def _need(spec, *names):
    missing = [nm for nm in names if getattr(spec, nm) is None]
    if missing:
        raise GeneratorError(f"kind {spec.kind!r} requires {', '.join(missing)}")


def generate(spec: GeneratorSpec) -> Configuration:
    """Dispatch a :class:`GeneratorSpec` to the matching generator."""
    kind = spec.kind
    if kind == "orthonormal":
        _need(spec, "d")
        return gen_orthonormal(spec.d, spec.n if spec.n is not None else spec.d)
    if kind == "orthonormal-copies":
        _need(spec, "d")
        if spec.m is None:
            _need(spec, "n")
            if spec.n % spec.d:
                raise GeneratorError(f"orthonormal-copies needs d | n, got n={spec.n}, d={spec.d}")
            return gen_orthonormal_copies(spec.d, spec.n // spec.d)
        return gen_orthonormal_copies(spec.d, spec.m)
    if kind == "simplex":
        _need(spec, "d")
        if spec.n is not None and spec.n != spec.d + 1:
            raise GeneratorError(f"simplex needs n = d+1, got n={spec.n}, d={spec.d}")
        return gen_simplex(spec.d)
    if kind in ("polygon-multiplicity", "polygon"):
        _need(spec, "n", "k")
        if spec.d not in (None, 2):
            raise GeneratorError(f"polygon-multiplicity is planar, got d={spec.d}")
        return gen_polygon_multiplicity(spec.n, spec.k)
    if kind == "simplex-plus-orthonormal":
        _need(spec, "d", "h")
        return gen_simplex_plus_orthonormal(spec.d, spec.h)
    if kind == "random-uniform":
        _need(spec, "d", "n")
        return gen_random_uniform(spec.d, spec.n, spec.seed)
    if kind == "zero-sum":
        _need(spec, "d", "n")
        return gen_zero_sum(spec.d, spec.n, spec.seed)
    if kind == "delta-separated":
        _need(spec, "d", "delta")
        return gen_delta_separated(spec.d, spec.delta, spec.seed, **spec.extra)
    if kind == "antipodal-separated":
        _need(spec, "d", "n", "delta")
        return gen_antipodal_separated(spec.d, spec.n, spec.delta, spec.seed, **spec.extra)
    raise GeneratorError(f"unknown generator kind {kind!r}; expected one of {', '.join(KINDS)}")

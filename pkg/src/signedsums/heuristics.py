"""Lower-bound solvers that scale past exhaustive enumeration.

``bang_ascent`` chooses signs for all n vectors by single sign flips and
returns a margin certificate; ``cap_greedy_selection`` picks k vectors whose
oriented copies crowd into one small spherical cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import SignedSelection, SolveResult
from .sphere import Configuration, cap_radius_for_measure, kappa_ratio

FLIP_TOL = 1e-12
GOLDEN_STEPS = 50
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BangCertificate:
    """margins[i] = <eps_i u_i, sum_j eps_j u_j> at the returned signs."""

    margins: np.ndarray
    min_margin: float
    flips: int = 0


def bang_ascent(config: Configuration, initial_signs=None, seed: int = 0,
                max_flips: int | None = None) -> tuple[SolveResult, BangCertificate]:
    """Steepest single-sign-flip ascent of |sum eps_i u_i|.

    Flipping sign i changes the squared norm by 4 - 4 * margin_i, so a flip
    helps exactly when margin_i < 1; the flip with the smallest margin
    (lowest index on ties) is taken. At termination every margin is >= 1,
    which forces |sum|^2 = sum of margins >= n.

    Without ``initial_signs`` the start is drawn from ``seed``.
    """
    u = config.vectors
    n = config.n
    if initial_signs is None:
        eps = np.random.default_rng(seed).choice([-1.0, 1.0], size=n)
    else:
        eps = np.asarray(initial_signs, dtype=float).reshape(-1)
        if eps.size != n or np.any(np.abs(eps) != 1.0):
            raise ValueError(f"initial_signs must be {n} values in {{+1, -1}}")
        eps = eps.copy()
    if max_flips is None:
        max_flips = 1 << min(n, 40)
    s = eps @ u
    flips = 0
    while flips < max_flips:
        margins = eps * (u @ s)
        i = int(np.argmin(margins))
        if margins[i] >= 1.0 - FLIP_TOL:
            break
        s -= 2.0 * eps[i] * u[i]
        eps[i] = -eps[i]
        flips += 1
        if flips % 64 == 0:
            s = eps @ u  # limit drift
    s = eps @ u
    margins = eps * (u @ s)
    sel = SignedSelection(tuple(range(n)), tuple(int(e) for e in eps))
    result = SolveResult.from_selection(config, sel, "heuristic", flips)
    return result, BangCertificate(margins, float(margins.min()), flips)


def bang_multistart(config: Configuration, starts: int = 8, seed: int = 0) -> tuple[SolveResult, BangCertificate]:
    """Best of ``starts`` seeded Bang ascents (the all-plus start included)."""
    best = bang_ascent(config, np.ones(config.n))
    ss = np.random.SeedSequence(seed)
    for child in ss.spawn(max(0, starts - 1)):
        cand = bang_ascent(config, seed=int(child.generate_state(1)[0]))
        if cand[0].value > best[0].value + 1e-15:
            best = cand
    return best


def averaging_lower_bound(config: Configuration, k: int) -> float:
    """Spherical average of sum |<v, u_i>| over any k of the vectors: 2 k kappa_{d-1} / (d kappa_d)."""
    if not 1 <= k <= config.n:
        raise ValueError(f"k must satisfy 1 <= k <= n={config.n}, got {k}")
    return 2.0 * k * kappa_ratio(config.dim)


def _topk_score(u: np.ndarray, x: np.ndarray, k: int) -> float:
    a = np.abs(u @ x)
    return float(np.sum(np.partition(a, a.size - k)[a.size - k:]))


def _count(u: np.ndarray, x: np.ndarray, cos_r: float) -> int:
    return int(np.count_nonzero(np.abs(u @ x) >= cos_r - 1e-12))


def _refine(u: np.ndarray, x: np.ndarray, k: int, cos_r: float) -> np.ndarray:
    """Golden-section search for the top-k score along the great circle toward the cap centroid."""
    ip = u @ x
    inside = np.abs(ip) >= cos_r - 1e-12
    if not np.any(inside):
        return x
    c = (np.sign(ip[inside])[:, None] * u[inside]).sum(axis=0)
    w = c - (c @ x) * x
    wn = np.linalg.norm(w)
    if wn < 1e-14:
        return x
    w /= wn
    span = math.atan2(wn, float(c @ x))
    if span <= 0.0:
        return x
    point = lambda t: math.cos(t) * x + math.sin(t) * w
    a, b = 0.0, span
    t1, t2 = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    f1, f2 = _topk_score(u, point(t1), k), _topk_score(u, point(t2), k)
    for _ in range(GOLDEN_STEPS):
        if f1 < f2:
            a, t1, f1 = t1, t2, f2
            t2 = a + _INVPHI * (b - a)
            f2 = _topk_score(u, point(t2), k)
        else:
            b, t2, f2 = t2, t1, f1
            t1 = b - _INVPHI * (b - a)
            f1 = _topk_score(u, point(t1), k)
    return point(0.5 * (a + b))


@dataclass(frozen=True)
class CapGreedyInfo:
    center: np.ndarray
    radius: float
    count: int
    guaranteed: bool


def cap_greedy_selection(config: Configuration, k: int, return_info: bool = False):
    """Choose k signed vectors that fall into one spherical cap of measure k/(2n).

    Every point of the antipodal system is tried as a cap center; the center
    whose cap holds the most points wins (ties: largest sum of the k largest
    |<x, u_i>|, then earliest candidate), and is then polished by a golden-
    section search toward the cap's centroid. The k vectors with the largest
    |<x, u_i>| are returned, each signed toward x. When the cap holds at least
    k of them the value is at least k cos r.
    """
    n, d = config.n, config.dim
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    if d < 2:
        raise ValueError("cap_greedy_selection needs d >= 2")
    u = config.vectors
    r = cap_radius_for_measure(d, k / (2.0 * n))
    cos_r = math.cos(r)
    cands = config.antipodal()
    ip = np.abs(cands @ u.T)  # (2n, n)
    counts = np.count_nonzero(ip >= cos_r - 1e-12, axis=1)
    scores = np.sum(np.partition(ip, n - k, axis=1)[:, n - k:], axis=1)
    order = np.lexsort((np.arange(2 * n), -scores, -counts))
    x = cands[order[0]]
    count = int(counts[order[0]])
    score = float(scores[order[0]])
    y = _refine(u, x, k, cos_r)
    y_count, y_score = _count(u, y, cos_r), _topk_score(u, y, k)
    if y_count >= min(count, k) and y_score > score:
        x, count = y, y_count
    ipx = u @ x
    top = np.lexsort((np.arange(n), -np.abs(ipx)))[:k]
    top.sort()
    signs = tuple(1 if ipx[i] >= 0 else -1 for i in top)
    result = SolveResult.from_selection(config, SignedSelection(tuple(top), signs), "heuristic")
    if return_info:
        return result, CapGreedyInfo(x, r, count, count >= k)
    return result

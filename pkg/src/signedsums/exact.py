"""Exact maximal signed k-term subset sums.

Two exact routes are provided:

* enumeration of every k-subset and every sign class, in any dimension; and
* a critical-angle sweep for planar configurations.

Enumeration walks the sign patterns of each subset in Gray-code order, so
moving to the next pattern costs one vector update. Sign patterns are split
into a low block, tabulated once per subset batch, and a high block walked
by the Gray code; many subsets are processed together as one numpy batch.
Indices are 0-based here; the CLI converts to 1-based for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .sphere import Configuration, GeometryError

MAX_SUBSET_SIZE = 30
ENUMERATION_BUDGET = 10**8
TIE_TOL = 1e-12
SUBGRADIENT_TIE_TOL = 1e-9

_LOW_BITS = 10
_BATCH_ELEMS = 1 << 20


class BudgetExceeded(RuntimeError):
    """An exact enumeration would exceed its configured work budget."""


@dataclass(frozen=True)
class SignedSelection:
    """``k`` strictly increasing indices with matching +1/-1 signs."""

    indices: tuple
    signs: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        sg = tuple(int(s) for s in self.signs)
        if len(idx) != len(sg):
            raise ValueError("indices and signs differ in length")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing, got {idx}")
        if any(s not in (1, -1) for s in sg):
            raise ValueError(f"signs must be +1 or -1, got {sg}")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "signs", sg)

    @property
    def k(self) -> int:
        return len(self.indices)

    def vector_sum(self, config: Configuration) -> np.ndarray:
        u = config.vectors
        return np.asarray(self.signs, dtype=float) @ u[list(self.indices)]

    def canonical(self) -> "SignedSelection":
        """Same selection with the global sign chosen so the first sign is +1."""
        if self.signs and self.signs[0] == -1:
            return SignedSelection(self.indices, tuple(-s for s in self.signs))
        return self

    def sort_key(self):
        # +1 sorts before -1
        return (self.indices, tuple(0 if s == 1 else 1 for s in self.signs))


@dataclass(frozen=True)
class SolveResult:
    """A selection, its vector sum and the sum's norm."""

    selection: SignedSelection
    sum: np.ndarray
    value: float
    certificate: str | None = None
    evaluated: int = 0
    ties: tuple = field(default=(), repr=False)

    @classmethod
    def from_selection(cls, config: Configuration, sel: SignedSelection, certificate=None,
                       evaluated=0, ties=()):
        s = sel.vector_sum(config)
        return cls(sel, s, float(np.linalg.norm(s)), certificate, evaluated, tuple(ties))


def _check_subset(config: Configuration, subset) -> list:
    idx = [int(i) for i in subset]
    if not idx:
        raise ValueError("subset must contain at least one index")
    if len(set(idx)) != len(idx):
        raise ValueError(f"subset indices must be distinct, got {idx}")
    if min(idx) < 0 or max(idx) >= config.n:
        raise ValueError(f"subset indices must lie in [0, {config.n - 1}], got {idx}")
    if len(idx) > MAX_SUBSET_SIZE:
        raise BudgetExceeded(f"subset size {len(idx)} exceeds the enumeration limit {MAX_SUBSET_SIZE}")
    return sorted(idx)


def _sign_table(bits: int) -> np.ndarray:
    """All +-1 patterns of length ``bits``; row p has -1 at bit b when bit b of p is set.

    Bit b corresponds to column ``bits - 1 - b`` so row order is lexicographic
    with +1 before -1.
    """
    p = np.arange(1 << bits)[:, None]
    shifts = np.arange(bits - 1, -1, -1)[None, :]
    return 1.0 - 2.0 * ((p >> shifts) & 1)


def gray_flip_sequence(bits: int) -> np.ndarray:
    """Bit index flipped at each step of the reflected Gray code on ``bits`` bits."""
    if bits <= 0:
        return np.zeros(0, dtype=np.int64)
    steps = np.arange(1, 1 << bits, dtype=np.int64)
    # index of the lowest set bit
    return np.log2(steps & -steps).astype(np.int64)


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def _subset_batch_maxima(vecs: np.ndarray, k: int):
    """Max over sign classes for every subset in ``vecs`` of shape (b, k, d).

    The first sign is fixed to +1 (global sign symmetry). Returns the maxima of
    the squared norms, shape (b,), plus the number of patterns evaluated.
    """
    free = k - 1
    low = min(free, _LOW_BITS)
    high = free - low
    # columns 1..low get the tabulated patterns, columns low+1..k-1 the Gray walk
    table = _sign_table(low)  # (2^low, low)
    base = np.matmul(table, vecs[:, 1 : 1 + low, :])
    base += vecs[:, 0, :][:, None, :]
    hi_vecs = vecs[:, 1 + low :, :]  # (b, high, d)
    offset = hi_vecs.sum(axis=1)  # all +1 to start
    tot = base + offset[:, None, :]
    best = np.max(np.einsum("bpd,bpd->bp", tot, tot), axis=1)
    hi_signs = np.ones(high)
    for bit in gray_flip_sequence(high):
        # Gray bit b toggles the sign of the high column counted from the right
        col = high - 1 - bit
        hi_signs[col] = -hi_signs[col]
        offset = offset + 2.0 * hi_signs[col] * hi_vecs[:, col, :]
        np.add(base, offset[:, None, :], out=tot)
        np.maximum(best, np.max(np.einsum("bpd,bpd->bp", tot, tot), axis=1), out=best)
    return best, vecs.shape[0] << free


def _best_signs_for_subset(vecs: np.ndarray, target_sq: float, tol: float,
                          limit: int | None = None, by_value: bool = False):
    """Sign patterns (first sign +1) within ``tol`` of ``target_sq`` (squared norm).

    Returned in lexicographic sign order (+1 before -1), or by decreasing norm
    with that order breaking ties when ``by_value``; at most ``limit`` of them.
    """
    k = vecs.shape[0]
    free = k - 1
    low = min(free, _LOW_BITS)
    high = free - low
    table = _sign_table(low)
    base = vecs[0] + table @ vecs[1 : 1 + low]
    hi_vecs = vecs[1 + low :]
    hi_table = _sign_table(high) if high else np.zeros((1, 0))
    vals, lows, highs = [], [], []
    for r, row in enumerate(hi_table):
        tot = base + row @ hi_vecs
        sq = np.einsum("pd,pd->p", tot, tot)
        hit = np.flatnonzero(sq >= target_sq - tol)
        vals.append(sq[hit])
        lows.append(hit)
        highs.append(np.full(hit.size, r))
    vals, lows, highs = np.concatenate(vals), np.concatenate(lows), np.concatenate(highs)
    # table rows are already in lexicographic order
    rank = (lows.astype(np.int64) << high) | highs
    order = np.lexsort((rank, -vals)) if by_value else np.argsort(rank, kind="stable")
    if limit is not None:
        order = order[:limit]
    return [(float(vals[i]), np.concatenate([[1.0], table[lows[i]], hi_table[highs[i]]])) for i in order]


def _sq_tol(value_sq: float, tol: float) -> float:
    # |x| >= M - tol  <=>  x^2 >= M^2 - (2 M tol - tol^2), for tol <= M
    m = math.sqrt(max(value_sq, 0.0))
    if tol >= m:
        return value_sq
    return 2.0 * m * tol - tol * tol


def _enumerate(config: Configuration, k: int, subsets, tie_tol: float, max_ties: int,
               by_value: bool = False):
    u = config.vectors
    d = config.dim
    batch = max(1, _BATCH_ELEMS // ((1 << min(k - 1, _LOW_BITS)) * max(d, 1)))
    best_sq = -1.0
    candidates: list[tuple[float, tuple]] = []
    evaluated = 0
    it = iter(subsets)
    while True:
        chunk = []
        for sub in it:
            chunk.append(sub)
            if len(chunk) >= batch:
                break
        if not chunk:
            break
        idx = np.asarray(chunk, dtype=np.int64)
        maxima, cnt = _subset_batch_maxima(u[idx], k)
        evaluated += cnt
        m = float(maxima.max())
        if m > best_sq:
            best_sq = m
            thr = best_sq - _sq_tol(best_sq, tie_tol)
            candidates = [(v, s) for v, s in candidates if v >= thr]
        thr = best_sq - _sq_tol(best_sq, tie_tol)
        for j in np.flatnonzero(maxima >= thr):
            candidates.append((float(maxima[j]), tuple(chunk[j])))
    thr = best_sq - _sq_tol(best_sq, tie_tol)
    tied = [(v, s) for v, s in candidates if v >= thr]
    if by_value:
        tied.sort(key=lambda t: -t[0])
    found = []
    for _, sub in tied:
        room = max_ties if by_value else max_ties - len(found)
        hits = _best_signs_for_subset(u[list(sub)], best_sq, _sq_tol(best_sq, tie_tol), room, by_value)
        found.extend((v, SignedSelection(sub, tuple(int(x) for x in signs))) for v, signs in hits)
        if not by_value and len(found) >= max_ties:
            break
    if by_value:
        found.sort(key=lambda t: (-t[0], t[1].sort_key()))
    return best_sq, [sel for _, sel in found[:max_ties]], evaluated


def max_signed_sum(config: Configuration, subset: Sequence[int], tie_tol: float = TIE_TOL) -> SolveResult:
    """Exact maximum of |sum eps_j u_{i_j}| over all sign patterns for one subset.

    Among patterns tied within ``tie_tol`` the lexicographically smallest sign
    vector (+1 before -1) with first sign +1 is returned.
    """
    idx = _check_subset(config, subset)
    best_sq, sels, evaluated = _enumerate(config, len(idx), [tuple(idx)], tie_tol, max_ties=1)
    return SolveResult.from_selection(config, sels[0], "exhaustive", evaluated)


def enumeration_cost(n: int, k: int) -> int:
    return math.comb(n, k) << (k - 1)


def max_over_selections(config: Configuration, k: int, budget: int = ENUMERATION_BUDGET,
                        tie_tol: float = TIE_TOL, collect_ties: int = 0) -> SolveResult:
    """Exact maximum over all k-subsets and sign patterns.

    Ties within ``tie_tol`` go to the lexicographically smallest indices, then
    signs. With ``collect_ties > 0`` up to that many selections within
    ``tie_tol`` of the maximum are attached as ``ties``.
    """
    n = config.n
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    if k > MAX_SUBSET_SIZE:
        raise BudgetExceeded(f"k={k} exceeds the enumeration limit {MAX_SUBSET_SIZE}")
    cost = enumeration_cost(n, k)
    if cost > budget:
        raise BudgetExceeded(
            f"C({n},{k})*2^{k - 1} = {cost} sign patterns exceeds the budget {budget}; "
            "use the planar sweep (d=2) or a heuristic method")
    best_sq, sels, evaluated = _enumerate(config, k, combinations(range(n), k), tie_tol,
                                          max_ties=max(1, collect_ties))
    return SolveResult.from_selection(config, sels[0], "exhaustive", evaluated,
                                      ties=sels if collect_ties else ())


def near_maximizers(config: Configuration, k: int, window: float, max_count: int = 256,
                    budget: int = ENUMERATION_BUDGET) -> tuple[float, list]:
    """Exact maximum plus up to ``max_count`` selections within ``window`` of it.

    Selections are ordered by decreasing norm, so the first one attains the
    maximum even when the list is truncated.
    """
    n = config.n
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    if k > MAX_SUBSET_SIZE or enumeration_cost(n, k) > budget:
        raise BudgetExceeded(f"exact enumeration for n={n}, k={k} exceeds the budget {budget}")
    best_sq, sels, _ = _enumerate(config, k, combinations(range(n), k), window, max_count, by_value=True)
    return math.sqrt(best_sq), sels


def coherence(config: Configuration) -> float:
    """max_{i<j} |<u_i, u_j>|."""
    if config.n < 2:
        raise ValueError("coherence needs at least two vectors")
    g = np.abs(config.gram())
    iu = np.triu_indices(config.n, 1)
    return float(min(1.0, g[iu].max()))


def _planar_critical_angles(u: np.ndarray) -> np.ndarray:
    """Direction angles in [0, pi) where the ordering of |<v, u_i>| can change."""
    phi = np.arctan2(u[:, 1], u[:, 0])
    i, j = np.triu_indices(len(phi), 1)
    mid = 0.5 * (phi[i] + phi[j])
    ang = np.concatenate([phi + 0.5 * np.pi, mid, mid + 0.5 * np.pi])
    ang = np.sort(np.mod(ang, np.pi))
    # merge coincident events
    keep = np.concatenate([[True], np.diff(ang) > 1e-12])
    return ang[keep]


def _topk_selections(u: np.ndarray, v: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """For each direction row of ``v``: indices of the k largest |<v, u_i>| and their signs."""
    ip = v @ u.T  # (m, n)
    a = np.abs(ip)
    n = u.shape[0]
    if k < n:
        # stable order: by decreasing |ip|, then increasing index
        order = np.lexsort((np.broadcast_to(np.arange(n), a.shape), -a), axis=1)[:, :k]
    else:
        order = np.broadcast_to(np.arange(n), a.shape)
    signs = np.where(np.take_along_axis(ip, order, axis=1) >= 0.0, 1.0, -1.0)
    return order, signs


def max_over_selections_planar(config: Configuration, k: int, tie_tol: float = TIE_TOL,
                               collect_ties: int = 0) -> SolveResult:
    """Exact planar maximum by sweeping the direction v over critical angles.

    Between consecutive critical angles the k largest |<v, u_i>| and their
    signs are fixed; each such selection, and the selections at the critical
    angles themselves, is evaluated by its exact norm. The best of these is
    the global maximum, since the optimal sum's own direction lies in the
    closure of some interval.
    """
    if config.dim != 2:
        raise GeometryError(f"planar sweep needs d = 2, got d = {config.dim}")
    n = config.n
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    best_sq, found, evaluated = _planar_sweep(config, k, tie_tol)
    ranked = sorted(found, key=lambda t: t[1].sort_key())
    ties = [sel for _, sel in ranked[:collect_ties]] if collect_ties else ()
    return SolveResult.from_selection(config, ranked[0][1], "planar-sweep", evaluated, ties=ties)


def _planar_sweep(config: Configuration, k: int, tie_tol: float):
    u = config.vectors
    crit = _planar_critical_angles(u)
    nxt = np.append(crit[1:], crit[0] + np.pi)
    thetas = np.concatenate([crit, 0.5 * (crit + nxt)])
    v = np.column_stack([np.cos(thetas), np.sin(thetas)])
    order, signs = _topk_selections(u, v, k)
    sums = np.einsum("mk,mkd->md", signs, u[order])
    sq = np.einsum("md,md->m", sums, sums)
    best_sq = float(sq.max())
    thr = best_sq - _sq_tol(best_sq, tie_tol)
    found = {}
    for m in np.flatnonzero(sq >= thr):
        perm = np.argsort(order[m])
        sel = SignedSelection(tuple(order[m][perm]), tuple(int(s) for s in signs[m][perm])).canonical()
        found[sel] = float(sq[m])
    return best_sq, [(val, sel) for sel, val in found.items()], len(thetas)


def near_maximizers_planar(config: Configuration, k: int, window: float,
                           max_count: int = 256) -> tuple[float, list]:
    """Planar counterpart of :func:`near_maximizers` (selections seen by the sweep only)."""
    if config.dim != 2:
        raise GeometryError(f"planar sweep needs d = 2, got d = {config.dim}")
    if not 1 <= k <= config.n:
        raise ValueError(f"k must satisfy 1 <= k <= n={config.n}, got {k}")
    best_sq, found, _ = _planar_sweep(config, k, window)
    found.sort(key=lambda t: (-t[0], t[1].sort_key()))
    return math.sqrt(best_sq), [sel for _, sel in found[:max_count]]

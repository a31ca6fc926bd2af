"""Closed-form bounds on c(d, n, k), the guaranteed maximal k-term signed sum.

Each evaluator returns a plain float; :func:`applicable_bounds` wraps them in
:class:`BoundReport` records carrying side and validity. Bounds proved only
for "sufficiently large" parameters are tagged ``asymptotic-only`` and must
never be compared against finite instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sphere import kappa_ratio

EXACT = "exact"
ASYMPTOTIC = "asymptotic-only"
CONJECTURAL = "conjectural"

# constants closing the upper-bound argument for moderate and large k
ALPHA_1 = 1.0 / (8 * 48**2)
ALPHA_2 = 1.0 / (64 * 36)
PAIR_LOWER_CONST = 0.51
PAIR_UPPER_CONST = 0.14

LAMBERT_TOL = 1e-12
LAMBERT_MAX_NEWTON = 100


class BoundError(ValueError):
    """Parameters outside a bound's hypotheses."""


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    side: str
    validity: str
    anchor: str
    condition: str | None = None
    sharp: bool | None = None
    applicable: bool = True


def trivial_upper(k: int) -> int:
    """Triangle inequality: a k-term sum of unit vectors has norm at most k."""
    return k


def sqrt_k_lower(k: int) -> float:
    if k < 1:
        raise BoundError(f"k must be >= 1, got {k}")
    return math.sqrt(k)


def _general_lower_terms(d: int, n: int, k: int) -> tuple[float, float]:
    e = (d + 1) / (d - 1)
    cap_term = k - 8.0 * k**e * n ** (-2.0 / (d - 1))
    average_term = math.sqrt(2.0 / math.pi) * k / math.sqrt(d)
    return cap_term, average_term


def general_lower(d: int, n: int, k: int) -> float:
    """max(k - 8 k^((d+1)/(d-1)) n^(-2/(d-1)),  sqrt(2/pi) k / sqrt(d)), for d >= 2, n >= d, k >= 3."""
    if d < 2 or n < d:
        raise BoundError(f"general_lower needs d >= 2 and n >= d, got d={d}, n={n}")
    if k < 3:
        raise BoundError(f"general_lower needs k >= 3, got {k}")
    if k > n:
        raise BoundError(f"k={k} exceeds n={n}")
    return max(_general_lower_terms(d, n, k))


def general_upper(d: int, n: int, k: int) -> BoundReport:
    """Two-branch upper bound k - alpha * k^((d+1)/(d-1)) n^(-2/(d-1)); large-n only."""
    if d < 2 or not 3 <= k <= n:
        raise BoundError(f"general_upper needs d >= 2 and 3 <= k <= n, got d={d}, n={n}, k={k}")
    e = (d + 1) / (d - 1)
    tail = k**e * float(n) ** (-2.0 / (d - 1))
    if k < 6 * 100 ** (d - 1):
        value = k - ALPHA_1 / d**2 * tail
    else:
        value = k - ALPHA_2 * tail
    return BoundReport("general_upper", value, "upper", ASYMPTOTIC,
                       "cap-packing upper bound (two k-ranges)")


def _phi_residual(phi: float, ratio: float) -> float:
    return phi * ratio - math.exp(-0.5 * phi * phi)


def lambert_phi(k: float, n: float) -> float:
    """Positive root phi of phi * (k/n) = exp(-phi^2 / 2), i.e. sqrt(W0(n^2/k^2)).

    Newton's method from sqrt(log(1 + n^2/k^2)); the residual is increasing
    in phi, so a bisection on a bracketing interval takes over if Newton has
    not converged within 100 steps.
    """
    if not 1 <= k <= n:
        raise BoundError(f"lambert_phi needs 1 <= k <= n, got k={k}, n={n}")
    ratio = k / n
    phi = math.sqrt(math.log1p((n / k) ** 2))
    for _ in range(LAMBERT_MAX_NEWTON):
        g = _phi_residual(phi, ratio)
        if abs(g) <= 0.25 * LAMBERT_TOL:
            return phi
        dg = ratio + phi * math.exp(-0.5 * phi * phi)
        step = g / dg
        nxt = phi - step
        if nxt <= 0.0:
            nxt = 0.5 * phi
        if abs(nxt - phi) <= 1e-17 * max(1.0, phi):
            phi = nxt
            break
        phi = nxt
    if abs(_phi_residual(phi, ratio)) <= LAMBERT_TOL:
        return phi
    return _phi_bisect(ratio)


def _phi_bisect(ratio: float) -> float:
    lo, hi = 0.0, 1.0
    while _phi_residual(hi, ratio) < 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _phi_residual(mid, ratio) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return 0.5 * (lo + hi)


def large_k_threshold(d: int, n: int) -> float:
    """k must exceed exp(-d/2) n / sqrt(d) for the large-k upper bound."""
    return math.exp(-0.5 * d) * n / math.sqrt(d)


def large_k_upper(d: int, n: int, k: int) -> BoundReport:
    """(4 phi / sqrt(pi)) k / sqrt(d) with phi = lambert_phi(k, n); large-n only."""
    if d < 2:
        raise BoundError(f"large_k_upper needs d >= 2, got {d}")
    phi = lambert_phi(k, n)
    value = 4.0 * phi / math.sqrt(math.pi) * k / math.sqrt(d)
    return BoundReport("large_k_upper", value, "upper", ASYMPTOTIC,
                       "uniform-distribution upper bound via Lambert W",
                       applicable=k > large_k_threshold(d, n))


def welch_pair_lower(d: int, n: int) -> float:
    """sqrt(2 + 2 w) with w = sqrt((n-d) / (d(n-1))), the Welch coherence bound."""
    if d < 1 or n < 2:
        raise BoundError(f"welch_pair_lower needs d >= 1, n >= 2, got d={d}, n={n}")
    if n < d:
        raise BoundError(f"welch_pair_lower needs n >= d, got n={n}, d={d}")
    w = math.sqrt((n - d) / (d * (n - 1)))
    return math.sqrt(2.0 + 2.0 * w)


def pair_large_n_bounds(d: int, n: int) -> tuple[BoundReport, BoundReport]:
    """2 - 0.51 n^(-2/(d-1)) and 2 - 0.14 n^(-2/(d-1)); for large d and n only."""
    if d < 2 or n < 1:
        raise BoundError(f"pair_large_n_bounds needs d >= 2, n >= 1, got d={d}, n={n}")
    t = float(n) ** (-2.0 / (d - 1))
    anchor = "volumetric two-vector bounds"
    return (BoundReport("pair_large_n_lower", 2.0 - PAIR_LOWER_CONST * t, "lower", ASYMPTOTIC, anchor),
            BoundReport("pair_large_n_upper", 2.0 - PAIR_UPPER_CONST * t, "upper", ASYMPTOTIC, anchor))


def arc_min_norm(k: int, phi: float) -> float:
    """Least |u_1 + ... + u_k| over planar unit vectors with angles in [0, phi]."""
    if k < 1:
        raise BoundError(f"k must be >= 1, got {k}")
    if not 0.0 <= phi <= math.pi:
        raise BoundError(f"arc length {phi} outside [0, pi]")
    c = math.cos(0.5 * phi)
    if k % 2 == 0:
        return max(0.0, k * c)
    return math.sqrt(1.0 + (k - 1) * (k + 1) * c * c)


def planar_lower(n: int, k: int) -> tuple[float, bool]:
    """Planar bound and whether it is attained, i.e. whether (k-1) divides n."""
    if not 2 <= k <= n:
        raise BoundError(f"planar_lower needs 2 <= k <= n, got n={n}, k={k}")
    return arc_min_norm(k, (k - 1) * math.pi / n), n % (k - 1) == 0


def zero_sum_lower(d: int) -> float:
    """sqrt(d+2): full signed sum bound for d+1 unit vectors summing to zero, d even."""
    if d < 1 or d % 2:
        raise BoundError(f"zero_sum_lower needs an even d >= 2, got {d}")
    return math.sqrt(d + 2.0)


def conjecture_value(d: int) -> BoundReport:
    """Conjectured value sqrt(d+2) of c(d, d+1, d+1); proven for d = 2."""
    if d < 1:
        raise BoundError(f"d must be >= 1, got {d}")
    return BoundReport("conjecture_value", math.sqrt(d + 2.0), "lower",
                       EXACT if d == 2 else CONJECTURAL,
                       "simplex-plus-orthonormal conjecture for k = n = d+1")


def separated_cardinality_bounds(d: int, delta: float) -> tuple[float, float]:
    """Bounds on the size of a maximal delta-separated set on S^{d-1}, 0 < delta < pi/2."""
    if d < 2:
        raise BoundError(f"d must be >= 2, got {d}")
    if not 0.0 < delta < 0.5 * math.pi:
        raise BoundError(f"delta must lie in (0, pi/2), got {delta}")
    lower = math.sqrt(2.0 * math.pi) * math.sin(delta) ** (-(d - 1))
    upper = 23.0 * (d - 1) ** 1.5 * math.sin(0.5 * delta) ** (-(d - 1)) * 2.0 ** (-(d - 1) / 2)
    return lower, upper


def averaging_bound(d: int, k: int) -> float:
    """2 k kappa_{d-1}/(d kappa_d): spherical average of sum |<v, u_i>|."""
    return 2.0 * k * kappa_ratio(d)


def applicable_bounds(d: int, n: int, k: int) -> list[BoundReport]:
    """Every bound whose hypotheses (d, n, k) satisfy, in a fixed order."""
    if d < 1 or n < 1 or not 1 <= k <= n:
        raise BoundError(f"need d, n >= 1 and 1 <= k <= n, got d={d}, n={n}, k={k}")
    out = [
        BoundReport("trivial_upper", float(trivial_upper(k)), "upper", EXACT, "triangle inequality"),
        BoundReport("sqrt_k_lower", sqrt_k_lower(k), "lower", EXACT, "Bang's lemma on any k vectors",
                    sharp=n <= d),
    ]
    if d >= 2:
        out.append(BoundReport("averaging_lower", averaging_bound(d, k), "lower", EXACT,
                               "spherical average of sum |<v,u_i>|"))
    if d >= 2 and n >= d and k >= 3:
        out.append(BoundReport("general_lower", general_lower(d, n, k), "lower", EXACT,
                               "cap selection / spherical averaging"))
        out.append(general_upper(d, n, k))
    if d >= 2:
        out.append(large_k_upper(d, n, k))
    if k == 2 and n >= max(d, 2):
        out.append(BoundReport("welch_pair_lower", welch_pair_lower(d, n), "lower", EXACT,
                               "Welch coherence bound", sharp=(n == d + 1 or n == d) or None))
        if d >= 2:
            out.extend(pair_large_n_bounds(d, n))
    if d == 2 and k >= 2:
        val, sharp = planar_lower(n, k)
        out.append(BoundReport("planar_lower", val, "lower", EXACT, "planar arc bound", sharp=sharp))
    if k == n == d + 1:
        out.append(conjecture_value(d))
        if d % 2 == 0:
            out.append(BoundReport("zero_sum_lower", zero_sum_lower(d), "lower", EXACT,
                                   "zero-sum system in even dimension",
                                   condition="vectors sum to zero"))
    return out


def best_exact_lower(d: int, n: int, k: int) -> BoundReport:
    """Largest unconditional exact lower bound for (d, n, k)."""
    rows = [b for b in applicable_bounds(d, n, k)
            if b.side == "lower" and b.validity == EXACT and b.condition is None and b.applicable]
    return max(rows, key=lambda b: b.value)

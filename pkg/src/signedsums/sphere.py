"""Geometric primitives on the unit sphere S^{d-1}.

A configuration is an ordered list of ``n`` unit vectors in R^d stored as an
``(n, d)`` float array. Caps are measured with the normalized surface measure
(total mass 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

UNIT_TOL = 1e-12
ZERO_NORM = 1e-9


class GeometryError(ValueError):
    """Invalid geometric input (zero vector, dimension mismatch, bad range)."""


def unit_vector(coords) -> np.ndarray:
    """Return ``coords`` rescaled to unit length.

    Raises GeometryError for empty input or vectors with norm below 1e-9.
    """
    v = np.asarray(coords, dtype=float).reshape(-1)
    if v.size < 1:
        raise GeometryError("a unit vector needs at least one coordinate")
    nrm = np.linalg.norm(v)
    if not np.isfinite(nrm) or nrm < ZERO_NORM:
        raise GeometryError(f"cannot normalize vector of norm {nrm:.3g}")
    return v / nrm


@dataclass(frozen=True, eq=False)
class Configuration:
    """Ordered system of ``n`` unit vectors in R^d.

    Rows are renormalized on construction; the array is made read-only so a
    configuration can be shared freely.
    """

    vectors: np.ndarray

    def __post_init__(self):
        u = np.array(self.vectors, dtype=float, copy=True)
        if u.ndim == 1:
            u = u.reshape(1, -1)
        if u.ndim != 2 or u.shape[0] < 1 or u.shape[1] < 1:
            raise GeometryError(f"expected an (n, d) array with n, d >= 1, got shape {u.shape}")
        norms = np.linalg.norm(u, axis=1)
        if not np.all(np.isfinite(norms)) or np.any(norms < ZERO_NORM):
            bad = int(np.argmin(np.where(np.isfinite(norms), norms, -1.0)))
            raise GeometryError(f"vector {bad} has norm {norms[bad]:.3g}; cannot normalize")
        u /= norms[:, None]
        u.setflags(write=False)
        object.__setattr__(self, "vectors", u)

    @classmethod
    def from_unit_rows(cls, rows, tol: float = UNIT_TOL) -> "Configuration":
        """Wrap rows whose norms are already within ``tol`` of 1, keeping them bit-exact."""
        cfg = cls(rows)
        raw = np.array(rows, dtype=float, copy=True).reshape(cfg.vectors.shape)
        if np.max(np.abs(np.linalg.norm(raw, axis=1) - 1.0)) > tol:
            raise GeometryError(f"rows are not unit vectors within {tol}")
        raw.setflags(write=False)
        object.__setattr__(cfg, "vectors", raw)
        return cfg

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.vectors[i]

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.vectors.shape == other.vectors.shape and bool(np.array_equal(self.vectors, other.vectors))

    __hash__ = None

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def antipodal(self) -> np.ndarray:
        """The 2n points u_1, -u_1, u_2, -u_2, ... as a ``(2n, d)`` array."""
        out = np.empty((2 * self.n, self.dim))
        out[0::2] = self.vectors
        out[1::2] = -self.vectors
        return out

    def rotated(self, q: np.ndarray) -> "Configuration":
        """Apply the orthogonal map ``q`` (acting on column vectors) to every vector."""
        return Configuration(self.vectors @ np.asarray(q, dtype=float).T)


@dataclass(frozen=True)
class Cap:
    """Closed spherical cap: points within geodesic distance ``radius`` of ``center``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", unit_vector(self.center))
        if not 0.0 <= self.radius <= math.pi:
            raise GeometryError(f"cap radius {self.radius} outside [0, pi]")

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points, dtype=float))
        return p @ self.center >= math.cos(self.radius) - tol

    def measure(self) -> float:
        return cap_measure(self.center.size, self.radius)


def ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1)."""
    if d < 1:
        raise GeometryError(f"ball_volume needs d >= 1, got {d}")
    return math.exp(0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0))


def kappa_ratio(d: int) -> float:
    """kappa_{d-1} / (d kappa_d) = Gamma(d/2+1) / (d sqrt(pi) Gamma((d+1)/2))."""
    if d < 2:
        raise GeometryError(f"kappa_ratio needs d >= 2, got {d}")
    return math.exp(math.lgamma(0.5 * d + 1.0) - math.lgamma(0.5 * (d + 1))) / (d * math.sqrt(math.pi))


def _sin_power_integral(d: int, r: float) -> float:
    if d == 2:
        return r
    val, _ = integrate.quad(lambda t: math.sin(t) ** (d - 2), 0.0, r, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def cap_measure(d: int, r: float) -> float:
    """Normalized surface measure of a cap of geodesic radius ``r`` on S^{d-1}.

    Integrates sin^{d-2} numerically; caps wider than a hemisphere are
    measured through their complement.
    """
    if d < 2:
        raise GeometryError(f"cap_measure needs d >= 2, got {d}")
    if not 0.0 <= r <= math.pi:
        raise GeometryError(f"cap radius {r} outside [0, pi]")
    scale = (d - 1) * kappa_ratio(d)
    if r > 0.5 * math.pi:
        return 1.0 - scale * _sin_power_integral(d, math.pi - r)
    return scale * _sin_power_integral(d, r)


def cap_radius_for_measure(d: int, target: float, tol: float = 1e-12) -> float:
    """Radius ``r`` in [0, pi/2] with cap_measure(d, r) equal to ``target`` (bisection)."""
    if d < 2:
        raise GeometryError(f"cap_radius_for_measure needs d >= 2, got {d}")
    if not 0.0 < target <= 0.5:
        raise GeometryError(f"target measure {target} outside (0, 1/2]")
    if target == 0.5:
        return 0.5 * math.pi
    lo, hi = 0.0, 0.5 * math.pi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        m = cap_measure(d, mid)
        if abs(m - target) <= tol:
            return mid
        if m < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


def geodesic_distance(u, v) -> float:
    """Angle between unit vectors, with the inner product clamped to [-1, 1]."""
    a = np.asarray(u, dtype=float).reshape(-1)
    b = np.asarray(v, dtype=float).reshape(-1)
    if a.size != b.size:
        raise GeometryError(f"dimension mismatch: {a.size} vs {b.size}")
    c = float(np.clip(a @ b, -1.0, 1.0))
    # arccos is ill-conditioned near +-1; use the chord there
    if abs(c) > 0.9:
        chord = np.linalg.norm(a - b) if c > 0 else np.linalg.norm(a + b)
        ang = 2.0 * math.asin(min(1.0, 0.5 * chord))
        return ang if c > 0 else math.pi - ang
    return math.acos(c)


def random_rotation(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random orthogonal ``d x d`` matrix (QR of a Gaussian matrix)."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))

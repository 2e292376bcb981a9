"""Constant-curvature model surfaces: sphere, flat torus, hyperbolic plane.

All three are two-dimensional with closed-form geodesics, so distances,
exponential/logarithm maps, frame transport, and uniform sampling of
geodesic balls are exact.  Points are numpy arrays in the surface's
native coordinates:

* sphere of radius ``R``: embedding triples with ``|p| = R``;
* flat torus of period ``L``: pairs in ``[0, L)`` with wraparound;
* hyperbolic plane of radius ``R``: upper hyperboloid triples with
  ``x^2 + y^2 - z^2 = -R^2`` in the Minkowski form.

The (normalized) sectional, Ricci, and scalar curvatures all equal
``+1/R^2``, ``0``, ``-1/R^2`` respectively; in dimension two these
conventions coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EpsilonInvalidError, GeometryError

SPHERE = "sphere"
FLAT_TORUS = "flat_torus"
HYPERBOLIC = "hyperbolic"

_ON_SURFACE_TOL = 1e-9


def _mdot(u, v):
    """Minkowski inner product with signature (+, +, -)."""
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


@dataclass(frozen=True)
class ModelSurface:
    """One of the three complete constant-curvature surfaces."""

    kind: str
    radius: float = 1.0  # sphere / hyperbolic radius R
    period: float = 1.0  # torus side L

    def __post_init__(self):
        if self.kind not in (SPHERE, FLAT_TORUS, HYPERBOLIC):
            raise ValueError(f"unknown surface kind {self.kind!r}")
        if self.kind in (SPHERE, HYPERBOLIC) and self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.kind == FLAT_TORUS and self.period <= 0:
            raise ValueError("period must be positive")

    @classmethod
    def sphere(cls, radius: float = 1.0) -> "ModelSurface":
        return cls(kind=SPHERE, radius=radius)

    @classmethod
    def flat_torus(cls, period: float = 1.0) -> "ModelSurface":
        return cls(kind=FLAT_TORUS, period=period)

    @classmethod
    def hyperbolic(cls, radius: float = 1.0) -> "ModelSurface":
        return cls(kind=HYPERBOLIC, radius=radius)

    @property
    def dim(self) -> int:
        return 2

    @property
    def curvature(self) -> float:
        """Sectional curvature; equals the normalized Ricci and scalar values."""
        if self.kind == SPHERE:
            return 1.0 / self.radius**2
        if self.kind == HYPERBOLIC:
            return -1.0 / self.radius**2
        return 0.0

    @property
    def ricci(self) -> float:
        return self.curvature

    @property
    def scalar(self) -> float:
        return self.curvature

    @property
    def scalar_trace(self) -> float:
        """Trace of the Ricci form over an orthonormal frame: d * K."""
        return self.dim * self.curvature

    @property
    def ricci_sq_sum(self) -> float:
        """Sum of squared frame Ricci values: d * K^2."""
        return self.dim * self.curvature**2

    @property
    def injectivity_radius(self) -> float:
        if self.kind == SPHERE:
            return math.pi * self.radius
        if self.kind == FLAT_TORUS:
            return self.period / 2.0
        return math.inf

    @property
    def curvature_upper_bound(self) -> float:
        """Tight upper bound on the sectional curvature."""
        return self.curvature

    @property
    def max_ball_radius(self) -> float:
        """Largest ball radius accepted by :func:`validate_eps`.

        Positive curvature uses the median-uniqueness bound
        ``2 eps < min(pi / (4 sqrt(D)), Inj / 2)``.  For flat and
        negative curvature that bound degenerates (any positive D upper
        bounds the curvature), so the requirement is an embedded
        geodesic ball: ``eps < Inj``.
        """
        if self.kind == SPHERE:
            d = self.curvature_upper_bound
            return 0.5 * min(math.pi / (4.0 * math.sqrt(d)), self.injectivity_radius / 2.0)
        return self.injectivity_radius

    def validate_eps(self, eps: float) -> None:
        if not eps > 0:
            raise EpsilonInvalidError("ball radius must be positive")
        if not eps < self.max_ball_radius:
            raise EpsilonInvalidError(
                f"ball radius {eps} is not below the {self.kind} limit "
                f"{self.max_ball_radius:.6g}"
            )

    @property
    def embedding_dim(self) -> int:
        return 2 if self.kind == FLAT_TORUS else 3

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "radius": self.radius if self.kind != FLAT_TORUS else None,
            "period": self.period if self.kind == FLAT_TORUS else None,
            "curvature": self.curvature,
            "injectivity_radius": self.injectivity_radius,
        }


def check_point(m: ModelSurface, p: np.ndarray) -> None:
    """Raise ``GeometryError`` unless ``p`` lies on the surface."""
    p = np.asarray(p, dtype=float)
    if p.shape != (m.embedding_dim,):
        raise GeometryError(f"point shape {p.shape} invalid for {m.kind}")
    if m.kind == SPHERE:
        if abs(np.linalg.norm(p) - m.radius) > _ON_SURFACE_TOL * max(1.0, m.radius):
            raise GeometryError("point is off the sphere")
    elif m.kind == FLAT_TORUS:
        if (p < -_ON_SURFACE_TOL).any() or (p >= m.period + _ON_SURFACE_TOL).any():
            raise GeometryError("torus coordinates outside the fundamental domain")
    else:
        r2 = m.radius**2
        if abs(_mdot(p, p) + r2) > _ON_SURFACE_TOL * max(1.0, r2) or p[2] <= 0:
            raise GeometryError("point is off the hyperboloid sheet")


def base_point(m: ModelSurface) -> np.ndarray:
    """Canonical anchor point used by the sampling harnesses."""
    if m.kind == SPHERE:
        return np.array([m.radius, 0.0, 0.0])
    if m.kind == FLAT_TORUS:
        return np.array([m.period / 2.0, m.period / 2.0])
    return np.array([0.0, 0.0, m.radius])


def _wrap(m: ModelSurface, x):
    return np.mod(x, m.period)


def _torus_diff(m: ModelSurface, x, y):
    """Shortest displacement from ``x`` to ``y`` on the torus."""
    L = m.period
    return (np.asarray(y) - np.asarray(x) + L / 2.0) % L - L / 2.0


def geodesic_distance(m: ModelSurface, x, y, *, validate: bool = True) -> float:
    """Exact geodesic distance between two points."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if validate:
        check_point(m, x)
        check_point(m, y)
    return float(pairwise_distances(m, x[None, :], y[None, :])[0, 0])


def pairwise_distances(m: ModelSurface, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Distance matrix between two batches of points (no validation)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if m.kind == SPHERE:
        # chord form: well-conditioned at short range, exact at the antipode
        R = m.radius
        diff = X[:, None, :] - Y[None, :, :]
        chord = np.sqrt((diff**2).sum(axis=-1))
        return 2.0 * R * np.arcsin(np.clip(chord / (2.0 * R), 0.0, 1.0))
    if m.kind == FLAT_TORUS:
        L = m.period
        diff = np.abs(X[:, None, :] - Y[None, :, :])
        diff = np.minimum(diff, L - diff)
        return np.sqrt((diff**2).sum(axis=-1))
    # Minkowski chord of hyperboloid points is spacelike: |dx|_M = 2R sinh(d/2R)
    R = m.radius
    diff = X[:, None, :] - Y[None, :, :]
    chord2 = diff[..., 0] ** 2 + diff[..., 1] ** 2 - diff[..., 2] ** 2
    chord = np.sqrt(np.clip(chord2, 0.0, None))
    return 2.0 * R * np.arcsinh(chord / (2.0 * R))


def frame(m: ModelSurface, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal tangent basis at ``p``."""
    p = np.asarray(p, dtype=float)
    if m.kind == FLAT_TORUS:
        return np.array([1.0, 0.0]), np.array([0.0, 1.0])
    if m.kind == SPHERE:
        ph = p / np.linalg.norm(p)
        axis = np.array([0.0, 0.0, 1.0])
        if abs(ph @ axis) > 0.9:
            axis = np.array([1.0, 0.0, 0.0])
        e1 = np.cross(axis, ph)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(ph, e1)
        return e1, e2
    ph = p / m.radius
    basis = []
    for cand in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
                 np.array([0.0, 0.0, 1.0])):
        v = cand + _mdot(cand, ph) * ph  # Minkowski projection to the tangent plane
        for b in basis:
            v = v - _mdot(v, b) * b
        norm2 = _mdot(v, v)
        if norm2 > 1e-12:
            basis.append(v / math.sqrt(norm2))
        if len(basis) == 2:
            return basis[0], basis[1]
    raise GeometryError("could not build a tangent frame")


def exp_map(m: ModelSurface, p: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Point reached from ``p`` along tangent ``v`` (batched over rows of v)."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    V = np.atleast_2d(v)
    if m.kind == FLAT_TORUS:
        out = _wrap(m, p[None, :] + V)
        return out[0] if single else out
    R = m.radius
    if m.kind == SPHERE:
        norms = np.linalg.norm(V, axis=1)
        theta = norms / R
        unit = np.divide(V, norms[:, None], out=np.zeros_like(V), where=norms[:, None] > 0)
        out = np.cos(theta)[:, None] * p[None, :] + np.sin(theta)[:, None] * R * unit
        return out[0] if single else out
    norms2 = _mdot(V, V)
    norms = np.sqrt(np.clip(norms2, 0.0, None))
    theta = norms / R
    unit = np.divide(V, norms[:, None], out=np.zeros_like(V), where=norms[:, None] > 0)
    out = np.cosh(theta)[:, None] * p[None, :] + np.sinh(theta)[:, None] * R * unit
    return out[0] if single else out


def log_map(m: ModelSurface, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Tangent vector at ``p`` whose exponential is ``q`` (batched over rows of q)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    Q = np.atleast_2d(q)
    if m.kind == FLAT_TORUS:
        out = _torus_diff(m, p[None, :], Q)
        return out[0] if single else out
    R = m.radius
    if m.kind == SPHERE:
        cos_t = np.clip((Q @ p) / R**2, -1.0, 1.0)
        theta = np.arccos(cos_t)
        w = Q / R - cos_t[:, None] * (p / R)[None, :]
        wn = np.linalg.norm(w, axis=1)
        if (theta > math.pi - 1e-9).any():
            raise GeometryError("logarithm undefined near the antipode")
        unit = np.divide(w, wn[:, None], out=np.zeros_like(w), where=wn[:, None] > 1e-300)
        out = (R * theta)[:, None] * unit
        return out[0] if single else out
    lam = -(Q @ (np.array([1.0, 1.0, -1.0]) * p)) / R**2
    lam = np.clip(lam, 1.0, None)
    theta = np.arccosh(lam)
    w = Q / R - lam[:, None] * (p / R)[None, :]
    wn = np.sqrt(np.clip(_mdot(w, w), 0.0, None))
    unit = np.divide(w, wn[:, None], out=np.zeros_like(w), where=wn[:, None] > 1e-300)
    out = (R * theta)[:, None] * unit
    return out[0] if single else out


def translate_along(m: ModelSurface, a: np.ndarray, b: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Apply the isometry translating the geodesic through ``a`` toward ``b``.

    Maps ``a`` to ``b`` exactly and parallel-transports tangent frames,
    so a point cloud around ``a`` becomes the congruent cloud around
    ``b``.  Identity when the two anchors coincide.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    P = np.atleast_2d(np.asarray(points, dtype=float))
    single = np.asarray(points).ndim == 1
    if m.kind == FLAT_TORUS:
        out = _wrap(m, P + _torus_diff(m, a, b)[None, :])
        return out[0] if single else out
    dist = geodesic_distance(m, a, b, validate=False)
    if dist < 1e-15:
        out = P.copy()
        return out[0] if single else out
    R = m.radius
    if m.kind == SPHERE:
        axis = np.cross(a, b)
        norm = np.linalg.norm(axis)
        if norm < 1e-14:
            raise GeometryError("translation undefined for antipodal anchors")
        axis /= norm
        ang = dist / R
        K = np.array([
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ])
        rot = np.eye(3) + math.sin(ang) * K + (1.0 - math.cos(ang)) * (K @ K)
        out = P @ rot.T
        return out[0] if single else out
    ah = a / R
    u = log_map(m, a, b)
    u = u / math.sqrt(max(_mdot(u, u), 1e-300))
    xi = dist / R
    ah_image = math.cosh(xi) * ah + math.sinh(xi) * u
    u_image = math.sinh(xi) * ah + math.cosh(xi) * u
    n = _mperp(ah, u)
    G = np.diag([1.0, 1.0, -1.0])
    M = (
        -np.outer(ah_image, G @ ah)
        + np.outer(u_image, G @ u)
        + np.outer(n, G @ n)
    )
    out = P @ M.T
    return out[0] if single else out


def _mperp(ah: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Minkowski-unit vector orthogonal to both ``ah`` (timelike) and ``u``."""
    for cand in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
                 np.array([0.0, 0.0, 1.0])):
        v = cand + _mdot(cand, ah) * ah - _mdot(cand, u) * u
        norm2 = _mdot(v, v)
        if norm2 > 1e-12:
            return v / math.sqrt(norm2)
    raise GeometryError("degenerate tangent plane")


def ball_radii_from_uniform(m: ModelSurface, eps: float, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF radial coordinates of uniform geodesic-ball samples.

    The radial density is proportional to ``sin(r/R)``, ``r``, and
    ``sinh(r/R)`` on the sphere, torus, and hyperbolic plane.
    """
    u = np.asarray(u, dtype=float)
    if m.kind == FLAT_TORUS:
        return eps * np.sqrt(u)
    R = m.radius
    if m.kind == SPHERE:
        return R * np.arccos(1.0 - u * (1.0 - math.cos(eps / R)))
    return R * np.arccosh(1.0 + u * (math.cosh(eps / R) - 1.0))


def sample_ball(
    m: ModelSurface,
    center: np.ndarray,
    eps: float,
    k: int,
    rng: np.random.Generator,
    *,
    antithetic: bool = False,
) -> np.ndarray:
    """Uniform area-measure samples of the geodesic ball ``B(center, eps)``.

    Exact inverse-CDF sampling in geodesic polar coordinates; with
    ``antithetic`` the radial uniforms come in reflected pairs ``(u, 1-u)``
    (``k`` must then be even).  Deterministic given the generator state.
    """
    m.validate_eps(eps)
    check_point(m, np.asarray(center, dtype=float))
    if k < 1:
        raise ValueError("need at least one sample")
    if antithetic:
        if k % 2:
            raise ValueError("antithetic sampling needs an even sample count")
        half = rng.random(k // 2)
        u = np.empty(k)
        u[0::2] = half
        u[1::2] = 1.0 - half
    else:
        u = rng.random(k)
    theta = rng.random(k) * 2.0 * math.pi
    r = ball_radii_from_uniform(m, eps, u)
    e1, e2 = frame(m, np.asarray(center, dtype=float))
    v = r[:, None] * (np.cos(theta)[:, None] * e1[None, :] + np.sin(theta)[:, None] * e2[None, :])
    return exp_map(m, np.asarray(center, dtype=float), v)


def ball_mean_distance(m: ModelSurface, eps: float) -> float:
    """Closed-form mean distance to the center of a uniform geodesic ball."""
    m.validate_eps(eps)
    if m.kind == FLAT_TORUS:
        return 2.0 * eps / 3.0
    R = m.radius
    t = eps / R
    if m.kind == SPHERE:
        return R * (math.sin(t) - t * math.cos(t)) / (1.0 - math.cos(t))
    return R * (t * math.cosh(t) - math.sinh(t)) / (math.cosh(t) - 1.0)


def ball_mean_distance_expansion(
    m: ModelSurface, eps: float, scalar_reading: str = "trace"
) -> float:
    """Small-radius expansion of the ball's mean distance to its center.

    ``eps * (d/(d+1) - eps^2 * S / (3 (d+1) (d+2) (d+3)))`` with ``S``
    the scalar term.  ``scalar_reading`` selects the Ricci trace
    (``d * K``, the reading the closed forms confirm) or the frame
    average (``K``); both are exposed for comparison.
    """
    if scalar_reading == "trace":
        s = m.scalar_trace
    elif scalar_reading == "average":
        s = m.scalar
    else:
        raise ValueError("scalar_reading must be 'trace' or 'average'")
    d = m.dim
    return eps * (d / (d + 1) - eps**2 * s / (3.0 * (d + 1) * (d + 2) * (d + 3)))

"""2pi-periodic analytic curves: planar gradient curves and their sphere lifts.

Curves are stored spectrally (truncated trigonometric series per component),
so derivatives of any order are exact for the stored truncation.  The sphere
lift sends a planar curve w = (alpha, beta) to

    sigma(u) = (-alpha e1 - beta e2 + e3) / sqrt(1 + alpha^2 + beta^2)

for a positively oriented orthonormal frame {e1, e2, e3}; central projection
from the frame pole inverts it exactly.  Regularity and strict convexity are
decided on dense samples with relative thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvexityError, FrameError, IrregularCurveError
from .fourier import FourierSeries, grid

REGULARITY_RTOL = 1e-6        # min|g'| >= rtol * max|g'|
CONVEXITY_RTOL = 1e-8         # min|kappa| >= rtol * max|kappa|
DENSE_SAMPLES = 4096

STRICTLY_CONVEX_POSITIVE = "strictly_convex_positive"
STRICTLY_CONVEX_NEGATIVE = "strictly_convex_negative"
NOT_STRICTLY_CONVEX = "not_strictly_convex"


@dataclass(frozen=True)
class PeriodicCurve:
    """Closed analytic plane curve u -> (alpha(u), beta(u))."""
    alpha: FourierSeries
    beta: FourierSeries

    @property
    def order(self) -> int:
        return max(self.alpha.order, self.beta.order)

    @classmethod
    def from_coefficients(cls, alpha_cos, alpha_sin, beta_cos, beta_sin):
        return cls(FourierSeries(alpha_cos, alpha_sin),
                   FourierSeries(beta_cos, beta_sin))

    @classmethod
    def circle(cls, radius: float = 1.0, clockwise: bool = False):
        sign = -1.0 if clockwise else 1.0
        return cls.from_coefficients([0.0, radius], [0.0],
                                     [0.0], [0.0, sign * radius])

    @classmethod
    def fit(cls, values: np.ndarray, order: int) -> "PeriodicCurve":
        """Fit from uniform samples of shape (2, n)."""
        return cls(FourierSeries.fit(values[0], order),
                   FourierSeries.fit(values[1], order))

    def evaluate(self, u, deriv: int = 0) -> np.ndarray:
        return np.stack((self.alpha(u, deriv), self.beta(u, deriv)))

    def reversed(self) -> "PeriodicCurve":
        return PeriodicCurve(self.alpha.reversed_parameter(),
                             self.beta.reversed_parameter())

    def shifted(self, delta: float) -> "PeriodicCurve":
        return PeriodicCurve(self.alpha.shifted(delta), self.beta.shifted(delta))

    def speed_range(self, n: int = DENSE_SAMPLES):
        u = grid(n)
        sp = np.hypot(self.alpha(u, 1), self.beta(u, 1))
        return float(sp.min()), float(sp.max())

    def require_regular(self, n: int = DENSE_SAMPLES):
        lo, hi = self.speed_range(n)
        if lo < REGULARITY_RTOL * hi or hi == 0.0:
            raise IrregularCurveError(
                f"curve speed ratio min/max = {lo:.3e}/{hi:.3e} below threshold")

    def coefficients(self):
        ac, as_ = self.alpha.coefficients()
        bc, bs = self.beta.coefficients()
        return ac, as_, bc, bs


def plane_curvature(curve: PeriodicCurve, u) -> np.ndarray:
    """Signed curvature kappa = (a' b'' - b' a'') / |g'|^3 at parameter u."""
    u = np.asarray(u, dtype=float)
    da, db = curve.alpha(u, 1), curve.beta(u, 1)
    dda, ddb = curve.alpha(u, 2), curve.beta(u, 2)
    speed = np.hypot(da, db)
    _, hi = curve.speed_range()
    if np.any(speed < REGULARITY_RTOL * hi):
        raise IrregularCurveError("curvature requested at an irregular point")
    return (da * ddb - db * dda) / speed ** 3


def total_turning(curve: PeriodicCurve, n: int = DENSE_SAMPLES) -> float:
    """Winding of the tangent direction, in full turns (periodic trapezoid)."""
    u = grid(n)
    da, db = curve.alpha(u, 1), curve.beta(u, 1)
    dda, ddb = curve.alpha(u, 2), curve.beta(u, 2)
    dphi = (da * ddb - db * dda) / (da * da + db * db)
    return float(dphi.mean())


def self_intersects(curve: PeriodicCurve, n: int = 1024, rtol: float = 1e-9) -> bool:
    """Pairwise sample scan for near self-contact; redundancy check only."""
    u = grid(n)
    pts = curve.evaluate(u).T
    d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    # ignore the near-diagonal band where neighboring samples are close
    band = 3
    idx = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    idx = np.minimum(idx, n - idx)
    mask = idx > band
    scale = max(d2.max(), 1e-300)
    return bool((d2[mask] < rtol * scale).any())


def convexity_check(curve: PeriodicCurve, n: int = DENSE_SAMPLES) -> str:
    """Strict convexity verdict from dense curvature sampling plus turning.

    Strictly convex means kappa keeps one sign with min|kappa| above the
    relative threshold and the tangent turns exactly once (+-1 full turn).
    """
    curve.require_regular(n)
    u = grid(n)
    kappa = plane_curvature(curve, u)
    turning = total_turning(curve, n)
    kmin, kmax = np.abs(kappa).min(), np.abs(kappa).max()
    one_turn = abs(abs(turning) - 1.0) < 1e-2
    if kmin >= CONVEXITY_RTOL * kmax and one_turn:
        if kappa.min() > 0.0:
            return STRICTLY_CONVEX_POSITIVE
        if kappa.max() < 0.0:
            return STRICTLY_CONVEX_NEGATIVE
    return NOT_STRICTLY_CONVEX


def orient_for_construction(curve: PeriodicCurve) -> PeriodicCurve:
    """Return the curve traversed with negative curvature everywhere."""
    verdict = convexity_check(curve)
    if verdict == STRICTLY_CONVEX_NEGATIVE:
        return curve
    if verdict == STRICTLY_CONVEX_POSITIVE:
        return curve.reversed()
    raise ConvexityError("curve is not strictly convex; cannot orient")


# -- sphere lift ------------------------------------------------------------

IDENTITY_FRAME = np.eye(3)


@dataclass(frozen=True)
class SphericalCurve:
    """Unit-sphere curve obtained by lifting a plane curve through a frame.

    ``frame`` rows are the orthonormal vectors (e1, e2, e3); the curve is
    sigma(u) = (-alpha e1 - beta e2 + e3)/sqrt(1 + alpha^2 + beta^2).
    """
    plane: PeriodicCurve
    frame: np.ndarray

    def evaluate(self, u, deriv: int = 0) -> np.ndarray:
        """sigma and its exact parameter derivatives, shape (3, len(u))."""
        u = np.asarray(u, dtype=float)
        a, b = self.plane.alpha(u), self.plane.beta(u)
        da, db = self.plane.alpha(u, 1), self.plane.beta(u, 1)
        n_vec = np.stack((-a, -b, np.ones_like(a)))
        dn = np.stack((-da, -db, np.zeros_like(a)))
        norm = np.sqrt(1.0 + a * a + b * b)
        if deriv == 0:
            out = n_vec / norm
        elif deriv == 1:
            ndot = (n_vec * dn).sum(0)
            out = dn / norm - n_vec * (ndot / norm ** 3)
        elif deriv == 2:
            dda, ddb = self.plane.alpha(u, 2), self.plane.beta(u, 2)
            ddn = np.stack((-dda, -ddb, np.zeros_like(a)))
            ndot = (n_vec * dn).sum(0)
            n2dot = (dn * dn).sum(0) + (n_vec * ddn).sum(0)
            out = (ddn / norm
                   - (2.0 * dn * ndot + n_vec * n2dot) / norm ** 3
                   + 3.0 * n_vec * ndot ** 2 / norm ** 5)
        else:
            raise ValueError("deriv must be 0, 1 or 2")
        return self.frame.T @ out


def _require_frame(frame: np.ndarray):
    frame = np.asarray(frame, dtype=float)
    gram_dev = np.abs(frame @ frame.T - np.eye(3)).max()
    if gram_dev > 1e-10:
        raise FrameError(f"frame Gram deviation {gram_dev:.3e} exceeds 1e-10")
    if np.linalg.det(frame) < 0.0:
        raise FrameError("frame must be positively oriented")
    return frame


def spherical_lift(curve: PeriodicCurve, frame=IDENTITY_FRAME) -> SphericalCurve:
    """Lift a plane curve to the unit sphere through an orthonormal frame."""
    return SphericalCurve(plane=curve, frame=_require_frame(frame))


def project_back(spherical: SphericalCurve, order: int | None = None,
                 n: int | None = None) -> PeriodicCurve:
    """Invert the sphere lift by central projection and spectral refit."""
    if order is None:
        order = spherical.plane.order
    if n is None:
        n = max(4 * order, 16)
    u = grid(n)
    sigma = spherical.evaluate(u)            # standard coordinates
    comps = spherical.frame @ sigma          # components along e1, e2, e3
    w = np.stack((-comps[0] / comps[2], -comps[1] / comps[2]))
    return PeriodicCurve.fit(w, order)


def spherical_geodesic_curvature(spherical: SphericalCurve, u) -> np.ndarray:
    """Geodesic curvature <sigma'', sigma x sigma'> / |sigma'|^3 on the sphere."""
    s0 = spherical.evaluate(u, 0)
    s1 = spherical.evaluate(u, 1)
    s2 = spherical.evaluate(u, 2)
    cross = np.cross(s0.T, s1.T).T
    speed = np.sqrt((s1 * s1).sum(0))
    return (s2 * cross).sum(0) / speed ** 3

"""Warped-product charts of the three space forms and the graph-curvature algebra.

Each chart presents the ambient space as (x, y, z) with metric

    f(z) * lam(x, y) * (dx^2 + dy^2) + dz^2,

normalized so f(0) = lam(0, 0) = 1.  A graph z = z(x, y) of prescribed
extrinsic curvature KK(x, y, z) > 0 then satisfies the Monge-Ampere type
equation

    A r + 2 B s + C t + r t - s^2 = E,      (p, q, r, s, t) = jet of z,

whose coefficients A, B, C, E -- and the ellipticity quantity
D = AC - B^2 + E = KK * (f*lam + p^2 + q^2)^2 -- are produced here in closed
form together with all first partials in (x, y, z, p, q).

All formulas are written against :mod:`mawarp.scalars`, so states may be
floats, numpy arrays, or truncated power series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import scalars as sc
from .errors import ChartError, CurvaturePositivityError, DomainError

CHARTS = ("cartesian", "cylindrical_h3", "stereographic_s3", "halfspace_h3")

DOMAIN_MARGIN = 1e-6


@dataclass(frozen=True)
class State:
    """Chart point plus gradient: p = z_x, q = z_y."""
    x: object
    y: object
    z: object
    p: object
    q: object

    def as_tuple(self):
        return (self.x, self.y, self.z, self.p, self.q)


@dataclass(frozen=True)
class Jet2:
    """Second-order jet of a graph: State plus (r, s, t) = (z_xx, z_xy, z_yy)."""
    x: object
    y: object
    z: object
    p: object
    q: object
    r: object
    s: object
    t: object

    @property
    def state(self) -> State:
        return State(self.x, self.y, self.z, self.p, self.q)


@dataclass(frozen=True)
class WarpedModel:
    """One of the four built-in warped-product charts.

    ``warp(z) -> (f, f', f'')`` and ``conformal(x, y) -> (lam, lam_x, lam_y,
    lam_xx, lam_xy, lam_yy)`` evaluate the closed-form chart data;
    ``ambient`` maps chart points to the canonical conformal model of the
    space form (used for mesh export only).
    """
    c: int
    chart: str
    warp: Callable = field(repr=False)
    conformal: Callable = field(repr=False)
    ambient: Callable = field(repr=False)
    xy_radius2: Optional[float]   # open bound on x^2 + y^2, None if unbounded
    z_bound: Optional[float]      # open bound on |z|, None if unbounded

    def contains(self, x, y, z, margin: float = DOMAIN_MARGIN):
        """Strict domain membership with a safety margin off the boundary."""
        ok = np.ones(np.broadcast(x, y, z).shape, dtype=bool)
        if self.xy_radius2 is not None:
            ok &= np.asarray(x) ** 2 + np.asarray(y) ** 2 < self.xy_radius2 * (1.0 - margin)
        if self.z_bound is not None:
            ok &= np.abs(z) < self.z_bound * (1.0 - margin)
        return ok if ok.shape else bool(ok)

    def require_inside(self, x, y, z, margin: float = DOMAIN_MARGIN):
        inside = self.contains(x, y, z, margin)
        if not np.all(inside):
            raise DomainError(f"state outside the {self.chart} chart domain")

    def metric_factor(self, x, y, z):
        """phi = f(z) * lam(x, y), the horizontal metric coefficient."""
        f = self.warp(z)[0]
        lam = self.conformal(x, y)[0]
        return f * lam


# -- chart data ------------------------------------------------------------

def _warp_cartesian(z):
    return 1.0, 0.0, 0.0


def _warp_cylindrical(z):
    sh, ch = sc.sinh_cosh(z)
    return ch * ch, 2.0 * sh * ch, 2.0 * (sh * sh + ch * ch)


def _warp_stereographic(z):
    s, co = sc.sin_cos(z)
    return co * co, -2.0 * s * co, 2.0 * (s * s - co * co)


def _warp_halfspace(z):
    f = sc.exp(-2.0 * z)
    return f, -2.0 * f, 4.0 * f


def _conf_flat(x, y):
    return 1.0, 0.0, 0.0, 0.0, 0.0, 0.0


def _conf_disk(sign):
    # lam = (1 + sign*(x^2+y^2)/4)^(-2); sign=-1 Poincare disk, +1 round sphere
    def conf(x, y):
        t = 1.0 + sign * 0.25 * (x * x + y * y)
        inv = 1.0 / t
        inv2 = inv * inv
        inv3 = inv2 * inv
        inv4 = inv2 * inv2
        lam = inv2
        lam_x = -sign * x * inv3
        lam_y = -sign * y * inv3
        lam_xx = -sign * inv3 + 1.5 * x * x * inv4
        lam_xy = 1.5 * x * y * inv4
        lam_yy = -sign * inv3 + 1.5 * y * y * inv4
        return lam, lam_x, lam_y, lam_xx, lam_xy, lam_yy
    return conf


def _ambient_cartesian(x, y, z):
    return np.stack(np.broadcast_arrays(x, y, z))


def _ambient_halfspace(x, y, z):
    x, y, z = np.broadcast_arrays(x, y, z)
    return np.stack((x, y, np.exp(z)))


def _ambient_ball(x, y, z):
    # Chart -> Poincare ball of radius 2: lift the equatorial disk point to
    # the hyperboloid, flow distance z along the plane normal, project back.
    x, y, z = np.broadcast_arrays(np.asarray(x, float), y, z)
    rho2 = 0.25 * (x * x + y * y)
    den = 1.0 - rho2
    p1, p2, p0 = x / den, y / den, (1.0 + rho2) / den
    ch, sh = np.cosh(z), np.sinh(z)
    w = 1.0 + ch * p0
    return np.stack((2.0 * ch * p1 / w, 2.0 * ch * p2 / w, 2.0 * sh / w))


def _ambient_stereo(x, y, z):
    # Chart -> stereographic coordinates of the 3-sphere: lift the equatorial
    # 2-sphere point, rotate by angle z toward the pole axis, project back.
    x, y, z = np.broadcast_arrays(np.asarray(x, float), y, z)
    rho2 = 0.25 * (x * x + y * y)
    den = 1.0 + rho2
    f1, f2, f4 = x / den, y / den, (1.0 - rho2) / den
    cz, sz = np.cos(z), np.sin(z)
    w = 1.0 + cz * f4
    return np.stack((2.0 * cz * f1 / w, 2.0 * cz * f2 / w, 2.0 * sz / w))


_CHART_TABLE = {
    "cartesian": (0, _warp_cartesian, _conf_flat, _ambient_cartesian, None, None),
    "cylindrical_h3": (-1, _warp_cylindrical, _conf_disk(-1.0), _ambient_ball, 4.0, None),
    "stereographic_s3": (1, _warp_stereographic, _conf_disk(1.0), _ambient_stereo, None, np.pi / 2),
    "halfspace_h3": (-1, _warp_halfspace, _conf_flat, _ambient_halfspace, None, None),
}


def make_space_form(c: int, chart: str) -> WarpedModel:
    """Build the warped-product chart for curvature constant c in {-1, 0, +1}."""
    if chart not in _CHART_TABLE:
        raise ChartError(f"unknown chart {chart!r}; expected one of {CHARTS}")
    want_c, warp, conf, ambient, xy_r2, z_bound = _CHART_TABLE[chart]
    if c != want_c:
        raise ChartError(f"chart {chart!r} requires c={want_c}, got c={c}")
    return WarpedModel(c=c, chart=chart, warp=warp, conformal=conf,
                       ambient=ambient, xy_radius2=xy_r2, z_bound=z_bound)


# -- prescribed curvature fields -------------------------------------------

@dataclass(frozen=True)
class CurvatureField:
    """Positive curvature prescription KK(x, y, z) with first partials."""
    value: Callable
    gradient: Callable          # (x, y, z) -> (K_x, K_y, K_z)
    source: str = "<callable>"

    @classmethod
    def constant(cls, k0: float) -> "CurvatureField":
        if k0 <= 0:
            raise CurvaturePositivityError(f"constant curvature must be positive, got {k0}")
        return cls(value=lambda x, y, z: float(k0),
                   gradient=lambda x, y, z: (0.0, 0.0, 0.0),
                   source=repr(k0))

    @classmethod
    def from_expression(cls, text: str) -> "CurvatureField":
        from .expr import parse_expression, differentiate, evaluate
        ast = parse_expression(text)
        dx, dy, dz = (differentiate(ast, v) for v in "xyz")

        def val(x, y, z):
            return evaluate(ast, x, y, z)

        def grad(x, y, z):
            return (evaluate(dx, x, y, z), evaluate(dy, x, y, z),
                    evaluate(dz, x, y, z))

        return cls(value=val, gradient=grad, source=text)

    def require_positive(self, x, y, z):
        k = self.value(x, y, z)
        if np.any(np.asarray(k) <= 0.0):
            raise CurvaturePositivityError(
                f"curvature {self.source} is nonpositive at a sampled state")
        return k


# -- Monge-Ampere coefficients ----------------------------------------------

_PARTIAL_VARS = ("x", "y", "z", "p", "q")


@dataclass(frozen=True)
class Coefficients:
    """Equation coefficients A, B, C, E, the ellipticity quantity D = AC-B^2+E,
    and the full 5x5 table of first partials in (x, y, z, p, q)."""
    A: object; B: object; C: object; E: object; D: object
    sqrtD: object
    A_x: object = None; A_y: object = None; A_z: object = None; A_p: object = None; A_q: object = None
    B_x: object = None; B_y: object = None; B_z: object = None; B_p: object = None; B_q: object = None
    C_x: object = None; C_y: object = None; C_z: object = None; C_p: object = None; C_q: object = None
    E_x: object = None; E_y: object = None; E_z: object = None; E_p: object = None; E_q: object = None
    D_x: object = None; D_y: object = None; D_z: object = None; D_p: object = None; D_q: object = None

    def partials_table(self):
        """{(name, var): value} over names A, B, C, E, D and vars x, y, z, p, q."""
        return {(nm, v): getattr(self, f"{nm}_{v}")
                for nm in "ABCED" for v in _PARTIAL_VARS}


def coefficient_fields(model: WarpedModel, kfield: CurvatureField,
                       x, y, z, p, q, partials: bool = True) -> Coefficients:
    """Closed-form coefficient algebra over any scalar type (see module doc).

    No domain or positivity checks: callers that feed numeric states should
    use :func:`ma_coefficients`.
    """
    lam, lam_x, lam_y, lam_xx, lam_xy, lam_yy = model.conformal(x, y)
    f, f1, f2 = model.warp(z)
    K = kfield.value(x, y, z)

    inv_lam = 1.0 / lam
    P = lam_x * inv_lam * 0.5
    Q = lam_y * inv_lam * 0.5
    g = f1 / f

    A = p * P - q * Q - q * q * g - 0.5 * f1 * lam
    B = p * Q + q * P + p * q * g
    C = -(p * P) + q * Q - p * p * g - 0.5 * f1 * lam

    W = f * lam + p * p + q * q
    D = K * W * W
    sqrtD = sc.sqrt(K) * W
    E = D - A * C + B * B

    if not partials:
        return Coefficients(A=A, B=B, C=C, E=E, D=D, sqrtD=sqrtD)

    Kx, Ky, Kz = kfield.gradient(x, y, z)
    inv_lam2 = inv_lam * inv_lam
    Px = (lam_xx * lam - lam_x * lam_x) * inv_lam2 * 0.5
    Py = (lam_xy * lam - lam_x * lam_y) * inv_lam2 * 0.5
    Qy = (lam_yy * lam - lam_y * lam_y) * inv_lam2 * 0.5
    # lam_y/(2 lam) has x-partial equal to Py by symmetry of lam_xy
    gz = f2 / f - g * g

    A_x = p * Px - q * Py - 0.5 * f1 * lam_x
    A_y = p * Py - q * Qy - 0.5 * f1 * lam_y
    A_z = -(q * q) * gz - 0.5 * f2 * lam
    A_p = P
    A_q = -Q - 2.0 * q * g

    B_x = p * Py + q * Px
    B_y = p * Qy + q * Py
    B_z = p * q * gz
    B_p = Q + q * g
    B_q = P + p * g

    C_x = -(p * Px) + q * Py - 0.5 * f1 * lam_x
    C_y = -(p * Py) + q * Qy - 0.5 * f1 * lam_y
    C_z = -(p * p) * gz - 0.5 * f2 * lam
    C_p = -P - 2.0 * p * g
    C_q = Q

    KW2 = 2.0 * K * W
    D_x = Kx * W * W + KW2 * (f * lam_x)
    D_y = Ky * W * W + KW2 * (f * lam_y)
    D_z = Kz * W * W + KW2 * (f1 * lam)
    D_p = KW2 * (2.0 * p)
    D_q = KW2 * (2.0 * q)

    E_x = D_x - A_x * C - A * C_x + 2.0 * B * B_x
    E_y = D_y - A_y * C - A * C_y + 2.0 * B * B_y
    E_z = D_z - A_z * C - A * C_z + 2.0 * B * B_z
    E_p = D_p - A_p * C - A * C_p + 2.0 * B * B_p
    E_q = D_q - A_q * C - A * C_q + 2.0 * B * B_q

    return Coefficients(
        A=A, B=B, C=C, E=E, D=D, sqrtD=sqrtD,
        A_x=A_x, A_y=A_y, A_z=A_z, A_p=A_p, A_q=A_q,
        B_x=B_x, B_y=B_y, B_z=B_z, B_p=B_p, B_q=B_q,
        C_x=C_x, C_y=C_y, C_z=C_z, C_p=C_p, C_q=C_q,
        E_x=E_x, E_y=E_y, E_z=E_z, E_p=E_p, E_q=E_q,
        D_x=D_x, D_y=D_y, D_z=D_z, D_p=D_p, D_q=D_q,
    )


def ma_coefficients(model: WarpedModel, kfield: CurvatureField, s: State,
                    partials: bool = True,
                    margin: float = DOMAIN_MARGIN) -> Coefficients:
    """Coefficients of the prescribed-curvature equation at a numeric state."""
    model.require_inside(s.x, s.y, s.z, margin)
    kfield.require_positive(s.x, s.y, s.z)
    return coefficient_fields(model, kfield, s.x, s.y, s.z, s.p, s.q,
                              partials=partials)


def unit_normal_angle(model: WarpedModel, s: State):
    """Upward unit normal (chart frame) and its vertical angle component.

    N = (-p, -q, f*lam) / sqrt(f^2 lam^2 + f lam (p^2+q^2)) is unit with
    respect to the warped metric; nu = sqrt(f*lam / (f*lam + p^2 + q^2))
    lies in (0, 1], equal to 1 exactly on horizontal tangent planes.
    """
    model.require_inside(s.x, s.y, s.z)
    phi = model.metric_factor(s.x, s.y, s.z)
    w = phi + s.p ** 2 + s.q ** 2
    norm = np.sqrt(phi) * np.sqrt(w)
    normal = np.stack(np.broadcast_arrays(-s.p / norm, -s.q / norm, phi / norm))
    nu = np.sqrt(phi / w)
    return normal, nu


def extrinsic_curvature_jet(model: WarpedModel, j: Jet2):
    """Extrinsic curvature of a graph from its second-order jet.

    Equals det(II)/det(I) of the graph in the warped chart; in coefficient
    form K = ((r+C)(t+A) - (s-B)^2) / (f*lam + p^2 + q^2)^2.
    """
    one = CurvatureField.constant(1.0)
    co = coefficient_fields(model, one, j.x, j.y, j.z, j.p, j.q, partials=False)
    f = model.warp(j.z)[0]
    lam = model.conformal(j.x, j.y)[0]
    w = f * lam + j.p ** 2 + j.q ** 2
    return ((j.r + co.C) * (j.t + co.A) - (j.s - co.B) ** 2) / (w * w)

"""General Monge-Ampere layer: residuals, ellipticity diagnostics, the
solution metric, convexifiers, and the right-hand sides of the first-order
and Laplacian systems satisfied by conformal parametrizations.

For a solution z(x, y) of A r + 2 B s + C t + rt - s^2 = E with
D = AC - B^2 + E > 0, the quadratic form

    eps * ((r + C) dx^2 + 2 (s - B) dx dy + (t + A) dy^2)

is a Riemannian metric for one sign eps, with determinant D on exact
solutions.  In conformal parameters (u, v) of that metric, the five unknowns
zz = (x, y, z, p, q) satisfy the first-order system

    p_u =  sqrt(D) y_v + B y_u - C x_u,     p_v = -sqrt(D) y_u + B y_v - C x_v,
    q_u = -sqrt(D) x_v + B x_u - A y_u,     q_v =  sqrt(D) x_u + B x_v - A y_v,

and the quasilinear elliptic system Delta zz = h(zz, zz_u, zz_v) assembled in
:func:`laplacian_rhs`.  Everything here is written against the generic scalar
layer, so the same code evaluates on numbers, grids, and truncated power
series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EllipticityError, MawarpError, MetricSignError
from .spaceforms import (Coefficients, CurvatureField, Jet2, State, WarpedModel,
                         coefficient_fields, ma_coefficients)

EQ_RESIDUAL_RTOL = 1e-6     # jet "satisfies the equation" if |res| <= rtol*(1+|E|)


def residual(j: Jet2, co: Coefficients):
    """Defect A r + 2 B s + C t + rt - s^2 - E of a second-order jet."""
    return (co.A * j.r + 2.0 * co.B * j.s + co.C * j.t
            + j.r * j.t - j.s * j.s - co.E)


# -- solution metric ---------------------------------------------------------

@dataclass(frozen=True)
class ConformalMetric:
    """Sign eps and entries of eps*((r+C), (s-B); (s-B), (t+A))."""
    eps: int
    g11: object
    g12: object
    g22: object

    @property
    def det(self):
        return self.g11 * self.g22 - self.g12 * self.g12


def conformal_metric(j: Jet2, co: Coefficients, check: bool = True) -> ConformalMetric:
    """Choose the sign that makes the solution metric positive definite.

    With ``check`` (default), the jet must satisfy the equation to within
    EQ_RESIDUAL_RTOL * (1 + |E|) first.
    """
    if check:
        res = np.asarray(residual(j, co))
        if np.any(np.abs(res) > EQ_RESIDUAL_RTOL * (1.0 + np.abs(co.E))):
            raise MawarpError("jet does not satisfy the equation; "
                              "pass check=False to build the metric anyway")
    g11 = np.asarray(j.r + co.C, dtype=float)
    g12 = np.asarray(j.s - co.B, dtype=float)
    g22 = np.asarray(j.t + co.A, dtype=float)
    det = g11 * g22 - g12 * g12
    if np.any(det <= 0.0):
        raise MetricSignError("neither sign yields a positive definite metric")
    if np.all(g11 > 0.0):
        eps = 1
    elif np.all(g11 < 0.0):
        eps = -1
    else:
        raise MetricSignError("metric sign is not constant over the sample set")
    return ConformalMetric(eps=eps, g11=eps * g11, g12=eps * g12, g22=eps * g22)


# -- Lipschitz surrogate ------------------------------------------------------

_STAR_COMBOS = ("A_p", "A_q+2B_p", "C_p+2B_q", "C_q")


def _star_values(model, kfield, x, y, z, p, q):
    co = coefficient_fields(model, kfield, x, y, z, p, q)
    combos = (co.A_p + 0.0 * p, co.A_q + 2.0 * co.B_p,
              co.C_p + 2.0 * co.B_q, co.C_q + 0.0 * q)
    return np.stack(np.broadcast_arrays(*combos))


def check_star(model: WarpedModel, kfield: CurvatureField, samples,
               step: float = 1e-5) -> float:
    """Largest gradient-variable dependence of the four Lipschitz combinations.

    The combinations A_p, A_q+2B_p, C_p+2B_q, C_q must not depend on (p, q).
    Two detectors run over the sample set and the max is returned: central
    finite differences in p and q, and direct comparison against the same
    state with (p, q) zeroed.
    """
    xs = np.asarray([s.x for s in samples], dtype=float)
    ys = np.asarray([s.y for s in samples], dtype=float)
    zs = np.asarray([s.z for s in samples], dtype=float)
    ps = np.asarray([s.p for s in samples], dtype=float)
    qs = np.asarray([s.q for s in samples], dtype=float)

    base = _star_values(model, kfield, xs, ys, zs, ps, qs)
    zero = _star_values(model, kfield, xs, ys, zs, 0.0 * ps, 0.0 * qs)
    deviation = np.abs(base - zero).max()

    for bump in ("p", "q"):
        hi_p = ps + step if bump == "p" else ps
        lo_p = ps - step if bump == "p" else ps
        hi_q = qs + step if bump == "q" else qs
        lo_q = qs - step if bump == "q" else qs
        fd = (_star_values(model, kfield, xs, ys, zs, hi_p, hi_q)
              - _star_values(model, kfield, xs, ys, zs, lo_p, lo_q)) / (2.0 * step)
        deviation = max(deviation, np.abs(fd).max())
    return float(deviation)


def check_star_coefficients(coeff_fn, samples, step: float = 1e-5) -> float:
    """Same detectors as :func:`check_star` for an arbitrary coefficient source.

    ``coeff_fn(state) -> Coefficients`` lets tests inject adversarial
    coefficient tables.
    """
    def values(st):
        co = coeff_fn(st)
        return np.asarray([co.A_p, co.A_q + 2.0 * co.B_p,
                           co.C_p + 2.0 * co.B_q, co.C_q], dtype=float)

    deviation = 0.0
    for s in samples:
        base = values(s)
        zero = values(State(s.x, s.y, s.z, 0.0, 0.0))
        deviation = max(deviation, np.abs(base - zero).max())
        for dp, dq in ((step, 0.0), (0.0, step)):
            hi = values(State(s.x, s.y, s.z, s.p + dp, s.q + dq))
            lo = values(State(s.x, s.y, s.z, s.p - dp, s.q - dq))
            deviation = max(deviation, (np.abs(hi - lo) / (2.0 * step)).max())
    return float(deviation)


# -- convexifier --------------------------------------------------------------

@dataclass(frozen=True)
class Convexifier:
    """Quadratic correction constants making a solution graph convex.

    Adding eps*(c/2 x^2 + a/2 y^2) to a solution shifts its Hessian by
    diag(c, a) so that (r+c, s; s, t+a) inherits positive definiteness from
    the solution metric whenever c - C > 0, a - A > 0 and
    (c - C)(a - A) - B^2 > 0 along the graph.
    """
    a: float
    c: float


def convexifiers(coefficient_samples) -> Convexifier:
    """a = c = max over samples of max(|A|+|B|, |C|+|B|) + 1, then verified."""
    bound = 0.0
    for co in coefficient_samples:
        bound = max(bound,
                    float(np.max(np.abs(co.A) + np.abs(co.B))),
                    float(np.max(np.abs(co.C) + np.abs(co.B))))
    conv = Convexifier(a=bound + 1.0, c=bound + 1.0)
    for co in coefficient_samples:
        cc = conv.c - np.asarray(co.C)
        aa = conv.a - np.asarray(co.A)
        good = (cc > 0.0) & (aa > 0.0) & (cc * aa - np.asarray(co.B) ** 2 > 0.0)
        if not np.all(good):
            raise MawarpError("convexifier verification failed; inconsistent samples")
    return conv


# -- Laplacian system ----------------------------------------------------------

@dataclass(frozen=True)
class HCoefficients:
    h1: object; h2: object; h3: object; h4: object
    ht1: object; ht2: object; ht3: object; ht4: object


def _require_elliptic(co: Coefficients):
    d = co.D
    if not hasattr(d, "coefficient"):     # numeric path only
        if np.any(np.asarray(d) <= 0.0):
            raise EllipticityError("D = AC - B^2 + E is nonpositive")


def h_coefficients(s, co: Coefficients) -> HCoefficients:
    """The eight quadratic-form coefficients of the base-coordinate Laplacians."""
    _require_elliptic(co)
    inv2d = 0.5 / co.D
    br1 = (co.D_x + co.D_z * s.p - co.D_p * co.C + co.D_q * co.B) * inv2d
    br2 = (co.D_y + co.D_z * s.q + co.D_p * co.B - co.D_q * co.A) * inv2d
    inv_sq = 1.0 / co.sqrtD
    h4 = (co.A_x + co.B_y + co.A_z * s.p + co.B_z * s.q - co.A_p * co.C
          + (co.A_q + co.B_p) * co.B - co.B_q * co.A - 0.5 * co.D_p) * inv_sq
    ht4 = (co.C_y + co.B_x + co.C_z * s.q + co.B_z * s.p - co.B_p * co.C
           + (co.B_q + co.C_p) * co.B - co.C_q * co.A - 0.5 * co.D_q) * inv_sq
    return HCoefficients(
        h1=co.B_q - br1,
        h2=-co.A_q - co.B_p - br2,
        h3=co.A_p,
        h4=h4,
        ht1=co.C_q,
        ht2=-co.B_q - co.C_p - br1,
        ht3=co.B_p - br2,
        ht4=ht4,
    )


def _along(co_partial_x, co_partial_y, co_partial_z, co_partial_p, co_partial_q, d):
    """Chain rule F_x x_u + F_y y_u + F_z z_u + F_p p_u + F_q q_u."""
    return (co_partial_x * d[0] + co_partial_y * d[1] + co_partial_z * d[2]
            + co_partial_p * d[3] + co_partial_q * d[4])


def laplacian_rhs(s, du, dv, co: Coefficients):
    """Right-hand side (Dx, Dy, Dz, Dp, Dq) of Delta zz = h(zz, zz_u, zz_v).

    ``du``, ``dv`` are the 5-vectors of u- and v-derivatives of
    zz = (x, y, z, p, q); coefficient derivatives along the solution are
    expanded by the chain rule over the partials table.
    """
    _require_elliptic(co)
    hc = h_coefficients(s, co)
    xu, yu, _, pu, qu = du
    xv, yv, _, pv, qv = dv

    e1 = xu * xu + xv * xv
    e2 = xu * yu + xv * yv
    e3 = yu * yu + yv * yv
    e4 = xu * yv - xv * yu
    lap_x = hc.h1 * e1 + hc.h2 * e2 + hc.h3 * e3 + hc.h4 * e4
    lap_y = hc.ht1 * e1 + hc.ht2 * e2 + hc.ht3 * e3 + hc.ht4 * e4

    a_u = _along(co.A_x, co.A_y, co.A_z, co.A_p, co.A_q, du)
    a_v = _along(co.A_x, co.A_y, co.A_z, co.A_p, co.A_q, dv)
    b_u = _along(co.B_x, co.B_y, co.B_z, co.B_p, co.B_q, du)
    b_v = _along(co.B_x, co.B_y, co.B_z, co.B_p, co.B_q, dv)
    c_u = _along(co.C_x, co.C_y, co.C_z, co.C_p, co.C_q, du)
    c_v = _along(co.C_x, co.C_y, co.C_z, co.C_p, co.C_q, dv)
    d_u = _along(co.D_x, co.D_y, co.D_z, co.D_p, co.D_q, du)
    d_v = _along(co.D_x, co.D_y, co.D_z, co.D_p, co.D_q, dv)
    half_inv_sq = 0.5 / co.sqrtD
    sq_u = d_u * half_inv_sq
    sq_v = d_v * half_inv_sq

    lap_p = (sq_u * yv - sq_v * yu + b_u * yu + b_v * yv
             + co.B * lap_y - co.C * lap_x - c_u * xu - c_v * xv)
    lap_q = (-sq_u * xv + sq_v * xu + b_u * xu + b_v * xv
             + co.B * lap_x - co.A * lap_y - a_u * yu - a_v * yv)
    lap_z = (pu * xu + pv * xv + qu * yu + qv * yv
             + s.p * lap_x + s.q * lap_y)
    return lap_x, lap_y, lap_z, lap_p, lap_q


def first_order_residual(s, du, dv, co: Coefficients):
    """Defects of the four first-order compatibility relations."""
    _require_elliptic(co)
    xu, yu, _, pu, qu = du
    xv, yv, _, pv, qv = dv
    sq = co.sqrtD
    return (
        pu - (sq * yv + co.B * yu - co.C * xu),
        pv - (-sq * yu + co.B * yv - co.C * xv),
        qu - (-sq * xv + co.B * xu - co.A * yu),
        qv - (sq * xu + co.B * xv - co.A * yv),
    )


__all__ = [
    "ConformalMetric", "Convexifier", "HCoefficients",
    "residual", "conformal_metric", "check_star", "check_star_coefficients",
    "convexifiers", "h_coefficients", "laplacian_rhs", "first_order_residual",
    "ma_coefficients", "EQ_RESIDUAL_RTOL",
]

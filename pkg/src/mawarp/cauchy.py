"""Construction of singular prescribed-curvature graphs by power-series marching.

Given a strictly convex analytic curve gamma = (alpha, beta) traversed with
negative curvature, the boundary row v = 0 of the conformal strip carries the
mixed data

    (x, y, z)(u, 0) = (0, 0, 0),        (p, q)(u, 0) = (alpha, beta)(u),
    x_v = -beta'/sqrt(D0),  y_v = alpha'/sqrt(D0),  z_v = alpha x_v + beta y_v,
    p_v = -C0 x_v + B0 y_v, q_v = B0 x_v - A0 y_v,

with the coefficients evaluated at (0, 0, 0, alpha, beta).  These satisfy the
first-order compatibility system exactly at v = 0.  The five unknowns are then
extended into the strip by the Taylor recursion

    c_{k+2} = (h_k - c_k'') / ((k+1)(k+2)),

where h_k is the k-th v-coefficient of the elliptic right-hand side
h(zz, zz_u, zz_v), computed by truncated power-series composition of the chart
data over Fourier-represented coefficients.  The boundary-value problem this
solves is ill posed in finite smoothness, so the march is protected by exact
dealiasing, an optional per-level low-pass filter, and a mandatory
coefficient-growth diagnostic that caps the trusted strip height.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from . import curves as cv
from .errors import (BlowupError, DomainError, EllipticityError, MawarpError,
                     OrientationError, StripRangeError)
from .fourier import (FourierSeries, band_limit, diff_u, grid, lowpass_filter,
                      noise_gate)
from .ftseries import FTSeries
from .monge_ampere import first_order_residual, laplacian_rhs, residual
from .spaceforms import (CurvatureField, Jet2, State, WarpedModel,
                         coefficient_fields, unit_normal_angle)

DEFAULT_FOURIER_ORDER = 64
DEFAULT_TAYLOR_ORDER = 24
DEFAULT_SAFETY = 0.5

_COMPONENTS = ("x", "y", "z", "p", "q")


@dataclass(frozen=True)
class CauchyData:
    """Boundary row of the strip: values and v-derivatives of (x, y, z, p, q)."""
    curve: cv.PeriodicCurve
    model: WarpedModel
    kfield: CurvatureField
    order: int
    series: Dict[str, FourierSeries]

    def boundary_values(self, n: int) -> Dict[str, np.ndarray]:
        u = grid(n)
        return {name: s(u) for name, s in self.series.items()}


def cauchy_data(curve: cv.PeriodicCurve, model: WarpedModel,
                kfield: CurvatureField, order: int = DEFAULT_FOURIER_ORDER) -> CauchyData:
    """Build the mixed boundary data for a negatively oriented convex curve."""
    verdict = cv.convexity_check(curve)
    if verdict == cv.STRICTLY_CONVEX_POSITIVE:
        raise OrientationError("curve must be traversed with negative curvature; "
                               "use orient_for_construction first")
    if verdict != cv.STRICTLY_CONVEX_NEGATIVE:
        raise OrientationError("curve is not strictly convex")
    if curve.order > order:
        raise MawarpError(f"curve order {curve.order} exceeds series order {order}")
    model.require_inside(0.0, 0.0, 0.0)
    kfield.require_positive(0.0, 0.0, 0.0)

    n = 4 * max(order, 8)
    u = grid(n)
    alpha, beta = curve.alpha(u), curve.beta(u)
    dalpha, dbeta = curve.alpha(u, 1), curve.beta(u, 1)

    co = coefficient_fields(model, kfield, 0.0, 0.0, 0.0, alpha, beta,
                            partials=False)
    sqrt_d0 = np.broadcast_to(np.asarray(co.sqrtD, dtype=float), alpha.shape)
    x_v = -dbeta / sqrt_d0
    y_v = dalpha / sqrt_d0
    z_v = alpha * x_v + beta * y_v
    p_v = -co.C * x_v + co.B * y_v
    q_v = co.B * x_v - co.A * y_v

    zero = FourierSeries([0.0], [0.0])
    fit = lambda vals: FourierSeries.fit(vals, order)
    series = {
        "x": zero, "y": zero, "z": zero,
        "p": fit(alpha), "q": fit(beta),
        "x_v": fit(x_v), "y_v": fit(y_v), "z_v": fit(z_v),
        "p_v": fit(p_v), "q_v": fit(q_v),
    }
    return CauchyData(curve=curve, model=model, kfield=kfield, order=order,
                      series=series)


# -- strip solutions ----------------------------------------------------------

@dataclass
class StripSolution:
    """Taylor-in-v, Fourier-in-u representation of zz = (x, y, z, p, q).

    ``coeffs[k, i]`` holds the k-th Taylor coefficient of component i on the
    internal periodic grid (n = 4 * mmax points, band limited to mmax).
    """
    coeffs: np.ndarray
    mmax: int
    model: WarpedModel
    kfield: CurvatureField
    data: CauchyData
    strip_height: float
    requested_height: float
    growth_ratio: float
    safety: float
    filtered: bool
    diagnostics: dict = field(default_factory=dict)
    _modes: Optional[np.ndarray] = dataclasses.field(default=None, repr=False)

    @property
    def taylor_order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def grid_size(self) -> int:
        return self.coeffs.shape[2]

    def modes(self) -> np.ndarray:
        """Normalized complex Fourier modes per level/component, (N+1, 5, mmax+1)."""
        if self._modes is None:
            n = self.grid_size
            self._modes = np.fft.rfft(self.coeffs, axis=-1)[..., :self.mmax + 1] / n
        return self._modes

    def fields(self, u: np.ndarray, v: np.ndarray, du: int = 0, dv: int = 0) -> np.ndarray:
        """Evaluate d^(du+dv) zz / du^du dv^dv on the tensor grid, (5, nv, nu)."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        mm = self.modes()
        m = np.arange(self.mmax + 1)
        table = np.exp(1j * np.outer(m, u)) * ((1j * m) ** du)[:, None]
        per_level = (2.0 * (mm @ table) - (mm[..., :1] @ table[:1])).real
        if dv > self.taylor_order:
            return np.zeros((5, len(v), len(u)))
        coefs = per_level[dv:]
        ks = np.arange(coefs.shape[0], dtype=float)
        fac = np.ones_like(ks)
        for j in range(1, dv + 1):
            fac *= ks + j
        coefs = coefs * fac[:, None, None]
        out = np.zeros((5, len(v), len(u)))
        for k in range(coefs.shape[0] - 1, -1, -1):
            out = out * v[None, :, None] + coefs[k][:, None, :]
        return out

    def state_on_grid(self, u, v) -> State:
        f = self.fields(u, v)
        return State(*f)


def _growth_ratio(norms: np.ndarray) -> float:
    """Asymptotic per-level growth max (n_k/n_j)^(1/(k-j)) over the top half.

    Adjacent-level pairs are skipped: symmetric data can populate even and
    odd levels at very different magnitudes, and a cross-parity ratio then
    measures the imbalance instead of the growth envelope.
    """
    top = len(norms) - 1
    best = 0.0
    for j in range(max(1, top // 2), top - 1):
        if norms[j] <= 1e-200:
            continue
        for k in range(j + 2, min(j + 5, top + 1)):
            if norms[k] <= 1e-200:
                continue
            best = max(best, (norms[k] / norms[j]) ** (1.0 / (k - j)))
    return float(best)


def solve(data: CauchyData, fourier_order: int = DEFAULT_FOURIER_ORDER,
          taylor_order: int = DEFAULT_TAYLOR_ORDER, strip_height: float = 1.0,
          *, use_filter: bool = True, safety: float = DEFAULT_SAFETY,
          auto_cap: bool = True, collocation: Tuple[int, int] = (64, 16)) -> StripSolution:
    """March the elliptic system into the strip and certify the result.

    Returns a StripSolution whose ``strip_height`` is the requested height
    capped at safety/growth_ratio (with ``auto_cap``; otherwise a growth ratio
    exceeding 1/height raises BlowupError).  Collocation residuals of the
    marched system, the first-order system and the curvature equation are
    stored in ``diagnostics``.
    """
    mord, nord = int(fourier_order), int(taylor_order)
    if mord < 4 or nord < 4:
        raise MawarpError("orders must satisfy M >= 4 and N >= 4")
    if strip_height <= 0.0:
        raise MawarpError("strip height must be positive")
    n = 4 * mord
    model, kfield = data.model, data.kfield

    vals = data.boundary_values(n)
    coeffs = np.zeros((nord + 1, 5, n))
    coeffs[0] = band_limit(np.stack([vals[c] for c in _COMPONENTS]), mord)
    coeffs[1] = band_limit(np.stack([vals[c + "_v"] for c in _COMPONENTS]), mord)
    scale = float(np.max(np.abs(coeffs[:2])))

    for k in range(nord - 1):
        klen = k + 1
        jets = [FTSeries(coeffs[:klen, i].copy(), mord) for i in range(5)]
        jets_u = [s.du() for s in jets]
        shift = np.arange(1, klen + 1)[:, None]
        jets_v = [FTSeries(shift * coeffs[1:klen + 1, i], mord) for i in range(5)]
        st = State(*jets)
        co = coefficient_fields(model, kfield, *jets)
        rhs = laplacian_rhs(st, jets_u, jets_v, co)
        for i in range(5):
            top = rhs[i].coefficient(k)
            coeffs[k + 2, i] = (top - diff_u(coeffs[k, i], 2)) / ((k + 1.0) * (k + 2.0))
        if use_filter:
            coeffs[k + 2] = lowpass_filter(coeffs[k + 2], mord)
        coeffs[k + 2] = noise_gate(coeffs[k + 2], mord, scale)
        scale = max(scale, float(np.max(np.abs(coeffs[k + 2]))))

    norms = np.max(np.abs(coeffs), axis=(1, 2))
    ratio = _growth_ratio(norms)
    if ratio > 0.0 and strip_height * ratio > 1.0 and not auto_cap:
        raise BlowupError(
            f"growth ratio {ratio:.3g} makes height {strip_height} untrustworthy "
            f"(recommended <= {safety / ratio:.3g})")
    trusted = strip_height if ratio == 0.0 else min(strip_height, safety / ratio)

    sol = StripSolution(coeffs=coeffs, mmax=mord, model=model, kfield=kfield,
                        data=data, strip_height=trusted,
                        requested_height=strip_height, growth_ratio=ratio,
                        safety=safety, filtered=use_filter)
    sol.diagnostics = residual_report(sol, collocation[0], collocation[1])
    return sol


def residual_report(sol: StripSolution, nu: int = 64, nv: int = 16) -> dict:
    """Collocation residuals over the trusted strip (raises on lost ellipticity
    or on leaving the chart domain)."""
    u = grid(nu)
    v = sol.strip_height * (np.arange(1, nv + 1) / nv)
    f = sol.fields(u, v)
    fu = sol.fields(u, v, du=1)
    fv = sol.fields(u, v, dv=1)
    lap = sol.fields(u, v, du=2) + sol.fields(u, v, dv=2)

    if not np.all(sol.model.contains(f[0], f[1], f[2])):
        raise DomainError("marched solution left the chart domain")
    st = State(*f)
    co = coefficient_fields(sol.model, sol.kfield, *f)
    dmin = float(np.min(co.D))
    if dmin <= 0.0:
        raise EllipticityError(f"D reached {dmin:.3e} inside the strip")

    rhs = laplacian_rhs(st, fu, fv, co)
    mixed = float(max(np.max(np.abs(lap[i] - rhs[i])) for i in range(5)))
    d1 = first_order_residual(st, fu, fv, co)
    d1_sup = float(max(np.max(np.abs(d)) for d in d1))

    jets, good = strip_jets_arrays(f, fu, fv)
    res = residual(jets, co)
    scale = 1.0 + np.abs(co.E)
    eq1 = float(np.max(np.abs(res[good]) / scale[good])) if np.any(good) else 0.0

    return {
        "collocation_grid": (nu, nv),
        "mixed_system_sup": mixed,
        "first_order_sup": d1_sup,
        "equation_rel_sup": eq1,
        "ellipticity_min": dmin,
    }


def strip_jets_arrays(f: np.ndarray, fu: np.ndarray, fv: np.ndarray,
                      floor: float = 1e-9):
    """Recover (r, s, t) from strip derivatives by inverting the chain rule.

    Returns a Jet2 of grid arrays and a mask of points where the base
    Jacobian x_u y_v - x_v y_u is safely away from zero.
    """
    xu, yu, _, pu, qu = fu
    xv, yv, _, pv, qv = fv
    jac = xu * yv - xv * yu
    good = np.abs(jac) > floor * max(float(np.max(np.abs(jac))), 1e-300)
    safe = np.where(good, jac, 1.0)
    r = (pu * yv - pv * yu) / safe
    s1 = (pv * xu - pu * xv) / safe
    s2 = (qu * yv - qv * yu) / safe
    t = (qv * xu - qu * xv) / safe
    s = 0.5 * (s1 + s2)
    return Jet2(f[0], f[1], f[2], f[3], f[4], r, s, t), good


# -- evaluated meshes -----------------------------------------------------------

@dataclass
class SurfaceMesh:
    """Evaluated grid of chart/ambient positions, normals and curvature data."""
    u: np.ndarray
    v: np.ndarray
    chart: np.ndarray          # (3, nv, nu) chart coordinates x, y, z
    gradient: np.ndarray       # (2, nv, nu) p, q
    ambient: np.ndarray        # (3, nv, nu) canonical model coordinates
    normal: np.ndarray         # (3, nv, nu) chart-frame unit normal
    angle: np.ndarray          # (nv, nu) vertical angle component
    k_prescribed: np.ndarray   # (nv, nu)
    k_computed: np.ndarray     # (nv, nu), NaN where the base map degenerates
    residual_eq1: np.ndarray   # (nv, nu), NaN likewise

    @property
    def n_vertices(self) -> int:
        return self.angle.size

    @property
    def shape(self):
        return self.angle.shape


def evaluate(sol: StripSolution, grid_dims: Tuple[int, int] = (128, 32),
             v_range: Optional[Tuple[float, float]] = None) -> SurfaceMesh:
    """Sample the strip solution on an (n_u, n_v) grid of the trusted strip."""
    n_u, n_v = grid_dims
    if v_range is None:
        v_range = (0.0, sol.strip_height)
    v_min, v_max = v_range
    if v_min < 0.0 or v_max < v_min or v_max > sol.strip_height + 1e-12:
        raise StripRangeError(
            f"requested v range {v_range} outside strip [0, {sol.strip_height}]")
    u = grid(n_u)
    v = np.linspace(v_min, v_max, n_v)

    f = sol.fields(u, v)
    fu = sol.fields(u, v, du=1)
    fv = sol.fields(u, v, dv=1)
    st = State(*f)
    normal, angle = unit_normal_angle(sol.model, st)
    ambient = sol.model.ambient(f[0], f[1], f[2])

    k_presc = np.broadcast_to(
        np.asarray(sol.kfield.value(f[0], f[1], f[2]), dtype=float), f[0].shape).copy()
    jets, good = strip_jets_arrays(f, fu, fv)
    from .spaceforms import extrinsic_curvature_jet
    k_comp = np.where(good, extrinsic_curvature_jet(sol.model, jets), np.nan)
    co = coefficient_fields(sol.model, sol.kfield, *f, partials=False)
    res = np.where(good, residual(jets, co), np.nan)

    return SurfaceMesh(u=u, v=v, chart=f[:3], gradient=f[3:], ambient=ambient,
                       normal=normal, angle=angle, k_prescribed=k_presc,
                       k_computed=k_comp, residual_eq1=res)

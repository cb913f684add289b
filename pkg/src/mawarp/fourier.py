"""Real trigonometric series on [0, 2pi) and pseudo-spectral grid helpers.

All periodic fields in the package live on uniform grids u_j = 2*pi*j/n and
are kept band limited to modes |m| <= mmax with n >= 4*mmax.  Keeping the
band at a quarter of the grid means a product of two band-limited functions
(content up to 2*mmax) never folds back onto the retained modes, so
truncating after each nonlinear operation is an exact dealiasing rule.
"""

from __future__ import annotations

import numpy as np

from .errors import MawarpError


def grid(n: int) -> np.ndarray:
    """Uniform periodic grid u_j = 2*pi*j/n, j = 0..n-1."""
    return 2.0 * np.pi * np.arange(n) / n


def band_limit(rows: np.ndarray, mmax: int) -> np.ndarray:
    """Zero all Fourier modes above mmax along the last axis."""
    spec = np.fft.rfft(rows, axis=-1)
    spec[..., mmax + 1:] = 0.0
    return np.fft.irfft(spec, n=rows.shape[-1], axis=-1)


def diff_u(rows: np.ndarray, order: int = 1) -> np.ndarray:
    """Spectral derivative of periodic grid data along the last axis."""
    n = rows.shape[-1]
    spec = np.fft.rfft(rows, axis=-1)
    spec *= (1j * np.arange(spec.shape[-1])) ** order
    return np.fft.irfft(spec, n=n, axis=-1)


def lowpass_filter(rows: np.ndarray, mmax: int, alpha: float = 36.0,
                   power: int = 36) -> np.ndarray:
    """Exponential spectral filter exp(-alpha*(m/mmax)^power), truncated at mmax.

    The filter is diagonal in mode number, so it commutes with parameter
    shifts and preserves real symmetry.
    """
    spec = np.fft.rfft(rows, axis=-1)
    m = np.arange(spec.shape[-1], dtype=float)
    damp = np.exp(-alpha * (m / mmax) ** power)
    damp[m > mmax] = 0.0
    spec *= damp
    return np.fft.irfft(spec, n=rows.shape[-1], axis=-1)


def noise_gate(rows: np.ndarray, mmax: int, scale: float,
               theta: float = 1e-13) -> np.ndarray:
    """Zero Fourier modes whose amplitude is below theta * scale.

    Marching an elliptic system amplifies mode m roughly like m^2/k^2 per
    level pair, so fresh rounding noise compounds into a spurious growth of
    the top Taylor levels unless it is removed before it can propagate.
    Modes below the floor contribute less than theta * scale to the solution
    and nothing to its trustworthiness, and the rule is mode-diagonal and
    amplitude-based, hence exactly equivariant under parameter shifts.
    """
    n = rows.shape[-1]
    spec = np.fft.rfft(rows, axis=-1)
    amp = np.abs(spec) / n
    amp[..., 1:] *= 2.0
    spec[amp < theta * scale] = 0.0
    spec[..., mmax + 1:] = 0.0
    return np.fft.irfft(spec, n=n, axis=-1)


def modes(rows: np.ndarray, mmax: int) -> np.ndarray:
    """Normalized complex modes F_m, m = 0..mmax, of real periodic grid data.

    Convention: f(u) = Re(F_0) + sum_{m>=1} 2*Re(F_m * exp(i m u)).
    """
    n = rows.shape[-1]
    return np.fft.rfft(rows, axis=-1)[..., :mmax + 1] / n


def synth(mode_rows: np.ndarray, u: np.ndarray, deriv: int = 0) -> np.ndarray:
    """Evaluate normalized modes at arbitrary parameter values u."""
    m = np.arange(mode_rows.shape[-1])
    table = np.exp(1j * np.outer(m, u)) * ((1j * m) ** deriv)[:, None]
    vals = mode_rows @ table
    head = mode_rows[..., :1] @ table[:1]
    return (2.0 * vals - head).real


class FourierSeries:
    """Finite real trigonometric series a_0 + sum (a_m cos mu + b_m sin mu)."""

    def __init__(self, cos_coeffs, sin_coeffs):
        a = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
        b = np.atleast_1d(np.asarray(sin_coeffs, dtype=float))
        order = max(len(a), len(b)) - 1
        self.a = np.zeros(order + 1)
        self.b = np.zeros(order + 1)
        self.a[:len(a)] = a
        self.b[:len(b)] = b
        self.b[0] = 0.0

    @property
    def order(self) -> int:
        return len(self.a) - 1

    @classmethod
    def fit(cls, values: np.ndarray, order: int) -> "FourierSeries":
        """Least-squares-exact fit from uniform samples (n >= 2*order+1)."""
        values = np.asarray(values, dtype=float)
        n = values.shape[-1]
        if n < 2 * order + 1:
            raise MawarpError(f"need at least {2*order+1} samples to fit order {order}")
        spec = np.fft.rfft(values) / n
        a = np.zeros(order + 1)
        b = np.zeros(order + 1)
        upto = min(order, spec.shape[-1] - 1)
        a[0] = spec[0].real
        a[1:upto + 1] = 2.0 * spec[1:upto + 1].real
        b[1:upto + 1] = -2.0 * spec[1:upto + 1].imag
        return cls(a, b)

    def __call__(self, u, deriv: int = 0):
        """Evaluate the series (or its deriv-th derivative) at u."""
        u = np.asarray(u, dtype=float)
        m = np.arange(self.order + 1, dtype=float)
        phase = np.multiply.outer(u, m)
        # d/du rotates (cos, sin) coefficient pairs and scales by m.
        a, b = self.a, self.b
        for _ in range(deriv):
            a, b = m * b, -m * a
        return np.cos(phase) @ a + np.sin(phase) @ b

    def derivative(self) -> "FourierSeries":
        m = np.arange(self.order + 1, dtype=float)
        return FourierSeries(m * self.b, -m * self.a)

    def reversed_parameter(self) -> "FourierSeries":
        """The series u -> f(-u): cosine part kept, sine part negated."""
        return FourierSeries(self.a.copy(), -self.b)

    def shifted(self, delta: float) -> "FourierSeries":
        """The series u -> f(u + delta)."""
        m = np.arange(self.order + 1, dtype=float)
        cd, sd = np.cos(m * delta), np.sin(m * delta)
        return FourierSeries(self.a * cd + self.b * sd,
                            self.b * cd - self.a * sd)

    def coefficients(self):
        return self.a.copy(), self.b.copy()

    def __eq__(self, other):
        if not isinstance(other, FourierSeries):
            return NotImplemented
        n = max(self.order, other.order) + 1
        pad = lambda v: np.pad(v, (0, n - len(v)))
        return (np.array_equal(pad(self.a), pad(other.a))
                and np.array_equal(pad(self.b), pad(other.b)))

    def __repr__(self):
        return f"FourierSeries(order={self.order})"

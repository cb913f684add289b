"""Truncated power series in the strip coordinate v with periodic coefficients.

An ``FTSeries`` stores sum_k c_k(u) v^k, k < K, where each c_k lives on a
uniform periodic u-grid of n points and is band limited to modes <= mmax
(with n >= 4*mmax, see :mod:`mawarp.fourier`).  The class implements the
standard power-series calculus -- products by Cauchy convolution, division,
sqrt/exp/log and the circular/hyperbolic pairs by the usual first-order
recurrences -- so that analytic chart data can be composed with unknown
series during a Taylor march.

Binary operations truncate to the shorter operand (both operands represent
truncated unknowns); scalars and plain u-arrays are exact and never shorten
the result.
"""

from __future__ import annotations

import numpy as np

from .fourier import band_limit, diff_u

_NUMBER = (int, float, np.integer, np.floating)


class FTSeries:
    __slots__ = ("c", "mmax")

    def __init__(self, c: np.ndarray, mmax: int):
        self.c = np.asarray(c, dtype=float)
        if self.c.ndim != 2:
            raise ValueError("coefficient array must be (K, n)")
        self.mmax = int(mmax)

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value, klen: int, n: int, mmax: int) -> "FTSeries":
        """Series whose v-expansion is the constant value (scalar or u-array)."""
        c = np.zeros((klen, n))
        if isinstance(value, _NUMBER):
            c[0] = float(value)
        else:
            c[0] = band_limit(np.asarray(value, dtype=float), mmax)
        return cls(c, mmax)

    @property
    def klen(self) -> int:
        return self.c.shape[0]

    @property
    def n(self) -> int:
        return self.c.shape[1]

    def coefficient(self, k: int) -> np.ndarray:
        return self.c[k]

    def copy(self) -> "FTSeries":
        return FTSeries(self.c.copy(), self.mmax)

    def truncated(self, klen: int) -> "FTSeries":
        if klen >= self.klen:
            return self
        return FTSeries(self.c[:klen], self.mmax)

    def _bl(self, rows: np.ndarray) -> "FTSeries":
        return FTSeries(band_limit(rows, self.mmax), self.mmax)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        if isinstance(other, FTSeries):
            k = min(self.klen, other.klen)
            return FTSeries(self.c[:k] + other.c[:k], self.mmax)
        out = self.c.copy()
        if isinstance(other, _NUMBER):
            out[0] += float(other)
        else:
            out[0] = band_limit(out[0] + np.asarray(other, dtype=float), self.mmax)
        return FTSeries(out, self.mmax)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        if isinstance(other, FTSeries):
            k = min(self.klen, other.klen)
            return FTSeries(self.c[:k] - other.c[:k], self.mmax)
        out = self.c.copy()
        if isinstance(other, _NUMBER):
            out[0] -= float(other)
        else:
            out[0] = band_limit(out[0] - np.asarray(other, dtype=float), self.mmax)
        return FTSeries(out, self.mmax)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return FTSeries(-self.c, self.mmax)

    def __mul__(self, other):
        if isinstance(other, FTSeries):
            k = min(self.klen, other.klen)
            a, b = self.c, other.c
            out = np.empty((k, self.n))
            for j in range(k):
                out[j] = np.einsum("ij,ij->j", a[:j + 1][::-1], b[:j + 1])
            return self._bl(out)
        if isinstance(other, _NUMBER):
            return FTSeries(self.c * float(other), self.mmax)
        return self._bl(self.c * np.asarray(other, dtype=float))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, FTSeries):
            return _divide(self, other)
        if isinstance(other, _NUMBER):
            return FTSeries(self.c / float(other), self.mmax)
        return self._bl(self.c / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        num = FTSeries.constant(other, self.klen, self.n, self.mmax)
        return _divide(num, self)

    def __pow__(self, expo):
        if isinstance(expo, (int, np.integer)):
            return self.powi(int(expo))
        if float(expo) == 0.5:
            return self.sqrt()
        return (self.log() * float(expo)).exp()

    def powi(self, k: int) -> "FTSeries":
        if k < 0:
            return 1.0 / self.powi(-k)
        result = FTSeries.constant(1.0, self.klen, self.n, self.mmax)
        base = self
        while k > 0:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- analytic functions -----------------------------------------------
    # Recurrences band-limit each produced row immediately: later rows feed
    # on earlier ones, and the content bound (<= 2*mmax per product) only
    # holds if inputs stay band limited.

    def sqrt(self) -> "FTSeries":
        k, n = self.klen, self.n
        d = np.empty((k, n))
        d[0] = band_limit(np.sqrt(self.c[0]), self.mmax)
        half = 0.5 / d[0]
        for j in range(1, k):
            acc = self.c[j].copy()
            if j >= 2:
                acc -= np.einsum("ij,ij->j", d[1:j][::-1], d[1:j])
            d[j] = band_limit(acc * half, self.mmax)
        return FTSeries(d, self.mmax)

    def exp(self) -> "FTSeries":
        k, n = self.klen, self.n
        d = np.empty((k, n))
        d[0] = band_limit(np.exp(self.c[0]), self.mmax)
        for j in range(1, k):
            w = np.arange(1, j + 1)[:, None] * self.c[1:j + 1]
            d[j] = band_limit(np.einsum("ij,ij->j", w[::-1], d[:j]) / j, self.mmax)
        return FTSeries(d, self.mmax)

    def log(self) -> "FTSeries":
        k, n = self.klen, self.n
        d = np.empty((k, n))
        d[0] = band_limit(np.log(self.c[0]), self.mmax)
        inv0 = 1.0 / self.c[0]
        for j in range(1, k):
            acc = self.c[j].copy()
            if j >= 2:
                w = np.arange(1, j)[:, None] * d[1:j]
                acc -= np.einsum("ij,ij->j", w, self.c[1:j][::-1]) / j
            d[j] = band_limit(acc * inv0, self.mmax)
        return FTSeries(d, self.mmax)

    def _circular(self, hyperbolic: bool):
        k, n = self.klen, self.n
        s = np.empty((k, n))
        co = np.empty((k, n))
        if hyperbolic:
            s[0] = band_limit(np.sinh(self.c[0]), self.mmax)
            co[0] = band_limit(np.cosh(self.c[0]), self.mmax)
            sign = 1.0
        else:
            s[0] = band_limit(np.sin(self.c[0]), self.mmax)
            co[0] = band_limit(np.cos(self.c[0]), self.mmax)
            sign = -1.0
        for j in range(1, k):
            w = np.arange(1, j + 1)[:, None] * self.c[1:j + 1]
            s[j] = band_limit(np.einsum("ij,ij->j", w[::-1], co[:j]) / j, self.mmax)
            co[j] = band_limit(sign * np.einsum("ij,ij->j", w[::-1], s[:j]) / j, self.mmax)
        return FTSeries(s, self.mmax), FTSeries(co, self.mmax)

    def sin_cos(self):
        return self._circular(hyperbolic=False)

    def sinh_cosh(self):
        return self._circular(hyperbolic=True)

    def sin(self):
        return self.sin_cos()[0]

    def cos(self):
        return self.sin_cos()[1]

    def sinh(self):
        return self.sinh_cosh()[0]

    def cosh(self):
        return self.sinh_cosh()[1]

    # -- calculus ----------------------------------------------------------

    def du(self) -> "FTSeries":
        return FTSeries(diff_u(self.c), self.mmax)

    def dv(self) -> "FTSeries":
        if self.klen == 1:
            return FTSeries(np.zeros((1, self.n)), self.mmax)
        k = np.arange(1, self.klen)[:, None]
        return FTSeries(k * self.c[1:], self.mmax)

    def __repr__(self):
        return f"FTSeries(K={self.klen}, n={self.n}, mmax={self.mmax})"


def _divide(num: FTSeries, den: FTSeries) -> FTSeries:
    k = min(num.klen, den.klen)
    n = num.n
    d = np.empty((k, n))
    inv0 = 1.0 / den.c[0]
    d[0] = band_limit(num.c[0] * inv0, num.mmax)
    for j in range(1, k):
        acc = num.c[j] - np.einsum("ij,ij->j", den.c[1:j + 1][::-1], d[:j])
        d[j] = band_limit(acc * inv0, num.mmax)
    return FTSeries(d, num.mmax)

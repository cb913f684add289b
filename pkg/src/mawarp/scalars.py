"""Elementary functions that work on floats, numpy arrays and FTSeries.

The coefficient algebra, the curvature-expression evaluator and the Taylor
march all run through these entry points, so the exact same formulas serve
both pointwise evaluation and power-series composition.
"""

from __future__ import annotations

import numpy as np

from .ftseries import FTSeries


def sqrt(x):
    return x.sqrt() if isinstance(x, FTSeries) else np.sqrt(x)


def exp(x):
    return x.exp() if isinstance(x, FTSeries) else np.exp(x)


def log(x):
    return x.log() if isinstance(x, FTSeries) else np.log(x)


def sin(x):
    return x.sin() if isinstance(x, FTSeries) else np.sin(x)


def cos(x):
    return x.cos() if isinstance(x, FTSeries) else np.cos(x)


def sinh(x):
    return x.sinh() if isinstance(x, FTSeries) else np.sinh(x)


def cosh(x):
    return x.cosh() if isinstance(x, FTSeries) else np.cosh(x)


def sin_cos(x):
    if isinstance(x, FTSeries):
        return x.sin_cos()
    return np.sin(x), np.cos(x)


def sinh_cosh(x):
    if isinstance(x, FTSeries):
        return x.sinh_cosh()
    return np.sinh(x), np.cosh(x)


def powi(x, k: int):
    if isinstance(x, FTSeries):
        return x.powi(k)
    return x ** k


FUNCTIONS = {
    "sqrt": sqrt,
    "exp": exp,
    "log": log,
    "sin": sin,
    "cos": cos,
    "sinh": sinh,
    "cosh": cosh,
}

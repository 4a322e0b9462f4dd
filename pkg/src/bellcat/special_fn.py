"""Stable special-function primitives: log-factorials and associated Laguerre polynomials.

Every series evaluator in this package assembles its factorial-heavy
coefficients in log space and exponentiates once per term; the log-factorial
table here is therefore the single source of those logs.  The table is built
by double-double accumulation of ln(k) so that entries are correctly rounded
and adjacent differences stay consistent with ln(n+1) to ~1e-12 even at
n ~ 10^3.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "log_factorial",
    "log_factorial_table",
    "laguerre_assoc",
    "laguerre_assoc_table",
    "laguerre_envelope_table",
]


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


_table = np.zeros(1)
_hi = 0.0
_lo = 0.0


def _grow_table(nmax: int) -> None:
    global _table, _hi, _lo
    old = _table.size - 1
    if nmax <= old:
        return
    grown = np.empty(nmax + 1)
    grown[: old + 1] = _table
    hi, lo = _hi, _lo
    for n in range(old + 1, nmax + 1):
        s, e = _two_sum(hi, math.log(n))
        lo += e
        hi, lo = _two_sum(s, lo)
        grown[n] = hi + lo
    _table, _hi, _lo = grown, hi, lo


def log_factorial(n: int) -> float:
    """ln(n!) for integer n >= 0."""
    if n < 0 or n != int(n):
        raise ValueError(f"log_factorial requires a nonnegative integer, got {n!r}")
    n = int(n)
    if n >= _table.size:
        _grow_table(max(n, 2 * _table.size))
    return float(_table[n])


def log_factorial_table(nmax: int) -> np.ndarray:
    """Read-only vector [ln(0!), ..., ln(nmax!)] for vectorized coefficient assembly."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if nmax >= _table.size:
        _grow_table(max(nmax, 2 * _table.size))
    view = _table[: nmax + 1]
    view.flags.writeable = False
    return view


def laguerre_assoc_table(max_degree: int, order: int, x) -> np.ndarray:
    """Associated Laguerre values L^order_N(x) for all degrees N = 0..max_degree.

    Upward three-term recurrence in the degree at fixed order; forward-stable
    for the x >= 0 arguments used by the Wigner series.  `x` may be a scalar or
    an array; the result has shape (max_degree+1,) + x.shape.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    if order < 0:
        raise ValueError("order must be >= 0")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("Laguerre argument must be finite")
    out = np.empty((max_degree + 1,) + x.shape)
    out[0] = 1.0
    if max_degree == 0:
        return out
    out[1] = 1.0 + order - x
    for n in range(1, max_degree):
        out[n + 1] = ((2 * n + order + 1 - x) * out[n] - (n + order) * out[n - 1]) / (n + 1)
    return out


def laguerre_envelope_table(max_degree: int, max_order: int, x: np.ndarray) -> np.ndarray:
    """Envelope-scaled table L^m_N(x) e^{-x/2} over all orders and degrees at once.

    Shape (max_order+1, max_degree+1, npts).  Scaling by the Gaussian envelope
    keeps every entry polynomially bounded, so thermal series can run to
    degrees of several hundred at x of several hundred without overflow; the
    recurrence is linear, hence unchanged by the common scale.
    """
    if max_degree < 0 or max_order < 0:
        raise ValueError("degrees and orders must be >= 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise ValueError("Laguerre argument must be finite and >= 0")
    env = np.exp(-0.5 * x)
    orders = np.arange(max_order + 1, dtype=float)[:, None]
    out = np.empty((max_order + 1, max_degree + 1, x.size))
    out[:, 0, :] = env[None, :]
    if max_degree == 0:
        return out
    out[:, 1, :] = (1.0 + orders - x[None, :]) * env[None, :]
    for n in range(1, max_degree):
        out[:, n + 1, :] = ((2 * n + 1 + orders - x[None, :]) * out[:, n, :]
                            - (n + orders) * out[:, n - 1, :]) / (n + 1)
    return out


def laguerre_assoc(n: int, m: int, x: float) -> float:
    """L^m_n(x) by the upward degree recurrence; exact for n in {0, 1}."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    if m < 0:
        raise ValueError("order must be >= 0")
    if not math.isfinite(x):
        raise ValueError("Laguerre argument must be finite")
    if n == 0:
        return 1.0
    if n == 1:
        return 1.0 + m - x
    return float(laguerre_assoc_table(n, m, x)[n])

"""Truncated formal power series in one variable.

A series is stored as its coefficient vector ``c_0 .. c_S``; every operation
works modulo ``u^(S+1)``.  Operands of binary operations must share the same
truncation order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeriesError


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.size == 0:
            raise SeriesError("a series needs at least the constant coefficient")
        if not np.all(np.isfinite(c)):
            raise SeriesError("series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __add__(self, other):
        _check_orders(self, other)
        return TruncatedSeries(self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_orders(self, other)
        return TruncatedSeries(self.coeffs - other.coeffs)

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def scale(self, t: float) -> "TruncatedSeries":
        """Multiply every coefficient by ``t``."""
        return TruncatedSeries(t * self.coeffs)

    def rescale_argument(self, eta: float) -> "TruncatedSeries":
        """Return the series of ``a(eta * u)``."""
        return TruncatedSeries(self.coeffs * eta ** np.arange(self.coeffs.size))

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def derivative(self) -> "TruncatedSeries":
        """Termwise derivative; the result has order ``S - 1`` (order 0 for constants)."""
        if self.order == 0:
            return TruncatedSeries([0.0])
        k = np.arange(1, self.coeffs.size)
        return TruncatedSeries(k * self.coeffs[1:])

    def __call__(self, u):
        """Evaluate the truncated polynomial at ``u`` (Horner)."""
        u = np.asarray(u, dtype=float)
        acc = np.zeros_like(u)
        for c in self.coeffs[::-1]:
            acc = acc * u + c
        return acc if acc.ndim else float(acc)


def identity(order: int) -> TruncatedSeries:
    """The constant series 1."""
    c = np.zeros(order + 1)
    c[0] = 1.0
    return TruncatedSeries(c)


def zero(order: int) -> TruncatedSeries:
    return TruncatedSeries(np.zeros(order + 1))


def monomial(order: int, k: int = 1, coeff: float = 1.0) -> TruncatedSeries:
    c = np.zeros(order + 1)
    if k <= order:
        c[k] = coeff
    return TruncatedSeries(c)


def exp_series(order: int, scale: float = 1.0) -> TruncatedSeries:
    """Coefficients of ``exp(scale * u)``."""
    c = np.empty(order + 1)
    c[0] = 1.0
    for k in range(1, order + 1):
        c[k] = c[k - 1] * scale / k
    return TruncatedSeries(c)


def _check_orders(a: TruncatedSeries, b: TruncatedSeries):
    if a.order != b.order:
        raise SeriesError(f"order mismatch: {a.order} vs {b.order}")


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    _check_orders(a, b)
    n = a.coeffs.size
    return TruncatedSeries(np.convolve(a.coeffs, b.coeffs)[:n])


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``q`` with ``q * b == a`` to the common order."""
    _check_orders(a, b)
    b0 = b.coeffs[0]
    if b0 == 0.0:
        raise SeriesError("divisor has zero constant coefficient")
    ac, bc = a.coeffs, b.coeffs
    q = np.zeros(ac.size)
    for k in range(ac.size):
        # q_k = (a_k - sum_{j=1..k} b_j q_{k-j}) / b_0
        s = np.dot(bc[1 : k + 1], q[k - 1 :: -1][:k]) if k else 0.0
        q[k] = (ac[k] - s) / b0
    return TruncatedSeries(q)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """Logarithm of a series with unit constant term; the result has F_0 = 0."""
    c = a.coeffs
    if c[0] != 1.0:
        raise SeriesError(f"log needs constant coefficient 1, got {c[0]!r}")
    f = np.zeros(c.size)
    for n in range(1, c.size):
        # n F_n = n c_n - sum_{k=1}^{n-1} k F_k c_{n-k}
        k = np.arange(1, n)
        s = np.dot(k * f[1:n], c[n - 1 : 0 : -1]) if n > 1 else 0.0
        f[n] = c[n] - s / n
    return TruncatedSeries(f)


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """Exponential via the recurrence ``n b_n = sum_k k a_k b_{n-k}``."""
    c = a.coeffs
    if c[0] != 0.0:
        raise SeriesError(f"exp needs zero constant coefficient, got {c[0]!r}")
    b = np.zeros(c.size)
    b[0] = 1.0
    ka = np.arange(c.size) * c
    for n in range(1, c.size):
        b[n] = np.dot(ka[1 : n + 1], b[n - 1 :: -1][:n]) / n
    return TruncatedSeries(b)


def series_pow(a: TruncatedSeries, t: float) -> TruncatedSeries:
    """Real power ``a**t`` of a series with unit constant term."""
    return series_exp(series_log(a).scale(t))


def coeffs_close(a, b, rtol=1e-12, small=1e-8) -> bool:
    """Coefficientwise comparison: relative above ``small``, absolute below it."""
    a = np.asarray(getattr(a, "coeffs", a), dtype=float)
    b = np.asarray(getattr(b, "coeffs", b), dtype=float)
    if a.shape != b.shape:
        return False
    return bool(np.all(np.abs(a - b) <= rtol * _tol_scale(a, b, small)))


def max_coeff_deviation(a, b, small=1e-8) -> float:
    """Largest deviation in the metric used by :func:`coeffs_close`."""
    a = np.asarray(getattr(a, "coeffs", a), dtype=float)
    b = np.asarray(getattr(b, "coeffs", b), dtype=float)
    return float(np.max(np.abs(a - b) / _tol_scale(a, b, small)))


def _tol_scale(a, b, small):
    mag = np.maximum(np.abs(a), np.abs(b))
    return np.where(mag > small, mag, 1.0)

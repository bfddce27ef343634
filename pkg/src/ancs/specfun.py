"""Special-function kernels: Bessel J and I, Lambert W, log-binomials, quadrature."""
from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, IntegrationWarning

_RESCALE = 1e250
_INV_E = math.exp(-1.0)
_LOG_MAX = math.log(np.finfo(float).max)


# --------------------------------------------------------------------------
# Bessel J, integer order


def miller_start(n_max: int, z: float) -> int:
    """Starting order for the downward recurrence (always even).

    The ``8 z^(1/3)`` buffer spans the Airy transition region past ``m = z``;
    a ``2 z^(1/3)`` buffer leaves errors near 1e-6 at ``z ~ 600``.
    """
    m = n_max + math.ceil(z) + 15 + math.ceil(8.0 * z ** (1.0 / 3.0))
    return m + (m & 1)


def bessel_j_batch(n_max: int, z: float) -> np.ndarray:
    """J_0(z) .. J_{n_max}(z) for real ``z >= 0``.

    Miller's downward recurrence ``J_{k-1} = (2k/z) J_k - J_{k+1}`` started
    from ``J_{m+1} = 0, J_m = tiny`` and normalized with
    ``J_0 + 2 * sum_k J_{2k} = 1``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    z = float(z)
    if not math.isfinite(z) or z < 0:
        raise DomainError(f"bessel_j_batch needs finite z >= 0, got {z!r}")
    out = np.zeros(n_max + 1)
    if z == 0.0:
        out[0] = 1.0
        return out
    m = miller_start(n_max, z)
    two_over_z = 2.0 / z
    j_next, j_cur = 0.0, 1e-300
    norm = 0.0
    for k in range(m, 0, -1):
        if k <= n_max:
            out[k] = j_cur
        if not k & 1:
            norm += j_cur
        j_prev = k * two_over_z * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > _RESCALE:
            j_cur /= _RESCALE
            j_next /= _RESCALE
            norm /= _RESCALE
            out /= _RESCALE
    out[0] = j_cur
    norm = 2.0 * norm + j_cur
    return out / norm


def bessel_j_array(n_max: int, z) -> np.ndarray:
    """Vectorized :func:`bessel_j_batch`; returns shape ``(n_max + 1, len(z))``."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z < 0) or not np.all(np.isfinite(z)):
        raise DomainError("bessel_j_array needs finite z >= 0")
    out = np.zeros((n_max + 1, z.size))
    zero = z == 0.0
    out[0, zero] = 1.0
    if np.all(zero):
        return out
    zz = np.where(zero, 1.0, z)
    m = miller_start(n_max, float(zz.max()))
    two_over_z = 2.0 / zz
    j_next = np.zeros(z.size)
    j_cur = np.full(z.size, 1e-300)
    norm = np.zeros(z.size)
    for k in range(m, 0, -1):
        if k <= n_max:
            out[k] = j_cur
        if not k & 1:
            norm += j_cur
        j_prev = k * two_over_z * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > _RESCALE
        if big.any():
            f = np.where(big, 1.0 / _RESCALE, 1.0)
            j_cur = j_cur * f
            j_next = j_next * f
            norm *= f
            out *= f
    out[0] = j_cur
    norm = 2.0 * norm + j_cur
    out /= norm
    out[:, zero] = 0.0
    out[0, zero] = 1.0
    return out


# --------------------------------------------------------------------------
# Modified Bessel I, real order


def log_bessel_i(nu: float, z: float) -> float:
    """ln I_nu(z) from the ascending series, summed in the log domain."""
    if nu < 0 or z < 0 or not math.isfinite(z):
        raise DomainError(f"log_bessel_i needs nu >= 0 and finite z >= 0, got ({nu}, {z})")
    if z == 0.0:
        return 0.0 if nu == 0 else -math.inf
    lhalf = math.log(0.5 * z)
    lq = 2.0 * lhalf

    def log_term(k):
        return (nu + 2 * k) * lhalf - math.lgamma(k + 1) - math.lgamma(nu + k + 1)

    # largest term sits near k* where (z/2)^2 = k (k + nu)
    k_peak = max(0, int(0.5 * (-nu + math.sqrt(nu * nu + z * z))))
    lmax = log_term(k_peak)
    total = 1.0
    # term logs are tracked relative to the peak so increments stay exact
    rel = 0.0
    k = k_peak
    while True:
        k += 1
        rel += lq - math.log(k) - math.log(nu + k)
        t = math.exp(rel)
        total += t
        if t < 1e-17 * total:
            break
    rel = 0.0
    k = k_peak
    while k > 0:
        rel -= lq - math.log(k) - math.log(nu + k)
        k -= 1
        t = math.exp(rel)
        total += t
        if t < 1e-17 * total:
            break
    return lmax + math.log(total)


def bessel_i(nu: float, z: float) -> float:
    """Modified Bessel function I_nu(z) for ``nu >= 0``, ``z >= 0``.

    Raises OverflowError when the value is not representable as a double.
    """
    lv = log_bessel_i(nu, z)
    if lv > _LOG_MAX:
        raise OverflowError(f"I_{nu}({z}) exceeds double range (ln I = {lv:.6g})")
    return math.exp(lv)


# --------------------------------------------------------------------------
# Lambert W, principal branch on [-1/e, 0]


def lambert_w0(x: float) -> float:
    """Principal branch W(x) for ``x`` in ``[-1/e, 0]`` (Halley iteration)."""
    x = float(x)
    if not (-_INV_E <= x <= 0.0):
        raise DomainError(f"lambert_w0 is defined here on [-1/e, 0], got {x!r}")
    if x == 0.0:
        return 0.0
    if x == -_INV_E:
        return -1.0
    p2 = 2.0 * (math.e * x + 1.0)
    if p2 < 1e-3:
        # branch-point expansion; Halley stalls where w e^w is flat
        p = math.sqrt(max(p2, 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    else:
        w = x
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        step = f / denom
        w_new = min(max(w - step, -1.0), 0.0)
        if abs(w_new - w) <= 1e-16 * max(1.0, abs(w)):
            w = w_new
            break
        w = w_new
    return w


# --------------------------------------------------------------------------
# binomials and generalized factorials


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma."""
    if not (0 <= k <= n):
        raise DomainError(f"log_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 0.0
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_binomial_array(n, k) -> np.ndarray:
    """Elementwise ln C(n, k) for real ``n`` (generalized binomial); -inf outside 0<=k<=n."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    with np.errstate(invalid="ignore"):
        out = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return np.where((k >= 0) & (k <= n), out, -np.inf)


def log_generalized_factorials(x) -> np.ndarray:
    """ln x_n! = sum_{k<=n} ln x_k with x_0! = 1; ``x[0]`` is ignored."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.size)
    if x.size > 1:
        out[1:] = np.cumsum(np.log(x[1:]))
    return out


# --------------------------------------------------------------------------
# adaptive quadrature

# Gauss-Kronrod 7/15 on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
_WG_FULL = np.zeros(15)
_WG_FULL[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool = True


def _gk15(g, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    fx = np.asarray(g(mid + half * _NODES), dtype=float)
    k = half * np.dot(_WK, fx)
    gs = half * np.dot(_WG_FULL, fx)
    return k, abs(k - gs)


def _adaptive(g, lo, hi, rtol, atol, max_subdivisions):
    v, e = _gk15(g, lo, hi)
    heap = [(-e, lo, hi, v)]
    total, err, n_eval = v, e, 15
    while err > max(atol, rtol * abs(total)):
        if len(heap) >= max_subdivisions:
            return total, err, n_eval, False
        e_neg, a, b, v = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not (a < m < b):
            heapq.heappush(heap, (e_neg, a, b, v))
            return total, err, n_eval, False
        v1, e1 = _gk15(g, a, m)
        v2, e2 = _gk15(g, m, b)
        n_eval += 30
        total += v1 + v2 - v
        err += e1 + e2 + e_neg
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
    # re-sum to shed the drift of incremental updates
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return total, err, n_eval, True


def _richardson_tail(f, a, period, rtol, atol, max_subdivisions, levels=6, k0=8):
    """Sum of ``f`` over [a, inf) for an algebraically decaying oscillatory tail.

    Partial integrals up to ``T = a + K * period`` behave like
    ``S + c1/T + c2/T^2 + ...``; they are extrapolated to ``1/T = 0`` by Neville's
    scheme over ``K = k0 * 2^j``.  For ``a <= 0`` the variable is ``1/K``.
    """
    panel_cache = []
    n_eval = 0
    ok = True

    def panels_up_to(k):
        nonlocal n_eval, ok
        while len(panel_cache) < k:
            i = len(panel_cache)
            v, e, ne, conv = _adaptive(f, a + i * period, a + (i + 1) * period,
                                       rtol * 1e-2, atol * 1e-2, max_subdivisions)
            n_eval += ne
            ok = ok and conv
            panel_cache.append(v)
        return math.fsum(panel_cache[:k])

    xs, table = [], []
    for j in range(levels):
        k = k0 * 2 ** j
        xs.append(1.0 / (a + k * period) if a > 0 else 1.0 / k)
        row = [panels_up_to(k)]
        for i in range(1, j + 1):
            # Neville: polynomial through (x_{j-i}..x_j) evaluated at x = 0
            lo, hi = xs[j - i], xs[j]
            row.append((hi * table[j - 1][i - 1] - lo * row[i - 1]) / (hi - lo))
        table.append(row)
    best = table[-1][-1]
    err = abs(best - table[-2][-1])
    return best, err, n_eval, ok


def integrate(f, a: float, b: float = math.inf, *, rtol: float = 1e-8, atol: float = 0.0,
              max_subdivisions: int = 4000, tail_period: float | None = None) -> QuadratureResult:
    """Adaptive Gauss-Kronrod quadrature of a vectorized ``f`` over ``[a, b]``.

    ``b = inf`` is handled through ``u = a + t / (1 - t)`` on ``t in [0, 1)``.
    If ``tail_period`` is given, the range ``[a, inf)`` is instead cut into panels
    of that length whose partial sums are Richardson-extrapolated; use it for
    integrands like ``J_n(2t)^2 / t`` whose tails oscillate and decay slowly.

    Non-convergence emits an :class:`IntegrationWarning` and returns the best
    estimate with ``converged=False``.
    """
    a = float(a)
    if math.isinf(b) and tail_period is not None:
        v, e, n, ok = _richardson_tail(f, a, float(tail_period), rtol, atol, max_subdivisions)
        ok = ok and e <= max(atol, 10 * rtol * abs(v))
    elif math.isinf(b):
        def g(t):
            s = 1.0 - t
            return np.asarray(f(a + t / s), dtype=float) / (s * s)
        v, e, n, ok = _adaptive(g, 0.0, 1.0, rtol, atol, max_subdivisions)
    else:
        v, e, n, ok = _adaptive(f, a, float(b), rtol, atol, max_subdivisions)
    if not ok:
        warnings.warn(f"integrate: tolerance not reached (estimate {v!r}, error {e:.3g})",
                      IntegrationWarning, stacklevel=2)
    return QuadratureResult(float(v), float(e), int(n), bool(ok))

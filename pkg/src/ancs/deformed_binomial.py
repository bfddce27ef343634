"""Deformed binomial distributions built from a sequence ``x_n``.

Given ``x_0 = 0 < x_1, x_2, ...`` and ``N(u) = sum u^n / x_n!`` the asymmetric
deformation is

    p_k^(n)(eta) = x_n! / (x_{n-k}! x_k!) eta^k p_{n-k}(eta),
    N(u) / N(eta u) = sum_s p_s(eta) u^s / x_s!,

and the symmetric one

    p_k^(n)(eta) = x_n! / (x_{n-k}! x_k!) q_k(eta) q_{n-k}(1 - eta),
    N(u)^eta = sum_n q_n(eta) u^n / x_n!.

Polynomials are generated at a fixed numeric ``eta``.  To keep coefficients in
floating range the series are built in a rescaled variable ``u = lam * v``.

Division and logarithm recurrences cancel badly once ``p_s(eta)`` is far below
``1/x_s!``.  Sequences whose ``F = ln N`` is known in closed form (all Sigma_+
examples here) instead use ``exp(F(u) - F(eta u))`` and ``exp(eta F(u))``, whose
exponents have nonnegative coefficients, so the exponential recurrence sums
positive terms only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from . import power_series as ps
from .an_core import AnFamily, invert_nbar, moments
from .errors import DomainError, TruncationError
from .specfun import log_generalized_factorials

_POS_TOL = -1e-10


@dataclass(frozen=True)
class DeformedSequence:
    """The sequence ``x_0 .. x_{n_max}`` together with ``ln x_n!``.

    ``log_f`` optionally maps ``k`` to ``ln F_k`` for the Taylor coefficients of
    ``F = ln N`` (``-inf`` for vanishing ones); it is only set when every
    ``F_k`` is known to be nonnegative.
    """

    x: np.ndarray
    log_xfact: np.ndarray
    log_f: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        lf = np.array(self.log_xfact, dtype=float)
        if x.size < 1 or x[0] != 0.0:
            raise ValueError("a deformed sequence starts with x_0 = 0")
        if np.any(x[1:] <= 0) or not np.all(np.isfinite(x)):
            raise ValueError("x_n must be finite and positive for n >= 1")
        if lf.shape != x.shape or lf[0] != 0.0:
            raise ValueError("log_xfact must match x and start at 0")
        x.setflags(write=False)
        lf.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "log_xfact", lf)

    @property
    def n_max(self) -> int:
        return self.x.size - 1

    @property
    def strictly_increasing(self) -> bool:
        return bool(np.all(np.diff(self.x) > 0))

    @classmethod
    def from_x(cls, x, log_f=None) -> "DeformedSequence":
        x = np.asarray(x, dtype=float)
        return cls(x, log_generalized_factorials(x), log_f)

    @classmethod
    def from_log_xfact(cls, log_xfact, log_f=None) -> "DeformedSequence":
        lf = np.asarray(log_xfact, dtype=float)
        x = np.concatenate([[0.0], np.exp(np.diff(lf))])
        return cls(x, lf, log_f)

    @classmethod
    def gs(cls, n_max: int) -> "DeformedSequence":
        return cls.from_x(np.arange(n_max + 1, dtype=float), _log_f_poly([1.0]))

    @classmethod
    def negative_binomial(cls, m: float, a: float, n_max: int) -> "DeformedSequence":
        """Sequence of ``N(u) = (1 - a u)^(-m)``: ``x_k = k / (a (m - 1 + k))``."""
        if not (m > 0 and a > 0):
            raise ValueError("negative binomial sequence needs m > 0 and a > 0")
        k = np.arange(n_max + 1, dtype=float)
        lf = gammaln(k + 1.0) + gammaln(m) - gammaln(m + k) - k * math.log(a)

        def log_f(k):
            # F = -m ln(1 - a u) = sum m a^k u^k / k
            k = np.asarray(k, dtype=float)
            with np.errstate(divide="ignore"):
                return np.where(k > 0, math.log(m) + k * math.log(a) - np.log(k), -np.inf)

        return cls.from_log_xfact(lf, log_f)

    @classmethod
    def hermite(cls, a: float, n_max: int) -> "DeformedSequence":
        from .families import make_family
        lf = make_family("hermite", a=a).log_xfact(np.arange(n_max + 1))
        return cls.from_log_xfact(lf, _log_f_poly([1.0, 0.5 * a]))

    @classmethod
    def abel(cls, beta: float, n_max: int) -> "DeformedSequence":
        from .families import abel_log_xfactorials

        def log_f(k):
            # F = -beta W(-u/beta) = sum k^(k-1) / (k! beta^(k-1)) u^k
            k = np.asarray(k, dtype=float)
            kk = np.maximum(k, 1.0)
            return np.where(k > 0, (kk - 1.0) * (np.log(kk) - math.log(beta)) - gammaln(kk + 1.0),
                            -np.inf)

        return cls.from_log_xfact(abel_log_xfactorials(beta, np.arange(n_max + 1)), log_f)

    @classmethod
    def from_family(cls, fam: AnFamily, n_max: int) -> "DeformedSequence":
        if fam.log_xfact is None:
            raise DomainError(f"{fam.label()} is not a nonlinear coherent-state family")
        if fam.name == "gs":
            return cls.gs(n_max)
        if fam.name == "perelomov":
            return cls.negative_binomial(2.0 * fam.params["kappa"], 1.0, n_max)
        if fam.name == "hermite":
            return cls.hermite(fam.params["a"], n_max)
        if fam.name == "abel":
            return cls.abel(fam.params["beta"], n_max)
        return cls.from_log_xfact(fam.log_xfact(np.arange(n_max + 1)))

    def f_series(self, order: int, lam: float = 1.0) -> ps.TruncatedSeries | None:
        """Coefficients of ``F(lam v) = ln N(lam v)`` when ``F`` is known."""
        if self.log_f is None:
            return None
        k = np.arange(order + 1)
        return ps.TruncatedSeries(np.exp(self.log_f(k) + k * math.log(lam)))

    def norm_series(self, order: int | None = None, lam: float = 1.0) -> ps.TruncatedSeries:
        """Coefficients of ``N(lam v)`` in ``v``, i.e. ``lam^n / x_n!``."""
        order = self.n_max if order is None else order
        if order > self.n_max:
            raise ValueError(f"sequence known to n={self.n_max}, order {order} requested")
        n = np.arange(order + 1)
        return ps.TruncatedSeries(np.exp(n * math.log(lam) - self.log_xfact[: order + 1]))


def _log_f_poly(coeffs):
    """``log_f`` for a polynomial ``F = c_1 u + c_2 u^2 + ...``."""
    logs = np.log(np.asarray(coeffs, dtype=float))

    def log_f(k):
        k = np.asarray(k)
        out = np.full(k.shape, -np.inf)
        inside = (k >= 1) & (k <= logs.size)
        out[inside] = logs[k[inside] - 1]
        return out

    return log_f


@dataclass(frozen=True)
class DeformedBinomialDist:
    n: int
    eta: float
    probs: np.ndarray
    flavor: str
    string_probs: np.ndarray | None = None

    def total(self) -> float:
        return math.fsum(self.probs)

    def mean(self) -> float:
        return float(np.dot(np.arange(self.n + 1), self.probs))

    def variance(self) -> float:
        k = np.arange(self.n + 1)
        m = self.mean()
        return float(np.dot((k - m) ** 2, self.probs))


def _scale_for(seq: DeformedSequence, order: int) -> float:
    # lam ~ x_S puts the peak of lam^s / x_s! near s = S
    return 1.0 if order == 0 else float(seq.x[order])


def _check_norm(seq, N, order):
    if N is None:
        return
    if N.coeffs[0] != 1.0:
        raise ValueError("N must have unit constant coefficient")
    if N.order < order:
        raise ValueError(f"N known to order {N.order}, {order} requested")
    ref = np.exp(-seq.log_xfact[: order + 1])
    if not ps.coeffs_close(N.coeffs[: order + 1], ref, rtol=1e-9, small=1e-300):
        raise ValueError("N is inconsistent with the sequence (N_n != 1/x_n!)")


def asym_polynomials(seq: DeformedSequence, N: ps.TruncatedSeries | None, eta: float,
                     S: int) -> np.ndarray:
    """``p_0(eta) .. p_S(eta)`` from ``x_s! [u^s] N(u)/N(eta u)``.

    ``N`` may be ``None``, in which case it is taken from ``seq``.
    """
    _check_eta(eta)
    _check_norm(seq, N, S)
    lam = _scale_for(seq, S)
    f = seq.f_series(S, lam)
    if f is not None:
        g = ps.series_exp(f - f.rescale_argument(eta))
    else:
        top = seq.norm_series(S, lam)
        g = ps.series_div(top, top.rescale_argument(eta))
    return _unscale(g.coeffs, seq, lam)


def sym_polynomials(seq: DeformedSequence, N: ps.TruncatedSeries | None, eta: float,
                    S: int) -> np.ndarray:
    """``q_0(eta) .. q_S(eta)`` from ``x_n! [u^n] N(u)^eta``."""
    _check_eta(eta)
    _check_norm(seq, N, S)
    lam = _scale_for(seq, S)
    f = seq.f_series(S, lam)
    if f is not None:
        g = ps.series_exp(f.scale(eta))
    else:
        g = ps.series_pow(seq.norm_series(S, lam), eta)
    return _unscale(g.coeffs, seq, lam)


def _unscale(c, seq, lam):
    n = np.arange(c.size)
    return c * np.exp(seq.log_xfact[: c.size] - n * math.log(lam))


def _check_eta(eta):
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta!r}")


def _log_weights(seq, n):
    k = np.arange(n + 1)
    lf = seq.log_xfact
    return lf[n] - lf[n - k] - lf[k]


def asym_distribution(seq: DeformedSequence, polys, n: int, eta: float) -> DeformedBinomialDist:
    """Asymmetric deformed binomial law for ``n`` trials.

    ``string_probs[k]`` is the probability of one given string with ``k`` wins,
    ``y_n!/(y_{n-k}! y_k!) eta^k p_{n-k}`` with ``y_n = x_n / n`` and ``y_0! = 1``.
    """
    polys = np.asarray(polys, dtype=float)
    if polys.size < n + 1:
        raise ValueError(f"need polynomials to order {n}, got {polys.size - 1}")
    k = np.arange(n + 1)
    eta_k = np.power(eta, k)
    probs = np.exp(_log_weights(seq, n)) * eta_k * polys[n - k]
    lyf = seq.log_xfact[: n + 1] - gammaln(np.arange(n + 1) + 1.0)
    strings = np.exp(lyf[n] - lyf[n - k] - lyf[k]) * eta_k * polys[n - k]
    return DeformedBinomialDist(n, float(eta), probs, "asymmetric", strings)


def sym_distribution(seq: DeformedSequence, q_eta, q_comp, n: int, eta: float) -> DeformedBinomialDist:
    """Symmetric law from ``q_k(eta)`` and ``q_k(1 - eta)``."""
    q_eta = np.asarray(q_eta, dtype=float)
    q_comp = np.asarray(q_comp, dtype=float)
    if min(q_eta.size, q_comp.size) < n + 1:
        raise ValueError(f"need polynomials to order {n}")
    k = np.arange(n + 1)
    probs = np.exp(_log_weights(seq, n)) * q_eta[k] * q_comp[n - k]
    return DeformedBinomialDist(n, float(eta), probs, "symmetric")


def asym_law(seq: DeformedSequence, n: int, eta: float) -> DeformedBinomialDist:
    """Convenience wrapper: polynomials and asymmetric law in one call."""
    return asym_distribution(seq, asym_polynomials(seq, None, eta, n), n, eta)


def sym_law(seq: DeformedSequence, n: int, eta: float) -> DeformedBinomialDist:
    q1 = sym_polynomials(seq, None, eta, n)
    q2 = sym_polynomials(seq, None, 1.0 - eta, n)
    return sym_distribution(seq, q1, q2, n, eta)


def hypergeometric_p(m: float, k: int, eta: float) -> float:
    """Terminating ``2F1(-m, -k; 1 - k - m; eta)``, the ``p_k`` of ``(1 - a u)^(-m)``."""
    total, term = 1.0, 1.0
    for j in range(k):
        term *= (-m + j) * (-k + j) / ((1.0 - k - m + j) * (j + 1)) * eta
        if term == 0.0:
            break
        total += term
    return total


def abel_q(beta: float, n: int, eta: float) -> float:
    """``q_n(eta) = eta (eta + n/beta)^(n-1) / (1 + n/beta)^(n-1)`` (``q_0 = 1``)."""
    if n == 0:
        return 1.0
    r = n / beta
    return eta * ((eta + r) / (1.0 + r)) ** (n - 1)


def abel_sym_pmf(beta: float, n: int, eta: float) -> np.ndarray:
    """Closed form of the symmetric Abel law."""
    out = np.empty(n + 1)
    for k in range(n + 1):
        c = math.comb(n, k)
        if k == 0:
            out[k] = abel_q(beta, n, 1.0 - eta)
        elif k == n:
            out[k] = abel_q(beta, n, eta)
        else:
            out[k] = (c * eta * (1.0 - eta) * (eta + k / beta) ** (k - 1)
                      * (1.0 - eta + (n - k) / beta) ** (n - k - 1) / (1.0 + n / beta) ** (n - 1))
    return out


@dataclass(frozen=True)
class CstReport:
    in_sigma_plus: bool
    min_poly_value: float
    f_coeffs: np.ndarray
    poly_check_passed: bool


def cst_check(N: ps.TruncatedSeries, S: int, eta_grid) -> CstReport:
    """Classify ``N`` by the signs of ``F = ln N`` and cross-check ``p_s(eta) >= 0``.

    ``N`` is in Sigma_+ when ``F_1 > 0`` and ``F_n >= 0`` (to ``-1e-14``) for
    ``2 <= n <= S``.  Where ``N_s > 0`` the polynomial ``p_s`` is evaluated on
    ``eta_grid``; ``min_poly_value`` is the smallest value seen.
    """
    if N.coeffs[0] != 1.0:
        raise ValueError("N must have unit constant coefficient")
    N = N.truncate(S)
    f = ps.series_log(N).coeffs
    in_plus = bool(f.size > 1 and f[1] > 0 and np.all(f[2:] >= -1e-14)
                   and np.all(N.coeffs[1:] > 0))
    pos = N.coeffs > 0
    lxf = np.where(pos, -np.log(np.where(pos, N.coeffs, 1.0)), 0.0)
    low = math.inf
    for eta in eta_grid:
        g = ps.series_div(N, N.rescale_argument(eta)).coeffs
        vals = (g * np.exp(lxf))[pos]
        low = min(low, float(vals.min()))
    return CstReport(in_plus, low, f, low >= _POS_TOL)


# --------------------------------------------------------------------------
# NL-CS consequences


def _require_nl(fam: AnFamily):
    if fam.log_xfact is None:
        raise DomainError(f"{fam.label()} is not a nonlinear coherent-state family")


def deformed_bernoulli_rhs(fam: AnFamily, u: float, eta: float, n: int) -> float:
    """``(eta u)^n / (N(eta u) x_n!)``."""
    _require_nl(fam)
    v = eta * u
    if v == 0.0:
        return 1.0 if n == 0 else 0.0
    return float(fam.probs(v, n)[n]) if fam.support_max is None or n <= fam.support_max else 0.0


def deformed_bernoulli(fam: AnFamily, u: float, eta: float, n: int) -> float:
    """Left side ``sum_{m>=n} x_m!/(x_{m-n}! x_n!) eta^n p_{m-n}(eta) P_m(u)``.

    Summation stops once ten consecutive terms each add less than 1e-16 of
    the running total.
    """
    _require_nl(fam)
    _check_eta(eta)
    u = fam.check_u(u)
    if u == 0.0:
        return 1.0 if n == 0 else 0.0
    order = max(64, 2 * n)
    while True:
        m_top = order if fam.support_max is None else min(order, fam.support_max)
        if n > m_top:
            return 0.0
        seq = DeformedSequence.from_family(fam, m_top)
        polys = asym_polynomials(seq, None, eta, m_top - n)
        pm = fam.probs(u, m_top)
        acc, quiet = 0.0, 0
        lf = seq.log_xfact
        ln_eta = math.log(eta) if eta > 0 else -math.inf
        for m in range(n, m_top + 1):
            lw = lf[m] - lf[m - n] - lf[n] + (n * ln_eta if n else 0.0)
            term = math.exp(lw) * polys[m - n] * pm[m]
            acc += term
            quiet = quiet + 1 if abs(term) < 1e-16 * abs(acc) else 0
            if quiet >= 10:
                return acc
        if fam.support_max is not None and m_top == fam.support_max:
            return acc
        if order >= 1 << 14:
            raise TruncationError(f"{fam.label()}: deformed Bernoulli sum did not settle")
        order *= 2


def _f_series_at(fam: AnFamily, u: float, tol: float = 1e-17):
    """Coefficients ``a_k u^k`` of ``F = ln N`` (taken as a series in ``v`` at ``u v``).

    Raises :class:`TruncationError` when the series in ``v`` does not settle by
    order 4096, i.e. ``u`` lies beyond the radius of convergence of ``F``.
    """
    _require_nl(fam)
    order = 32
    while True:
        n = np.arange(order + 1)
        if fam.support_max is not None:
            # N is a polynomial; pad its coefficients with zeros
            c = np.zeros(order + 1)
            k = n[: fam.support_max + 1]
            c[k] = np.exp(k * math.log(u) - fam.log_xfact(k))
            try:
                f = ps.series_log(ps.TruncatedSeries(c))
            except ps.SeriesError:
                raise TruncationError(f"{fam.label()}: ln N series overflows at u={u}") from None
        else:
            seq = DeformedSequence.from_family(fam, order)
            f = seq.f_series(order, u)
            if f is None:
                f = ps.series_log(seq.norm_series(order, u))
        f = f.coeffs
        tail = np.abs(f[-4:] * n[-4:] ** 2).max()
        if tail <= tol * max(1.0, np.abs(f * n * n).sum()):
            return f
        if order >= 4096:
            raise TruncationError(f"{fam.label()}: ln N series does not converge at u={u}")
        order *= 2


@dataclass(frozen=True)
class PropRow:
    x: float
    lhs: float
    rhs: float
    extra: float
    ok: bool


@dataclass(frozen=True)
class PropReport:
    name: str
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)


def prop1_check(fam: AnFamily, u_grid, rtol: float = 1e-10) -> PropReport:
    """``<n^2> - <n>^2 - <n> = sum_k (k^2 - k) a_k u^k >= 0`` with ``F = sum a_k u^k``.

    Each row carries ``lhs`` from the moments, ``rhs`` from the ``F`` series and
    ``extra = Q_M(u)``; a row is ok when both sides agree and ``Q_M >= -1e-12``.
    """
    rows = []
    for u in u_grid:
        u = float(u)
        m = moments(fam, u, "series")
        lhs = m.n2bar - m.nbar ** 2 - m.nbar
        if u == 0.0:
            rhs = 0.0
        else:
            f = _f_series_at(fam, u)
            k = np.arange(f.size, dtype=float)
            rhs = math.fsum((k * k - k) * f)
        q = moments(fam, u).mandel_q
        agree = abs(lhs - rhs) <= rtol * max(abs(rhs), m.nbar, 1e-300) + 1e-13 * m.nbar
        rows.append(PropRow(u, lhs, rhs, q, bool(agree and q >= -1e-12 and rhs >= -1e-12)))
    return PropReport("prop1", tuple(rows))


def prop2_check(fam: AnFamily, nbar_grid) -> PropReport:
    """``ln N(u) < u (ln N)'(u)``, equivalently ``Delta(nbar) > 0``.

    Rows carry ``lhs = F(u)``, ``rhs = u F'(u)`` (both from the ``F`` series) and
    ``extra = Delta``.  A row is ok when ``lhs <= rhs`` and ``Delta >= -1e-12``;
    strictness is left to the caller since the Glauber-Sudarshan case is an equality.
    """
    rows = []
    for nb in nbar_grid:
        nb = float(nb)
        u = invert_nbar(fam, nb)
        if u == 0.0:
            rows.append(PropRow(nb, 0.0, 0.0, 0.0, True))
            continue
        f = _f_series_at(fam, u)
        k = np.arange(f.size, dtype=float)
        big_f = math.fsum(f)
        uf1 = math.fsum(k * f)
        delta = math.exp(-big_f) - math.exp(-nb)
        rows.append(PropRow(nb, big_f, uf1, delta,
                            bool(big_f <= uf1 + 1e-12 * max(1.0, uf1) and delta >= -1e-12)))
    return PropReport("prop2", tuple(rows))

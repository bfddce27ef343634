"""The concrete coherent-state families and their closed forms.

Kinds and parameters:

=================  ==========  =============================================
kind               parameter   N(u) / remarks
=================  ==========  =============================================
gs                 -           e^u (Glauber-Sudarshan)
spin               n_j >= 1    (1 + u)^n_j, finite support n <= n_j
perelomov          kappa > 1/2 (1 - u)^(-2 kappa), |alpha| < 1
barut_girardello   kappa>=1/2  Gamma(2k) u^(1/2-k) I_{2k-1}(2 sqrt u)
hermite            a > 0       exp(u + a u^2 / 2)
abel               beta > 0    exp(-beta W(-u/beta)), u < beta/e
sg                 -           Susskind-Glogower, h_n from J_{n+1}
sgm                -           modified Susskind-Glogower
=================  ==========  =============================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from . import power_series as ps
from .an_core import AnFamily, distribution, invert_nbar
from .errors import DomainError
from .specfun import bessel_j_batch, lambert_w0, log_bessel_i

KINDS = ("gs", "spin", "perelomov", "barut_girardello", "hermite", "abel", "sg", "sgm")

_PARAMS = {
    "gs": (),
    "spin": ("n_j",),
    "perelomov": ("kappa",),
    "barut_girardello": ("kappa",),
    "hermite": ("a",),
    "abel": ("beta",),
    "sg": (),
    "sgm": (),
}

_ALIASES = {"bg": "barut_girardello", "su2": "spin", "glauber": "gs"}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in _PARAMS:
            raise ValueError(f"unknown family kind {self.kind!r}; choose from {', '.join(KINDS)}")
        params = {k: float(v) for k, v in dict(self.params).items()}
        expected = set(_PARAMS[kind])
        if set(params) != expected:
            raise ValueError(f"{kind} takes parameters {sorted(expected)}, got {sorted(params)}")
        if kind == "spin":
            nj = params["n_j"]
            if nj < 1 or nj != int(nj):
                raise ValueError(f"spin needs a positive integer n_j, got {nj}")
        elif kind == "perelomov" and not params["kappa"] > 0.5:
            raise ValueError(f"perelomov needs kappa > 1/2, got {params['kappa']}")
        elif kind == "barut_girardello" and not params["kappa"] >= 0.5:
            raise ValueError(f"barut_girardello needs kappa >= 1/2, got {params['kappa']}")
        elif kind == "hermite" and not params["a"] > 0:
            raise ValueError(f"hermite needs a > 0, got {params['a']}")
        elif kind == "abel" and not params["beta"] > 0:
            raise ValueError(f"abel needs beta > 0, got {params['beta']}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", params)


def make_family(spec: FamilySpec | str, **params) -> AnFamily:
    """Build the :class:`AnFamily` for a spec (or a kind plus keyword parameters)."""
    if isinstance(spec, str):
        spec = FamilySpec(spec, params)
    return _BUILDERS[spec.kind](**spec.params)


# --------------------------------------------------------------------------
# nonlinear (deformed Poisson) families share one construction


def _nonlinear(name, params, radius_sq, log_xfact, log_norm, closed, support_max=None,
               nbar_sup=math.inf):
    def probs(u, n_max):
        if support_max is not None:
            n_max = min(n_max, support_max)
        n = np.arange(n_max + 1)
        if u == 0.0:
            out = np.zeros(n.size)
            out[0] = 1.0
            return out
        return np.exp(n * math.log(u) - log_xfact(n) - log_norm(u))

    def h(n, u):
        if support_max is not None and n > support_max:
            return 0.0
        return math.exp(-0.5 * (log_norm(u) + float(log_xfact(np.array([n]))[0])))

    closed = dict(closed)
    closed.setdefault("norm", lambda u: math.exp(log_norm(u)))
    return AnFamily(name=name, params=params, radius_sq=radius_sq, support_max=support_max,
                    h=h, probs=probs, closed_forms=closed, nbar_sup=nbar_sup,
                    log_xfact=log_xfact)


def _gs():
    return _nonlinear(
        "gs", {}, math.inf,
        log_xfact=lambda n: gammaln(np.asarray(n) + 1.0),
        log_norm=lambda u: u,
        closed={
            "nbar": lambda u: u,
            "n2bar": lambda u: u * u + u,
            "mandel": lambda u: 0.0,
            "u_of_nbar": lambda nb: nb,
            "mandel_of_nbar": lambda nb: 0.0,
            "overlap_of_nbar": lambda nb: math.exp(-nb),
        },
    )


def _spin(n_j):
    nj = int(n_j)

    def log_xfact(n):
        n = np.asarray(n, dtype=float)
        # x_n! = 1 / C(n_j, n)
        return gammaln(n + 1.0) + gammaln(nj - n + 1.0) - gammaln(nj + 1.0)

    def mandel_of_nbar(nb):
        if not 0.0 <= nb <= nj:
            raise DomainError(f"spin: nbar={nb} outside [0, {nj}]")
        return -nb / nj

    def overlap_of_nbar(nb):
        if not 0.0 <= nb <= nj:
            raise DomainError(f"spin: nbar={nb} outside [0, {nj}]")
        return (1.0 - nb / nj) ** nj

    def u_of_nbar(nb):
        p = nb / nj
        return p / (1.0 - p)

    return _nonlinear(
        "spin", {"n_j": nj}, math.inf, log_xfact,
        log_norm=lambda u: nj * math.log1p(u),
        closed={
            "nbar": lambda u: nj * u / (1.0 + u),
            "mandel": lambda u: -u / (1.0 + u),
            "u_of_nbar": u_of_nbar,
            "mandel_of_nbar": mandel_of_nbar,
            "overlap_of_nbar": overlap_of_nbar,
        },
        support_max=nj, nbar_sup=float(nj),
    )


def _perelomov(kappa):
    k2 = 2.0 * kappa

    def log_xfact(n):
        n = np.asarray(n, dtype=float)
        # 1/x_n! = C(2 kappa - 1 + n, n)
        return gammaln(n + 1.0) + gammaln(k2) - gammaln(k2 + n)

    return _nonlinear(
        "perelomov", {"kappa": kappa}, 1.0, log_xfact,
        log_norm=lambda u: -k2 * math.log1p(-u),
        closed={
            "nbar": lambda u: k2 * u / (1.0 - u),
            "mandel": lambda u: u / (1.0 - u),
            "u_of_nbar": lambda nb: (nb / k2) / (1.0 + nb / k2),
            "mandel_of_nbar": lambda nb: nb / k2,
            "overlap_of_nbar": lambda nb: (1.0 + nb / k2) ** (-k2),
        },
    )


def _barut_girardello(kappa):
    k2 = 2.0 * kappa
    nu = k2 - 1.0
    lg = math.lgamma(k2)

    def log_xfact(n):
        n = np.asarray(n, dtype=float)
        return gammaln(n + 1.0) + gammaln(k2 + n) - lg

    def log_norm(u):
        if u == 0.0:
            return 0.0
        return lg + (0.5 - kappa) * math.log(u) + log_bessel_i(nu, 2.0 * math.sqrt(u))

    def ratio(mu, u):
        z = 2.0 * math.sqrt(u)
        return math.exp(log_bessel_i(mu + 1.0, z) - log_bessel_i(mu, z))

    def nbar(u):
        return 0.0 if u == 0.0 else math.sqrt(u) * ratio(nu, u)

    def n2bar(u):
        if u == 0.0:
            return 0.0
        z = 2.0 * math.sqrt(u)
        return nbar(u) + u * math.exp(log_bessel_i(nu + 2.0, z) - log_bessel_i(nu, z))

    def mandel(u):
        if u == 0.0:
            return 0.0
        return math.sqrt(u) * (ratio(nu + 1.0, u) - ratio(nu, u))

    return _nonlinear(
        "barut_girardello", {"kappa": kappa}, math.inf, log_xfact, log_norm,
        closed={"nbar": nbar, "n2bar": n2bar, "mandel": mandel},
    )


def hermite_inverse_xfactorials(a: float, n_max: int) -> np.ndarray:
    """1/x_n! = sum_{m <= n/2} (a/2)^m / (m! (n-2m)!) for n = 0..n_max."""
    out = np.empty(n_max + 1)
    la = math.log(0.5 * a)
    for n in range(n_max + 1):
        m = np.arange(n // 2 + 1)
        logs = m * la - gammaln(m + 1.0) - gammaln(n - 2.0 * m + 1.0)
        top = logs.max()
        out[n] = math.exp(top) * math.fsum(np.exp(logs - top))
    return out


def _hermite(a):
    cache = {"table": np.zeros(1)}

    def log_xfact(n):
        n = np.asarray(n)
        need = int(n.max()) if n.size else 0
        tab = cache["table"]
        if tab.size <= need:
            size = max(need + 1, 2 * tab.size)
            tab = -_log_hermite_inverse_xfact(a, size - 1)
            cache["table"] = tab
        return tab[n]

    def mandel_of_nbar(nb):
        s = math.sqrt(1.0 + 4.0 * a * nb)
        return 4.0 * a * nb / (s + 1.0) ** 2

    def overlap_of_nbar(nb):
        s = math.sqrt(1.0 + 4.0 * a * nb)
        return math.exp(-0.5 * nb - nb / (s + 1.0))

    return _nonlinear(
        "hermite", {"a": a}, math.inf, log_xfact,
        log_norm=lambda u: u + 0.5 * a * u * u,
        closed={
            "nbar": lambda u: u * (1.0 + a * u),
            "mandel": lambda u: a * u / (1.0 + a * u),
            "u_of_nbar": lambda nb: 2.0 * nb / (math.sqrt(1.0 + 4.0 * a * nb) + 1.0),
            "mandel_of_nbar": mandel_of_nbar,
            "overlap_of_nbar": overlap_of_nbar,
        },
    )


def _log_hermite_inverse_xfact(a, n_max):
    out = np.empty(n_max + 1)
    la = math.log(0.5 * a)
    for n in range(n_max + 1):
        m = np.arange(n // 2 + 1)
        logs = m * la - gammaln(m + 1.0) - gammaln(n - 2.0 * m + 1.0)
        top = logs.max()
        out[n] = top + math.log(math.fsum(np.exp(logs - top)))
    return out


def abel_log_xfactorials(beta: float, n) -> np.ndarray:
    """ln x_n! = ln n! + (n - 1) ln(beta / (n + beta))."""
    n = np.asarray(n, dtype=float)
    return gammaln(n + 1.0) + (n - 1.0) * (math.log(beta) - np.log(n + beta))


def abel_x(beta: float, n) -> np.ndarray:
    """x_n = n beta/(n + beta) (1 - 1/(n + beta))^(n - 2) for n >= 1."""
    n = np.asarray(n, dtype=float)
    return n * beta / (n + beta) * (1.0 - 1.0 / (n + beta)) ** (n - 2.0)


def _abel(beta):
    def w(u):
        return lambert_w0(-u / beta)

    def nbar(u):
        ww = w(u)
        return -beta * ww / (1.0 + ww)

    def mandel(u):
        return 1.0 / (1.0 + w(u)) ** 2 - 1.0

    return _nonlinear(
        "abel", {"beta": beta}, beta / math.e,
        log_xfact=lambda n: abel_log_xfactorials(beta, n),
        log_norm=lambda u: -beta * w(u),
        closed={"nbar": nbar, "mandel": mandel},
    )


# --------------------------------------------------------------------------
# Susskind-Glogower families

_SG_SERIES_U = 1e-4
_SGM_SERIES_U = 1e-6
_SGM_N2_MIN_U = 1e-2


def sg_h_series(n: int, u: float, terms: int = 30) -> float:
    """(n+1) sum_m (-u)^m / (m! Gamma(n+m+2)); valid for all u, used near 0."""
    acc = 0.0
    t = 1.0 / math.gamma(n + 2) if n < 170 else 0.0
    for m in range(terms):
        acc += t
        t *= -u / ((m + 1) * (n + m + 2))
        if abs(t) < 1e-18 * abs(acc):
            break
    return (n + 1) * acc


def _sgm_norm_series_coeffs(order=8):
    """Taylor coefficients of N(u) = sum_n n J_n(2 sqrt u)^2 / u about u = 0."""
    total = ps.zero(order)
    for n in range(1, order + 2):
        g = np.array([(-1.0) ** m / (math.factorial(m) * math.factorial(n + m))
                      for m in range(order + 1)])
        g2 = ps.series_mul(ps.TruncatedSeries(g), ps.TruncatedSeries(g)).coeffs
        shifted = np.zeros(order + 1)
        shifted[n - 1:] = n * g2[: order + 2 - n]
        total = total + ps.TruncatedSeries(shifted)
    return total


_SGM_NORM_SERIES = _sgm_norm_series_coeffs()


def sgm_norm_closed(u: float) -> float:
    """N(u) = [2u J0^2 - sqrt(u) J0 J1 + 2u J1^2] / u, with the Taylor form near 0."""
    if u <= _SGM_SERIES_U:
        return _SGM_NORM_SERIES(u)
    j0, j1 = bessel_j_batch(1, 2.0 * math.sqrt(u))
    s = math.sqrt(u)
    return (2.0 * u * j0 * j0 - s * j0 * j1 + 2.0 * u * j1 * j1) / u


def sgm_norm_series(u: float) -> float:
    """N(u) = sum_{n>=1} n J_n(2 sqrt u)^2 / u summed term by term (the oracle)."""
    if u == 0.0:
        return 1.0
    z = 2.0 * math.sqrt(u)
    n_max = int(z) + 60
    j = bessel_j_batch(n_max, z)
    n = np.arange(n_max + 1)
    return math.fsum(n * j * j) / u


def _sg_common_h0(u):
    if u < _SG_SERIES_U:
        return sg_h_series(0, u)
    return bessel_j_batch(1, 2.0 * math.sqrt(u))[1] / math.sqrt(u)


def _sg():
    def probs(u, n_max):
        if u == 0.0:
            out = np.zeros(n_max + 1)
            out[0] = 1.0
            return out
        j = bessel_j_batch(n_max + 1, 2.0 * math.sqrt(u))[1:]
        m = np.arange(1, n_max + 2, dtype=float)
        return m * m * j * j / u

    def h(n, u):
        if n == 0:
            return _sg_common_h0(u)
        if u < _SG_SERIES_U:
            return sg_h_series(n, u)
        j = bessel_j_batch(n + 1, 2.0 * math.sqrt(u))[n + 1]
        return (n + 1) * j * math.exp(-0.5 * (n + 1) * math.log(u))

    return AnFamily(name="sg", params={}, radius_sq=math.inf, support_max=None,
                    h=h, probs=probs, closed_forms={}, oscillatory=True)


def _sgm():
    def one_minus_norm(u):
        if u <= _SGM_SERIES_U:
            c = _SGM_NORM_SERIES.coeffs
            return -math.fsum(c[k] * u ** k for k in range(1, c.size))
        return 1.0 - sgm_norm_closed(u)

    def nbar(u):
        # nbar = 1/N - 1
        return one_minus_norm(u) / sgm_norm_closed(u)

    def n2bar(u):
        if u < _SGM_N2_MIN_U:
            return None
        z = 2.0 * math.sqrt(u)
        j0, j1 = bessel_j_batch(1, z)
        nn = sgm_norm_closed(u)
        s = math.sqrt(u)
        x = u * j0 * j0 - u * j1 * j1 + s * j0 * j1
        return -2.0 / nn + 4.0 / 3.0 * (2.0 * u + 1.0) + x / (3.0 * u * nn)

    def probs(u, n_max):
        if u == 0.0:
            out = np.zeros(n_max + 1)
            out[0] = 1.0
            return out
        j = bessel_j_batch(n_max + 1, 2.0 * math.sqrt(u))[1:]
        m = np.arange(1, n_max + 2, dtype=float)
        return m * j * j / (u * sgm_norm_closed(u))

    def h(n, u):
        nn = sgm_norm_closed(u)
        if n == 0:
            return _sg_common_h0(u) / math.sqrt(nn)
        if u < _SG_SERIES_U:
            return sg_h_series(n, u) / math.sqrt((n + 1) * nn)
        j = bessel_j_batch(n + 1, 2.0 * math.sqrt(u))[n + 1]
        return math.sqrt((n + 1) / nn) * j * math.exp(-0.5 * (n + 1) * math.log(u))

    return AnFamily(name="sgm", params={}, radius_sq=math.inf, support_max=None,
                    h=h, probs=probs,
                    closed_forms={"norm": sgm_norm_closed, "nbar": nbar, "n2bar": n2bar},
                    oscillatory=True)


_BUILDERS = {
    "gs": _gs,
    "spin": _spin,
    "perelomov": _perelomov,
    "barut_girardello": _barut_girardello,
    "hermite": _hermite,
    "abel": _abel,
    "sg": _sg,
    "sgm": _sgm,
}


# --------------------------------------------------------------------------
# limiting behaviour


@dataclass(frozen=True)
class LimitCheck:
    name: str
    deviation: float


@dataclass(frozen=True)
class LimitReport:
    kind: str
    checks: tuple

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)


def _tv(p, q):
    size = max(p.size, q.size)
    p = np.pad(p, (0, size - p.size))
    q = np.pad(q, (0, size - q.size))
    return 0.5 * float(np.sum(np.abs(p - q))) + 0.5 * abs(p.sum() - q.sum())


def poisson_pmf(mean: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    if mean == 0.0:
        return (n == 0).astype(float)
    return np.exp(n * math.log(mean) - mean - gammaln(n + 1.0))


def bose_einstein_pmf(mean: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    return np.exp(n * math.log(mean / (1.0 + mean)) - math.log1p(mean))


def scaled_negative_binomial(nbar_scaled: float, eta: float, n_max: int) -> np.ndarray:
    """P_n(Nbar) = (1 + Nbar)^(-1/eta) C(1/eta - 1 + n, n) (Nbar / (1 + Nbar))^n."""
    n = np.arange(n_max + 1, dtype=float)
    r = 1.0 / eta
    logc = gammaln(r + n) - gammaln(n + 1.0) - gammaln(r)
    return np.exp(-r * math.log1p(nbar_scaled) + logc
                  + n * math.log(nbar_scaled / (1.0 + nbar_scaled)))


def limit_checks(spec: FamilySpec, means=(0.5, 1.0, 2.0)) -> LimitReport:
    """Deviation from the limiting laws that the family contracts to.

    * spin: binomial at ``u = mean / n_j`` against Poisson(mean) (total variation);
    * perelomov: distribution at scaled mean ``Nbar = eta nbar``, ``eta = 1/(2 kappa)``,
      against the Bose-Einstein law of mean ``Nbar`` (total variation);
    * abel: ``|x_n / n - 1|`` for ``n <= 5`` and ``|ln N(u) - u|`` on ``[0, 1/4]``.
    """
    fam = make_family(spec)
    checks = []
    if spec.kind == "spin":
        nj = int(spec.params["n_j"])
        for mean in means:
            p = distribution(fam, mean / nj).probs
            q = poisson_pmf(mean, max(nj, 200))
            checks.append(LimitCheck(f"tv_poisson(mean={mean:g})", _tv(p, q)))
    elif spec.kind == "perelomov":
        k2 = 2.0 * spec.params["kappa"]
        eta = 1.0 / k2
        for big_n in means:
            u = invert_nbar(fam, big_n / eta)
            p = distribution(fam, u).probs
            q = bose_einstein_pmf(big_n, p.size - 1)
            checks.append(LimitCheck(f"tv_bose_einstein(Nbar={big_n:g})", _tv(p, q)))
            closed = scaled_negative_binomial(big_n, eta, p.size - 1)
            checks.append(LimitCheck(f"scaled_form_consistency(Nbar={big_n:g})",
                                     float(np.max(np.abs(closed - p)))))
    elif spec.kind == "abel":
        beta = spec.params["beta"]
        n = np.arange(1, 6)
        checks.append(LimitCheck("max|x_n/n - 1|, n<=5",
                                 float(np.max(np.abs(abel_x(beta, n) / n - 1.0)))))
        us = np.linspace(0.0, min(0.25, 0.5 * beta / math.e), 26)
        dev = max(abs(-beta * lambert_w0(-x / beta) - x) for x in us)
        checks.append(LimitCheck("max|ln N(u) - u|, u<=1/4", float(dev)))
    return LimitReport(spec.kind, tuple(checks))


# --------------------------------------------------------------------------
# resolution of the identity


def resolution_diagonal(spec: FamilySpec, n: int, rtol: float = 1e-8):
    """Diagonal element ``int u^n h_n(u)^2 w(u) du`` of the identity resolution.

    Weights: GS ``1``; spin ``(n_j + 1)/(1 + u)^2``; Perelomov
    ``(2 kappa - 1)/(1 - u)^2`` on ``[0, 1)``; SGm ``N(u)``, integrated in
    ``t = sqrt(u)``.  Every value should be 1.  Returns a ``QuadratureResult``.
    """
    from .specfun import QuadratureResult, bessel_j_array, integrate

    if spec.kind == "gs":
        lf = math.lgamma(n + 1.0)
        return integrate(lambda u: np.exp(n * np.log(np.maximum(u, 1e-300)) - u - lf), 0.0,
                         rtol=rtol)
    if spec.kind == "spin":
        nj = int(spec.params["n_j"])
        if n > nj:
            raise DomainError(f"spin: n={n} exceeds n_j={nj}")
        lc = math.lgamma(nj + 1.0) - math.lgamma(n + 1.0) - math.lgamma(nj - n + 1.0)

        def f(u):
            lu = np.log(np.maximum(u, 1e-300))
            return (nj + 1) * np.exp(lc + n * lu - (nj + 2) * np.log1p(u))

        return integrate(f, 0.0, rtol=rtol)
    if spec.kind == "perelomov":
        k2 = 2.0 * spec.params["kappa"]
        lc = math.lgamma(k2 + n) - math.lgamma(n + 1.0) - math.lgamma(k2)

        def f(u):
            lu = np.log(np.maximum(u, 1e-300))
            return (k2 - 1.0) * np.exp(lc + n * lu + (k2 - 2.0) * np.log1p(-np.minimum(u, 1 - 1e-16)))

        return integrate(f, 0.0, 1.0, rtol=rtol)
    if spec.kind == "sgm":
        m = n + 1

        def f(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            j = bessel_j_array(m, 2.0 * t)[m]
            with np.errstate(divide="ignore", invalid="ignore"):
                out = 2.0 * m * j * j / t
            return np.where(t > 0, out, 0.0)

        # the tail expansion in 1/t only settles in once t is well past the order
        period = 0.5 * math.pi
        t0 = period * math.ceil((m + 4) ** 2 / period)
        head = integrate(f, 0.0, t0, rtol=rtol)
        tail = integrate(f, t0, rtol=rtol, atol=rtol, tail_period=period)
        return QuadratureResult(head.value + tail.value,
                                head.abs_error_estimate + tail.abs_error_estimate,
                                head.evaluations + tail.evaluations,
                                head.converged and tail.converged)
    raise ValueError(f"no identity-resolution weight implemented for {spec.kind}")

"""Named numerical checks, grouped by module, run by ``ancs verify``.

Every check returns one or more :class:`CheckResult` records holding the
measured deviation and the tolerance it is held to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import power_series as ps
from .an_core import (bernoulli_transform, distribution, invert_nbar, mandel_sign_changes,
                      moments, series_moments)
from .deformed_binomial import (DeformedSequence, abel_q, abel_sym_pmf, asym_law,
                                asym_polynomials, deformed_bernoulli, deformed_bernoulli_rhs,
                                hypergeometric_p, prop1_check, prop2_check, sym_law,
                                sym_polynomials)
from .families import (FamilySpec, abel_x, hermite_inverse_xfactorials, limit_checks,
                       make_family, resolution_diagonal, sgm_norm_closed, sgm_norm_series)
from .helstrom import delta, find_hb_zeros, helstrom_of_nbar, helstrom_pure, sign_summary
from .specfun import (bessel_i, bessel_j_batch, integrate, lambert_w0, log_binomial)


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)


SUITES: dict = {}


def _check(suite):
    def register(fn):
        SUITES.setdefault(suite, []).append(fn)
        return fn
    return register


def run_suite(name: str) -> list:
    """Run one suite (or ``"all"``) and return the flat list of results."""
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}; choose from all, {', '.join(SUITES)}")
        for fn in SUITES[n]:
            res = fn()
            out.extend(res if isinstance(res, list) else [res])
    return out


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _fam(kind, **params):
    return make_family(FamilySpec(kind, params))


# --------------------------------------------------------------------------
# power_series


@_check("power_series")
def _ps_roundtrip():
    rng = np.random.default_rng(7)
    dev = 0.0
    for _ in range(20):
        c = rng.uniform(-1, 1, 13)
        c[0] = 1.0
        a = ps.TruncatedSeries(c)
        dev = max(dev, ps.max_coeff_deviation(ps.series_exp(ps.series_log(a)), a))
        c[0] = 0.0
        b = ps.TruncatedSeries(c)
        dev = max(dev, ps.max_coeff_deviation(ps.series_log(ps.series_exp(b)), b))
    return CheckResult("exp(log a) = a and log(exp b) = b, order 12", dev, 1e-12)


@_check("power_series")
def _ps_integer_power():
    rng = np.random.default_rng(11)
    c = rng.uniform(0, 1, 11)
    c[0] = 1.0
    a = ps.TruncatedSeries(c)
    prod = ps.identity(10)
    for _ in range(3):
        prod = ps.series_mul(prod, a)
    return CheckResult("series_pow(a, 3) = a*a*a", ps.max_coeff_deviation(ps.series_pow(a, 3.0), prod),
                       1e-12)


@_check("power_series")
def _ps_log_perelomov():
    k = np.arange(1, 13)
    c = np.exp(gammaln(4.0 + np.arange(13)) - gammaln(np.arange(13) + 1.0) - gammaln(4.0))
    f = ps.series_log(ps.TruncatedSeries(c)).coeffs
    # the log recurrence cancels against coefficients growing like k^3
    return CheckResult("log (1-u)^-4 has coefficients 4/k, order 12",
                       float(np.max(np.abs(f[1:] - 4.0 / k) / (4.0 / k))), 1e-10)


@_check("power_series")
def _ps_division():
    e = ps.exp_series(15)
    q = ps.series_div(e, e.rescale_argument(0.5)).coeffs
    ref = 0.5 ** np.arange(16) / np.exp(gammaln(np.arange(16) + 1.0))
    return CheckResult("e^u / e^(u/2) = e^(u/2)", ps.max_coeff_deviation(q, ref), 1e-12)


# --------------------------------------------------------------------------
# specfun


@_check("specfun")
def _sf_bessel_identity():
    out = []
    for x in (0.5, 1.0, 2.0, 5.0):
        j = bessel_j_batch(int(2 * x) + 40, 2.0 * x)
        n = np.arange(j.size)
        out.append(CheckResult(f"sum n^2 J_n(2x)^2 = x^2 at x={x:g}",
                               _rel(math.fsum(n * n * j * j), x * x), 1e-10))
    return out


@_check("specfun")
def _sf_bessel_i_recurrence():
    dev = 0.0
    for nu in (1.0, 1.5, 3.0, 9.0):
        # beyond z ~ 100 the left side cancels by a factor 2 nu / z
        for z in (0.1, 1.0, 10.0, 50.0, 100.0):
            lhs = bessel_i(nu - 1, z) - bessel_i(nu + 1, z)
            rhs = 2.0 * nu / z * bessel_i(nu, z)
            dev = max(dev, _rel(lhs, rhs))
    return CheckResult("I_{nu-1} - I_{nu+1} = (2 nu / z) I_nu", dev, 1e-11)


@_check("specfun")
def _sf_lambert():
    rng = np.random.default_rng(3)
    xs = rng.uniform(-1.0 / math.e, 0.0, 1000)
    dev = max(abs(w * math.exp(w) - x) for x in xs for w in [lambert_w0(float(x))])
    return CheckResult("|W e^W - x| on 1000 points", dev, 1e-14)


@_check("specfun")
def _sf_log_binomial():
    return CheckResult("ln C(10, 5) = ln 252", abs(log_binomial(10, 5) - math.log(252)), 1e-13)


@_check("specfun")
def _sf_quadrature():
    out = [CheckResult("int e^-u = 1", abs(integrate(lambda u: np.exp(-u), 0.0).value - 1.0), 1e-8)]

    def f(t):
        t = np.atleast_1d(t)
        safe = np.where(t > 0, t, 1.0)
        j = np.array([bessel_j_batch(2, 2.0 * x)[2] for x in safe])
        return np.where(t > 0, j * j / safe, 0.0)

    v = integrate(f, 0.0, tail_period=0.5 * math.pi).value
    out.append(CheckResult("int J_2(2t)^2 / t dt = 1/4", abs(v - 0.25) / 0.25, 1e-8))
    return out


# --------------------------------------------------------------------------
# an_core

_NL_KINDS = [("gs", {}), ("spin", {"n_j": 4}), ("perelomov", {"kappa": 2.0}),
             ("barut_girardello", {"kappa": 2.0}), ("hermite", {"a": 1.0}),
             ("abel", {"beta": 2.0}), ("sg", {}), ("sgm", {})]


def _log_grid(fam, count=12):
    # P_n decays like (u/R^2)^n, so stop short of a finite radius
    top = min(fam.u_max * 0.999, 50.0)
    return np.geomspace(1e-6, top, count)


@_check("an_core")
def _core_normalization():
    out = []
    for kind, p in _NL_KINDS:
        fam = _fam(kind, **p)
        dev = max(abs(distribution(fam, u).total() - 1.0) for u in _log_grid(fam))
        out.append(CheckResult(f"sum P_n = 1 ({fam.label()})", dev, 1e-10))
    return out


@_check("an_core")
def _core_closed_vs_series():
    out = []
    for kind, p in _NL_KINDS[1:]:
        fam = _fam(kind, **p)
        if not fam.closed_forms.keys() - {"norm"}:
            continue
        dev = 0.0
        for u in _log_grid(fam, 8)[2:]:
            c, s = moments(fam, u), series_moments(fam, u)
            dev = max(dev, _rel(c.nbar, s.nbar), _rel(c.n2bar, s.n2bar),
                      abs(c.mandel_q - s.mandel_q) / max(abs(s.mandel_q), 1e-3))
        out.append(CheckResult(f"closed forms = series moments ({fam.label()})", dev, 1e-9))
    return out


@_check("an_core")
def _core_monotone_and_inverse():
    out = []
    for kind, p in _NL_KINDS:
        fam = _fam(kind, **p)
        top = min(fam.u_max * 0.999, 40.0)
        grid = np.linspace(0.0, top, 1000 if fam.closed("nbar", 1e-3) is not None else 200)
        nb = np.array([moments(fam, u).nbar for u in grid])
        steps = float(np.min(np.diff(nb)))
        out.append(CheckResult(f"nbar(u) strictly increasing ({fam.label()})",
                               0.0 if steps > 0 else -steps + 1.0, 0.0))
        dev = 0.0
        for u in grid[1::max(1, grid.size // 10)]:
            v = invert_nbar(fam, moments(fam, u).nbar)
            dev = max(dev, _rel(v, u))
        out.append(CheckResult(f"invert_nbar(nbar(u)) = u ({fam.label()})", dev, 1e-9))
    return out


@_check("an_core")
def _core_bernoulli():
    gs = _fam("gs")
    d = distribution(gs, 3.0)
    t = bernoulli_transform(d, 0.4).probs
    ref = distribution(gs, 1.2).probs
    n = min(t.size, ref.size)
    out = [CheckResult("Bernoulli(Poisson(u)) = Poisson(eta u)", float(np.max(np.abs(t[:n] - ref[:n]))),
                       1e-12)]
    dev = 0.0
    for kind, p in _NL_KINDS:
        fam = _fam(kind, **p)
        d = distribution(fam, min(2.0, 0.7 * fam.u_max))
        once = bernoulli_transform(d, 0.3)
        twice = bernoulli_transform(bernoulli_transform(d, 0.6), 0.5)
        dev = max(dev, float(np.max(np.abs(once.probs - twice.probs))),
                  _rel(once.mean(), 0.3 * d.mean()))
    out.append(CheckResult("double transform and mean scaling", dev, 1e-11))
    return out


# --------------------------------------------------------------------------
# families


@_check("families")
def _fam_spin():
    out = []
    for nj in (4, 10):
        fam = _fam("spin", n_j=nj)
        dev = 0.0
        for nb in np.linspace(0.0, nj, 202)[1:-1]:
            q = series_moments(fam, invert_nbar(fam, nb)).mandel_q
            dev = max(dev, abs(q + nb / nj))
        out.append(CheckResult(f"spin n_j={nj}: Q(nbar) = -nbar/n_j", dev, 1e-10))
    return out


@_check("families")
def _fam_perelomov():
    out = []
    for kappa in (2.0, 5.0):
        fam = _fam("perelomov", kappa=kappa)
        dev = 0.0
        for nb in np.linspace(0.0, 10.0, 101)[1:]:
            q = series_moments(fam, invert_nbar(fam, nb)).mandel_q
            dev = max(dev, abs(q - nb / (2 * kappa)))
        out.append(CheckResult(f"perelomov kappa={kappa:g}: Q(nbar) = nbar/(2 kappa)", dev, 1e-10))
    return out


@_check("families")
def _fam_bg_small_u():
    out = []
    u = 1e-4
    for kappa in (0.5, 2.0, 5.0):
        k2 = 2 * kappa
        s = series_moments(_fam("barut_girardello", kappa=kappa), u)
        nb = u / k2 * (1 - u / (k2 * (1 + k2)))
        n2 = u / k2 * (1 - (1 - k2) * u / (k2 * (1 + k2)))
        q = -u / (k2 * (1 + k2))
        out.append(CheckResult(f"bg kappa={kappa:g} small u: nbar, n2bar relative",
                               max(_rel(s.nbar, nb), _rel(s.n2bar, n2)), 1e-6))
        # leading-order Q_M carries an O(u^2) remainder
        out.append(CheckResult(f"bg kappa={kappa:g} small u: |Q_M - leading| <= u^2",
                               abs(s.mandel_q - q), u * u))
    return out


@_check("families")
def _fam_bg_large_u():
    out = []
    u = 1e4
    for kappa in (0.5, 2.0, 5.0):
        m = series_moments(_fam("barut_girardello", kappa=kappa), u)
        # Q_M = -1/2 + (4 kappa - 1)/(8 sqrt u) + O(1/u) from the Bessel-ratio expansion
        asym = -0.5 + (4 * kappa - 1) / (8 * math.sqrt(u))
        out.append(CheckResult(f"bg kappa={kappa:g} large u: Q_M expansion", abs(m.mandel_q - asym), 1e-3))
        out.append(CheckResult(f"bg kappa={kappa:g} large u: variance / (sqrt(u)/2) - 1",
                               _rel(m.variance, math.sqrt(u) / 2), 0.02))
    return out


@_check("families")
def _fam_hermite():
    from .deformed_binomial import DeformedSequence as _S  # noqa: F401
    out = []
    for a in (0.5, 1.0, 2.0):
        f = ps.TruncatedSeries([0.0, 1.0, 0.5 * a] + [0.0] * 18)
        gen = ps.series_exp(f).coeffs
        ref = hermite_inverse_xfactorials(a, 20)
        out.append(CheckResult(f"hermite a={a:g}: 1/x_n! from exp series vs explicit sum, n<=20",
                               ps.max_coeff_deviation(gen, ref, small=0.0), 1e-12))
        out.append(CheckResult(f"hermite a={a:g}: x_2 = 2/(1+a)",
                               _rel(math.exp(-math.log(ref[2])), 2 / (1 + a)), 1e-12))
    return out


@_check("families")
def _fam_abel():
    out = []
    beta = 2.0
    n = np.arange(16)
    fam = _fam("abel", beta=beta)
    # exp(F) with F = -beta W(-u/beta) = sum k^(k-1) u^k / (k! beta^(k-1))
    k = np.arange(1, 16, dtype=float)
    f = np.concatenate([[0.0], np.exp((k - 1) * (np.log(k) - math.log(beta)) - gammaln(k + 1))])
    gen = ps.series_exp(ps.TruncatedSeries(f)).coeffs
    out.append(CheckResult("abel beta=2: x_n! closed form vs exp series, n<=15",
                           ps.max_coeff_deviation(np.exp(-fam.log_xfact(n)), gen, small=0.0), 1e-10))
    # x_n = (beta/e)(1 + 3/(2n) + O(1/n^2)): the limit is approached from above
    n = np.arange(100, 201)
    for b in (2.0, 3.0, 10.0):
        r = abel_x(b, n) * math.e / b - 1.0
        out.append(CheckResult(f"abel beta={b:g}: x_n e/beta - 1 - 3/(2n) = O(1/n^2), n in [100, 200]",
                               float(np.max(np.abs(r - 1.5 / n) * n * n)), 5.0 * b * b + 5.0))
    return out


@_check("families")
def _fam_sg():
    out = []
    for kind in ("sg", "sgm"):
        fam = _fam(kind)
        dev = max(abs(distribution(fam, u).total() - 1.0) for u in np.linspace(0.0, 50.0, 26))
        out.append(CheckResult(f"{kind}: sum P_n = 1 on [0, 50]", dev, 1e-10))
    grid = np.concatenate([np.geomspace(1e-8, 1.0, 20), np.linspace(1.0, 50.0, 50)])
    out.append(CheckResult("sgm: closed N(u) = sum n J_n^2 / u on (0, 50]",
                           max(abs(sgm_norm_closed(u) - sgm_norm_series(u)) for u in grid), 1e-9))
    sgm = _fam("sgm")
    out.append(CheckResult("sgm: nbar = 1/N - 1 vs series moments",
                           max(abs(moments(sgm, u).nbar - series_moments(sgm, u).nbar)
                               for u in grid[::3]), 1e-9))
    return out


@_check("families")
def _fam_crossovers():
    out = []
    for kind, lo, hi, grid in (("sg", 17, 27, np.linspace(100, 400, 31)),
                               ("sgm", 8, 12, np.linspace(20, 120, 26))):
        hits = mandel_sign_changes(_fam(kind), grid)
        nb = hits[0][1] if hits else math.nan
        dev = 0.0 if lo <= nb <= hi else (math.inf if math.isnan(nb) else min(abs(nb - lo), abs(nb - hi)))
        out.append(CheckResult(f"{kind}: Q_M crosses zero at nbar in [{lo}, {hi}] (found {nb:.4g})", dev, 0.0))
    return out


@_check("families")
def _fam_limits():
    out = []
    for spec, tol in ((FamilySpec("spin", {"n_j": 1000}), 1e-2),
                      (FamilySpec("perelomov", {"kappa": 0.5001}), 1e-3),
                      (FamilySpec("abel", {"beta": 1e6}), 1e-4)):
        rep = limit_checks(spec)
        for c in rep.checks:
            out.append(CheckResult(f"{spec.kind} limit: {c.name}", c.deviation, tol))
    return out


@_check("families")
def _fam_resolution():
    out = []
    for spec, ns in ((FamilySpec("gs"), range(11)), (FamilySpec("spin", {"n_j": 4}), range(5)),
                     (FamilySpec("perelomov", {"kappa": 2.0}), range(11)),
                     (FamilySpec("sgm"), range(6))):
        dev = max(abs(resolution_diagonal(spec, n).value - 1.0) for n in ns)
        out.append(CheckResult(f"{spec.kind}: identity resolution diagonal = 1", dev, 1e-6))
    return out


# --------------------------------------------------------------------------
# deformed_binomial

_ETAS = (0.0, 0.25, 0.5, 0.75, 1.0)


def _sequences(n_max=60):
    return {"gs": DeformedSequence.gs(n_max),
            "perelomov-type(m=4)": DeformedSequence.negative_binomial(4.0, 1.0, n_max),
            "hermite(a=1)": DeformedSequence.hermite(1.0, n_max),
            "abel(beta=2)": DeformedSequence.abel(2.0, n_max)}


@_check("deformed_binomial")
def _db_normalization():
    out = []
    for name, seq in _sequences().items():
        dev, low, sym = 0.0, 0.0, 0.0
        for n in (1, 2, 5, 10, 20, 30):
            for eta in _ETAS:
                a, s = asym_law(seq, n, eta), sym_law(seq, n, eta)
                s2 = sym_law(seq, n, 1.0 - eta)
                dev = max(dev, abs(a.total() - 1), abs(s.total() - 1))
                low = min(low, a.probs.min(), s.probs.min())
                sym = max(sym, float(np.max(np.abs(s.probs - s2.probs[::-1]))))
        out.append(CheckResult(f"{name}: deformed laws sum to 1, n<=30", dev, 1e-10))
        out.append(CheckResult(f"{name}: symmetric law invariant under (k, eta) -> (n-k, 1-eta)", sym, 1e-12))
        out.append(CheckResult(f"{name}: no negative probability", max(0.0, -low), 1e-10))
    return out


@_check("deformed_binomial")
def _db_polynomials():
    out = []
    low = 0.0
    for seq in _sequences().values():
        for eta in _ETAS:
            low = min(low, asym_polynomials(seq, None, eta, 40).min(),
                      sym_polynomials(seq, None, eta, 40).min())
    out.append(CheckResult("Sigma_+ sequences: p_s, q_n >= 0 on the eta grid", max(0.0, -low), 1e-10))
    seq = DeformedSequence.negative_binomial(4.0, 1.0, 40)
    dev = max(_rel(asym_polynomials(seq, None, e, 30)[k], hypergeometric_p(4.0, k, e))
              for e in (0.2, 0.5, 0.8) for k in range(31))
    out.append(CheckResult("p_k = 2F1(-m, -k; 1-k-m; eta) for (1-u)^-m", dev, 1e-10))
    ab = DeformedSequence.abel(2.0, 40)
    dev = max(abs(sym_polynomials(ab, None, e, 20)[n] - abel_q(2.0, n, e))
              for e in (0.2, 0.5, 0.8) for n in range(21))
    out.append(CheckResult("abel q_n(eta) closed form vs series_pow", dev, 1e-10))
    dev = float(np.max(np.abs(sym_law(ab, 3, 0.3).probs - abel_sym_pmf(2.0, 3, 0.3))))
    out.append(CheckResult("abel symmetric law, n=3, closed form", dev, 1e-12))
    return out


@_check("deformed_binomial")
def _db_moments():
    out = []
    s = 3.0
    seq = DeformedSequence.negative_binomial(s, 1.0 / s, 60)
    dev_m = dev_s = 0.0
    for n in range(1, 51):
        for eta in (0.2, 0.5, 0.7):
            d = sym_law(seq, n, eta)
            dev_m = max(dev_m, abs(d.mean() - eta * n))
            sd = n * math.sqrt(eta * (1 - eta)) * math.sqrt((1 + s / n) / (1 + s))
            dev_s = max(dev_s, abs(math.sqrt(d.variance()) - sd))
    out.append(CheckResult("symmetric mean = eta n", dev_m, 1e-10))
    out.append(CheckResult("perelomov-type symmetric std, n<=50", dev_s, 1e-10))
    d = asym_law(DeformedSequence.negative_binomial(2.0, 1.0, 4), 2, 0.5)
    out.append(CheckResult("asymmetry witness: p_0 != p_2 at n=2, eta=1/2",
                           0.0 if abs(d.probs[0] - d.probs[2]) > 1e-6 else 1.0, 0.0))
    g = DeformedSequence.gs(600)
    n, u = 500, 1.5
    lim = asym_law(g, n, u / n).probs[:20]
    pois = np.exp(np.arange(20) * math.log(u) - u - gammaln(np.arange(20) + 1.0))
    out.append(CheckResult("Poisson-like limit at n=500", float(np.max(np.abs(lim - pois))), 1e-2))
    low = 0.0
    for seq in _sequences(200).values():
        x = seq.x
        low = min(low, float(np.min(np.arange(x.size) * x[1] - x)))
    out.append(CheckResult("CST bound x_n <= n x_1, n<=200", max(0.0, -low), 1e-12))
    return out


@_check("deformed_binomial")
def _db_bernoulli():
    out = []
    for kappa in (1.0, 2.0):
        fam = _fam("perelomov", kappa=kappa)
        dev = max(_rel(deformed_bernoulli(fam, u, e, n), deformed_bernoulli_rhs(fam, u, e, n))
                  for u in (0.3, 0.8) for e in (0.3, 0.7) for n in (0, 1, 2, 5))
        out.append(CheckResult(f"deformed Bernoulli transform, perelomov kappa={kappa:g}", dev, 1e-9))
    return out


_SIGMA_PLUS = [("gs", {}), ("hermite", {"a": 1.0}), ("abel", {"beta": 2.0}),
               ("perelomov", {"kappa": 2.0})]


@_check("deformed_binomial")
def _db_propositions():
    out = []
    for kind, p in _SIGMA_PLUS:
        fam = _fam(kind, **p)
        top = min(fam.u_max * 0.95, 5.0)
        r1 = prop1_check(fam, np.linspace(top / 100, top, 100))
        bad = sum(not r.ok for r in r1.rows)
        strict = kind == "gs" or all(r.extra > 0 for r in r1.rows)
        out.append(CheckResult(f"variance identity and Q_M >= 0 ({fam.label()})",
                               float(bad + (0 if strict else 1)), 0.0))
        nb_top = 10.0
        r2 = prop2_check(fam, np.linspace(nb_top / 100, nb_top, 100))
        bad = sum(not r.ok for r in r2.rows)
        strict = kind == "gs" or all(r.extra > 0 and r.lhs < r.rhs for r in r2.rows)
        out.append(CheckResult(f"ln N < u (ln N)' and Delta >= 0 ({fam.label()})",
                               float(bad + (0 if strict else 1)), 0.0))
    return out


# --------------------------------------------------------------------------
# helstrom


@_check("helstrom")
def _hb_pure():
    out = [CheckResult("P_H(0, 1/2) = 0", abs(helstrom_pure(0.0, 0.5)), 0.0),
           CheckResult("P_H(1, 1/2) = 1/2", abs(helstrom_pure(1.0, 0.5) - 0.5), 1e-16),
           CheckResult("P_H(1/4, 1/2) = (1 - sqrt(3)/2)/2",
                       abs(helstrom_pure(0.25, 0.5) - (1 - math.sqrt(3) / 2) / 2), 1e-15)]
    o = np.linspace(0, 1, 1001)
    worst = 0.0
    for xi0 in (0.1, 0.5, 0.8):
        v = np.array([helstrom_pure(x, xi0) for x in o])
        worst = max(worst, float(np.max(-np.diff(v))))
    out.append(CheckResult("P_H increasing in the overlap", worst, 0.0))
    dev = max(abs(helstrom_of_nbar(_fam(k, **p), 0.0).p_h - 0.5) for k, p in _NL_KINDS)
    out.append(CheckResult("P_H = 1/2 at nbar = 0 for every family", dev, 1e-15))
    return out


@_check("helstrom")
def _hb_signs():
    out = []
    for nj in (4, 10):
        fam = _fam("spin", n_j=nj)
        worst = max(delta(fam, x) for x in np.linspace(0, nj, 201)[1:-1])
        out.append(CheckResult(f"spin n_j={nj}: Delta <= 0", max(0.0, worst), 1e-12))
    grid = np.linspace(0.1, 10.0, 100)
    for kappa in (2.0, 5.0):
        s = sign_summary(_fam("perelomov", kappa=kappa), grid)
        out.append(CheckResult(f"perelomov kappa={kappa:g}: Delta >= 0", max(0.0, -s.min_delta), 1e-12))
    d = [delta(_fam("perelomov", kappa=k), 2.0) for k in (2.0, 5.0, 50.0, 500.0)]
    out.append(CheckResult("perelomov Delta(2) decreasing in kappa",
                           0.0 if all(a > b for a, b in zip(d, d[1:])) else 1.0, 0.0))
    bg = []
    for kappa in (0.5, 2.0, 5.0):
        s = sign_summary(_fam("barut_girardello", kappa=kappa), grid)
        out.append(CheckResult(f"bg kappa={kappa:g}: Delta < 0", 0.0 if s.max_delta < 0 else s.max_delta, 0.0))
        bg.append(abs(delta(_fam("barut_girardello", kappa=kappa), 2.0)))
    out.append(CheckResult("bg |Delta(2)| grows as kappa decreases",
                           0.0 if bg[0] > bg[1] > bg[2] else 1.0, 0.0))
    s1 = sign_summary(_fam("spin", n_j=10), grid * 0.5, eta=1.0)
    s2 = sign_summary(_fam("spin", n_j=10), grid, eta=0.5)
    out.append(CheckResult("sign class at eta=1/2 equals eta=1 on the scaled grid",
                           0.0 if s1.category == s2.category else 1.0, 0.0))
    return out


@_check("helstrom")
def _hb_zeros():
    out = []
    for kind in ("sg", "sgm"):
        zs = find_hb_zeros(_fam(kind), 0.0, 9.0)
        first = zs[0].nbar if zs else math.nan
        ok = bool(zs) and 1.5 <= first <= 2.5 and len(zs) >= 2
        out.append(CheckResult(f"{kind}: first Helstrom zero at nbar in [1.5, 2.5] (found {first:.4g}),"
                               " more zeros beyond", 0.0 if ok else 1.0, 0.0))
        out.append(CheckResult(f"{kind}: |h_0| at the zeros",
                               max((z.residual for z in zs), default=math.inf), 1e-10))
    return out

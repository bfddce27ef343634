"""Generic AN-class machinery.

An AN-class state is ``sum_n alpha^n h_n(|alpha|^2) |n>``.  Everything here is
expressed through the photon-count distribution ``P_n(u) = u^n h_n(u)^2`` with
``u = |alpha|^2``; concrete families live in :mod:`ancs.families`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, TruncationError
from .specfun import log_binomial_array

# truncation rule for infinite supports
_REL_CUTOFF = 1e-16
_RUN = 10
_MAX_TERMS = 1 << 22

# Q_M at u = 0 is 0/0; without a closed form it is read off at this u
_Q_PROBE_U = 1e-8


@dataclass(frozen=True)
class AnFamily:
    """Immutable descriptor of one coherent-state family.

    ``probs(u, n_max)`` returns ``P_0(u) .. P_{n_max}(u)`` and is the reference
    (series) path.  ``closed_forms`` may hold any of ``norm``, ``nbar``,
    ``n2bar``, ``mandel``, ``u_of_nbar``, ``mandel_of_nbar``,
    ``overlap_of_nbar``; a closed form may return ``None`` where it does not
    apply, in which case the series path is used.
    """

    name: str
    params: Mapping[str, float]
    radius_sq: float
    support_max: int | None
    h: Callable[[int, float], float]
    probs: Callable[[float, int], np.ndarray]
    closed_forms: Mapping[str, Callable] = field(default_factory=dict)
    nbar_sup: float = math.inf
    log_xfact: Callable[[np.ndarray], np.ndarray] | None = None
    oscillatory: bool = False

    @property
    def u_max(self) -> float:
        """Largest admissible ``u`` (open domains are clamped 1e-12 below R^2)."""
        return self.radius_sq - 1e-12 if math.isfinite(self.radius_sq) else math.inf

    @property
    def is_nonlinear(self) -> bool:
        return self.log_xfact is not None

    def check_u(self, u: float) -> float:
        u = float(u)
        if not (u >= 0.0) or u >= self.radius_sq or u > self.u_max:
            raise DomainError(f"{self.name}: u={u!r} outside [0, {self.radius_sq})")
        return u

    def closed(self, key: str, x: float):
        fn = self.closed_forms.get(key)
        return None if fn is None else fn(x)

    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"


@dataclass(frozen=True)
class PhotonDistribution:
    """Truncated distribution ``P_0 .. P_N`` with a bound on the neglected mass."""

    u: float
    probs: np.ndarray
    tail_bound: float

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def n_max(self) -> int:
        return self.probs.size - 1

    def mean(self) -> float:
        return float(np.dot(np.arange(self.probs.size), self.probs))

    def total(self) -> float:
        return math.fsum(self.probs)


@dataclass(frozen=True)
class MomentSet:
    nbar: float
    n2bar: float
    mandel_q: float

    @property
    def variance(self) -> float:
        return self.n2bar - self.nbar ** 2


def distribution(fam: AnFamily, u: float) -> PhotonDistribution:
    """Photon-count distribution ``P_n(u) = u^n h_n(u)^2``.

    Infinite supports are extended until ``P_N < 1e-16 max P`` for ten
    consecutive ``n``; the remaining mass is bounded geometrically from the
    observed decay ratio.
    """
    u = fam.check_u(u)
    if u == 0.0:
        return PhotonDistribution(0.0, np.array([1.0]), 0.0)
    if fam.support_max is not None:
        return PhotonDistribution(u, fam.probs(u, fam.support_max), 0.0)

    n_max = 64
    while True:
        p = fam.probs(u, n_max)
        cut = _find_cutoff(p)
        if cut is not None:
            break
        if n_max >= _MAX_TERMS:
            raise TruncationError(f"{fam.label()}: P_n(u={u}) decays too slowly to truncate")
        n_max *= 2
    p = p[: cut + 1]
    tail = p[-_RUN:]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = tail[1:] / tail[:-1]
    ratios = ratios[np.isfinite(ratios)]
    if p[-1] == 0.0:
        bound = 0.0
    elif ratios.size and ratios.max() < 1.0:
        r = float(ratios.max())
        bound = float(p[-1] * r / (1.0 - r))
    else:
        # no clean geometric decay in the last window: fall back to the window mass
        bound = float(_RUN * tail.max())
    return PhotonDistribution(u, p, bound)


def _find_cutoff(p: np.ndarray):
    """Index closing the first run of ten sub-threshold terms past the peak."""
    peak = int(np.argmax(p))
    small = p[peak:] < _REL_CUTOFF * p[peak]
    if small.size < _RUN:
        return None
    run = np.convolve(small.astype(int), np.ones(_RUN, dtype=int), mode="valid")
    hits = np.nonzero(run == _RUN)[0]
    if hits.size == 0:
        return None
    return peak + int(hits[0]) + _RUN - 1


def series_moments(fam: AnFamily, u: float) -> MomentSet:
    """Moments summed directly from the distribution (the reference path)."""
    u = fam.check_u(u)
    if u == 0.0:
        return MomentSet(0.0, 0.0, _q_at_origin(fam))
    return _moments_of(distribution(fam, u).probs)


def _moments_of(p: np.ndarray) -> MomentSet:
    n = np.arange(p.size, dtype=float)
    nbar = math.fsum(n * p)
    fact2 = math.fsum(n * (n - 1.0) * p)
    if nbar == 0.0:
        return MomentSet(0.0, 0.0, 0.0)
    # Q = (<n^2> - <n>^2)/<n> - 1 = <n(n-1)>/<n> - <n>
    return MomentSet(nbar, fact2 + nbar, fact2 / nbar - nbar)


def _q_at_origin(fam: AnFamily) -> float:
    q = fam.closed("mandel", 0.0)
    if q is not None:
        return float(q)
    return _moments_of(distribution(fam, _Q_PROBE_U).probs).mandel_q


def moments(fam: AnFamily, u: float, method: str = "auto") -> MomentSet:
    """Mean, second moment and Mandel parameter at ``u``.

    ``method`` is ``"auto"`` (closed forms where the family has them),
    ``"series"`` or ``"closed"`` (raises if a closed form is missing).
    """
    if method == "series":
        return series_moments(fam, u)
    u = fam.check_u(u)
    nbar = fam.closed("nbar", u)
    n2bar = fam.closed("n2bar", u)
    q = fam.closed("mandel", u)
    if nbar is not None and q is None and n2bar is not None and nbar > 0:
        q = (n2bar - nbar * nbar) / nbar - 1.0
    if nbar is not None and n2bar is None and q is not None:
        n2bar = nbar * (q + 1.0) + nbar * nbar
    if nbar is None or n2bar is None or q is None:
        if method == "closed":
            raise KeyError(f"{fam.label()}: no complete closed-form moments at u={u}")
        s = series_moments(fam, u)
        nbar = s.nbar if nbar is None else nbar
        n2bar = s.n2bar if n2bar is None else n2bar
        q = s.mandel_q if q is None else q
    return MomentSet(float(nbar), float(n2bar), float(q))


def mean_photon_number(fam: AnFamily, u: float) -> float:
    u = fam.check_u(u)
    v = fam.closed("nbar", u)
    return float(v) if v is not None else series_moments(fam, u).nbar


def invert_nbar(fam: AnFamily, nbar: float, tol: float = 1e-10) -> float:
    """The ``u`` with ``nbar(u) = nbar``; relies on strict monotonicity of ``nbar(u)``."""
    nbar = float(nbar)
    if not (nbar >= 0.0) or nbar >= fam.nbar_sup:
        raise DomainError(f"{fam.label()}: nbar={nbar!r} outside [0, {fam.nbar_sup})")
    if nbar == 0.0:
        return 0.0
    u = fam.closed("u_of_nbar", nbar)
    if u is not None:
        return float(u)

    def resid(x):
        return mean_photon_number(fam, x) - nbar

    lo, hi = 0.0, 1.0
    if hi >= fam.u_max:
        hi = fam.u_max
    while resid(hi) < 0.0:
        if hi >= fam.u_max:
            raise DomainError(f"{fam.label()}: nbar={nbar} not reached below u={fam.u_max}")
        lo, hi = hi, min(2.0 * hi, fam.u_max)
    # bisect well past the contract tolerance so that u itself is accurate
    target = 1e-3 * tol * max(1.0, nbar)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        r = resid(mid)
        if abs(r) <= target:
            return mid
        if r < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bernoulli_transform(dist: PhotonDistribution, eta: float) -> PhotonDistribution:
    """Photocount distribution for a detector of efficiency ``eta``.

    ``P_n(eta) = sum_{m>=n} C(m, n) eta^n (1 - eta)^(m-n) P_m``.
    """
    eta = float(eta)
    if not (0.0 <= eta <= 1.0):
        raise DomainError(f"efficiency must lie in [0, 1], got {eta!r}")
    p = dist.probs
    if eta == 1.0:
        return PhotonDistribution(dist.u, p.copy(), dist.tail_bound)
    if eta == 0.0:
        return PhotonDistribution(dist.u, np.array([math.fsum(p)]), dist.tail_bound)
    m = np.arange(p.size, dtype=float)
    n = m[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        logw = (log_binomial_array(m[None, :], n) + n * math.log(eta)
                + (m[None, :] - n) * math.log1p(-eta))
    kernel = np.where(m[None, :] >= n, np.exp(logw), 0.0)
    out = kernel @ p
    return PhotonDistribution(dist.u, out, dist.tail_bound)


def phase_space_point(fam: AnFamily, alpha: complex) -> complex:
    """``zeta = sqrt(nbar(|alpha|^2)) e^{i arg alpha}``."""
    u = abs(alpha) ** 2
    fam.check_u(u)
    if alpha == 0:
        return 0j
    return math.sqrt(mean_photon_number(fam, u)) * cmath.exp(1j * cmath.phase(alpha))


def mandel_sign_changes(fam: AnFamily, u_grid, method: str = "series"):
    """Zero crossings of ``Q_M`` along an increasing ``u`` grid.

    Each crossing is refined by bisection in ``u``; returns ``(u, nbar)`` pairs.
    """
    u_grid = np.asarray(u_grid, dtype=float)
    q = np.array([moments(fam, x, method).mandel_q for x in u_grid])
    out = []
    for i in np.nonzero(np.sign(q[:-1]) * np.sign(q[1:]) < 0)[0]:
        lo, hi = u_grid[i], u_grid[i + 1]
        s_lo = np.sign(q[i])
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if np.sign(moments(fam, mid, method).mandel_q) == s_lo:
                lo = mid
            else:
                hi = mid
        u_star = 0.5 * (lo + hi)
        out.append((u_star, moments(fam, u_star, method).nbar))
    return out

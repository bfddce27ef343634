"""Helstrom bound for discriminating the vacuum from a coherent state.

For pure states with priors ``xi0``, ``xi1 = 1 - xi0`` and squared overlap
``o = h_0(u)^2`` the minimum error probability is

    P_H = (1 - sqrt(1 - 4 xi0 xi1 o)) / 2.

``Delta(nbar) = h_0(u(nbar))^2 - exp(-nbar)`` compares a family with
Glauber-Sudarshan states at equal mean photon number.  A detector of
efficiency ``eta`` replaces ``nbar`` by ``eta * nbar``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .an_core import AnFamily, invert_nbar, mean_photon_number
from .errors import DomainError


def helstrom_pure(overlap_sq: float, xi0: float = 0.5) -> float:
    """Minimum error probability for two pure states with squared overlap ``overlap_sq``."""
    if not 0.0 <= overlap_sq <= 1.0:
        raise DomainError(f"overlap_sq must lie in [0, 1], got {overlap_sq!r}")
    if not 0.0 < xi0 < 1.0:
        raise DomainError(f"xi0 must lie in (0, 1), got {xi0!r}")
    x = 4.0 * xi0 * (1.0 - xi0) * overlap_sq
    # (1 - sqrt(1 - x)) / 2 without cancellation for small x
    return 0.5 * x / (1.0 + math.sqrt(1.0 - x))


@dataclass(frozen=True)
class HelstromRecord:
    nbar: float
    eta: float
    xi0: float
    overlap_sq: float
    p_h: float
    delta: float


def overlap_of_nbar(fam: AnFamily, nbar: float) -> float:
    """``h_0(u(nbar))^2`` (closed form when the family has one)."""
    o = fam.closed("overlap_of_nbar", nbar)
    if o is None:
        u = invert_nbar(fam, nbar)
        o = fam.h(0, u) ** 2
    return min(max(float(o), 0.0), 1.0)


def helstrom_of_nbar(fam: AnFamily, nbar: float, xi0: float = 0.5, eta: float = 1.0) -> HelstromRecord:
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"eta must lie in (0, 1], got {eta!r}")
    if not nbar >= 0.0:
        raise DomainError(f"nbar must be nonnegative, got {nbar!r}")
    eff = eta * nbar
    o = overlap_of_nbar(fam, eff)
    return HelstromRecord(float(nbar), float(eta), float(xi0), o, helstrom_pure(o, xi0),
                          o - math.exp(-eff))


def delta(fam: AnFamily, nbar: float, eta: float = 1.0) -> float:
    return helstrom_of_nbar(fam, nbar, 0.5, eta).delta


@dataclass(frozen=True)
class SignSummary:
    category: str
    min_delta: float
    max_delta: float
    argmin: float
    argmax: float


def sign_summary(fam: AnFamily, nbar_grid, eta: float = 1.0, tol: float = 1e-12) -> SignSummary:
    """Classify the sign of Delta over a grid.

    Categories: ``all_zero``, ``all_nonpositive``, ``all_nonnegative`` or
    ``mixed``, each up to ``tol``.  Delta depends on ``eta * nbar`` only, so a
    summary at ``eta < 1`` equals the ``eta = 1`` summary on the scaled grid.
    """
    grid = np.asarray(nbar_grid, dtype=float)
    d = np.array([delta(fam, x, eta) for x in grid])
    lo, hi = int(np.argmin(d)), int(np.argmax(d))
    if np.all(np.abs(d) <= tol):
        cat = "all_zero"
    elif d[hi] <= tol:
        cat = "all_nonpositive"
    elif d[lo] >= -tol:
        cat = "all_nonnegative"
    else:
        cat = "mixed"
    return SignSummary(cat, float(d[lo]), float(d[hi]), float(grid[lo]), float(grid[hi]))


@dataclass(frozen=True)
class HbZero:
    nbar: float
    u: float
    residual: float


def find_hb_zeros(fam: AnFamily, nbar_lo: float, nbar_hi: float, dz: float = 0.1) -> list:
    """Mean photon numbers in ``(nbar_lo, nbar_hi)`` where ``h_0`` vanishes.

    The signed ``h_0`` is scanned on a grid uniform in ``z = 2 sqrt(u)`` (the
    Bessel argument), each sign change is bisected in ``u`` until the bracket
    collapses, and ``n̄`` is evaluated at the root.
    """
    if not fam.oscillatory:
        raise DomainError(f"{fam.label()} has no oscillating h_0; zeros need sg or sgm")
    if not 0.0 <= nbar_lo < nbar_hi:
        raise DomainError(f"need 0 <= nbar_lo < nbar_hi, got ({nbar_lo}, {nbar_hi})")
    u_lo = invert_nbar(fam, nbar_lo)
    u_hi = invert_nbar(fam, nbar_hi)
    z_lo, z_hi = 2.0 * math.sqrt(u_lo), 2.0 * math.sqrt(u_hi)
    count = max(2, int(math.ceil((z_hi - z_lo) / dz)) + 1)
    us = (0.5 * np.linspace(z_lo, z_hi, count)) ** 2
    hs = [fam.h(0, float(u)) for u in us]
    out = []
    for i in range(count - 1):
        a, b = float(us[i]), float(us[i + 1])
        ha, hb = hs[i], hs[i + 1]
        if ha == 0.0 or ha * hb >= 0.0:
            continue
        for _ in range(200):
            mid = 0.5 * (a + b)
            if not a < mid < b:
                break
            hm = fam.h(0, mid)
            if hm == 0.0:
                a = b = mid
                break
            if (hm > 0) == (ha > 0):
                a, ha = mid, hm
            else:
                b = mid
        root = a if abs(fam.h(0, a)) <= abs(fam.h(0, b)) else b
        out.append(HbZero(mean_photon_number(fam, root), root, float(abs(fam.h(0, root)))))
    return [z for z in out if nbar_lo < z.nbar < nbar_hi]

"""Gluing a loop libration to a kink tail: shift map, existence function, cases.

The vertex conditions reduce to one scalar equation H(k) = Z, where the
shift a = a(k) is eliminated through sech(a/c2) = k'/dn(L/c1; k).  The
admissible modulus window depends on the loop geometry: for L/c1 > pi/2 a
threshold k0 with K(k0) = L/c1 splits the above-pi window (k0, 1) from the
crossing window (0, k0); for L/c1 <= pi/2 the above-pi window is all of
(0, 1) and there is no crossing branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import EllipticModulus, as_modulus, complete_K, jacobi_sn_cn_dn
from .errors import DomainError, InadmissibleStrengthError
from .profiles import Branch, GraphParams, StationaryState, make_state

WINDOW_SHRINK = 1e-9   # keep K and dn away from their k -> 1 singularities
SCAN_POINTS = 2000
BISECT_TOL = 1e-12


def modulus_threshold_k0(L: float, c1: float) -> float | None:
    """Unique k0 with K(k0) = L/c1, or None when L/c1 <= pi/2 (K(0) = pi/2)."""
    ell = L / c1
    if ell <= math.pi / 2.0:
        return None
    lo, hi = 0.0, 1.0 - 1e-16
    # bisection on the strictly increasing K
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        if complete_K(mid) < ell:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lobe_bound_kl() -> tuple[float, float]:
    """(theta0, k_l): theta0 is the unique zero of T(t) = t cos t - sin t in
    (pi, 3pi/2), and k_l = sqrt((1 + cos theta0)/2) bounds single-lobe moduli."""
    T = lambda t: t * math.cos(t) - math.sin(t)
    lo, hi = math.pi, 1.5 * math.pi
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        if T(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    theta0 = 0.5 * (lo + hi)
    return theta0, math.sqrt((1.0 + math.cos(theta0)) / 2.0)


def shift_map_a(k, g: GraphParams, branch: Branch) -> float:
    """Tail shift a(k) with sech(a/c2) = k'/dn(L/c1; k).

    a = -c2 * log[(dn + k cn)/k'] evaluated at L/c1; negative on the
    above-pi branch, positive on the crossing branch.
    """
    m = as_modulus(k)
    _require_branch_window(m, g, branch)
    _, cn, dn = jacobi_sn_cn_dn(g.ell, m)
    return -g.c2 * math.log((dn + m.k * cn) / m.k_comp)


def existence_function_H(k, g: GraphParams, branch: Branch) -> float:
    """H(k) = sech(a/c2)/(c1 arctan(e^{-a/c2})) * [c1/(2 c2) - k sn(L/c1; k)]
    with a = a(k); roots of H(k) = Z are glued stationary states."""
    m = as_modulus(k)
    a = shift_map_a(m, g, branch)
    sn, _, _ = jacobi_sn_cn_dn(g.ell, m)
    sech = 1.0 / math.cosh(a / g.c2)
    pref = sech / (g.c1 * math.atan(math.exp(-a / g.c2)))
    return pref * (g.c1 / (2.0 * g.c2) - m.k * sn)


def neumann_gluing_F(k, g: GraphParams) -> float:
    """F(k) = k sn(L/c1; k); its level set F = c1/(2 c2) gives the Z = 0
    gluings on the crossing branch."""
    m = as_modulus(k)
    sn, _, _ = jacobi_sn_cn_dn(g.ell, m)
    return m.k * sn


def _require_branch_window(m: EllipticModulus, g: GraphParams, branch: Branch):
    k0 = modulus_threshold_k0(g.L, g.c1)
    if branch is Branch.ABOVE_PI:
        if k0 is not None and m.k <= k0:
            raise DomainError(
                f"above-pi branch needs k > k0 = {k0:.6g}, got k = {m.k:.6g}")
    elif branch is Branch.CROSSING:
        if k0 is None:
            raise DomainError("crossing branch needs L/c1 > pi/2")
        if m.k >= k0:
            raise DomainError(
                f"crossing branch needs k < k0 = {k0:.6g}, got k = {m.k:.6g}")
    else:
        raise DomainError("center branch has no modulus window")


def _k_window(g: GraphParams, branch: Branch) -> tuple[float, float]:
    k0 = modulus_threshold_k0(g.L, g.c1)
    if branch is Branch.ABOVE_PI:
        lo = k0 if k0 is not None else 0.0
        return lo + WINDOW_SHRINK, 1.0 - WINDOW_SHRINK
    if branch is Branch.CROSSING:
        if k0 is None:
            raise DomainError("crossing branch needs L/c1 > pi/2")
        return WINDOW_SHRINK, k0 - WINDOW_SHRINK
    raise DomainError("center branch has no modulus window")


@dataclass(frozen=True)
class ExistenceCase:
    """Classification of (L/c1, c1/(2c2), Z) against the existence case table."""

    regime: str                      # "loop-long" (L/c1 > pi/2) or "loop-short"
    sign_Z: str                      # "pos" | "neg" | "zero"
    case_id: str
    solvable: bool
    admissible_Z_interval: tuple[float, float] | None
    k_window: tuple[float, float]
    note: str = ""


@dataclass(frozen=True)
class SolvedGluing:
    k_Z: EllipticModulus
    a: float
    residual: float
    case: ExistenceCase
    state: StationaryState


@dataclass(frozen=True)
class NoSolution:
    case: ExistenceCase
    reason: str


def _grid_min_H(g: GraphParams, branch: Branch, lo: float, hi: float) -> float:
    ks = np.linspace(lo, hi, SCAN_POINTS)
    return min(existence_function_H(k, g, branch) for k in ks)


def _g_inverse(g: GraphParams, target: float, lo: float, hi: float) -> float:
    """Solve k sn(L/c1;k) = target on [lo, hi] where the map is increasing."""
    f = lambda k: neumann_gluing_F(k, g) - target
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise DomainError("level not bracketed by the modulus window")
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) * flo <= 0:
            hi = mid
        else:
            lo = mid
        flo = f(lo)
    return 0.5 * (lo + hi)


def classify_case(g: GraphParams, branch: Branch = Branch.ABOVE_PI) -> ExistenceCase:
    """Map parameters to the existence case table (above-pi branch) or to the
    Z = 0 crossing-branch criterion.

    Raises InadmissibleStrengthError for Z >= 2/(pi*c2).
    """
    if g.Z >= g.z_max:
        raise InadmissibleStrengthError(
            f"vertex strength Z = {g.Z:.6g} is not below 2/(pi*c2) = {g.z_max:.6g}")
    ratio = g.c1 / (2.0 * g.c2)
    tanh_ell = math.tanh(g.ell)
    k0 = modulus_threshold_k0(g.L, g.c1)
    loop_long = k0 is not None
    regime = "loop-long" if loop_long else "loop-short"
    sign = "pos" if g.Z > 0 else ("neg" if g.Z < 0 else "zero")

    if branch is Branch.CROSSING:
        return _classify_crossing(g, k0, ratio, regime, sign)

    window = _k_window(g, Branch.ABOVE_PI)
    if loop_long:
        h_at_k0 = (4.0 / (math.pi * g.c1)) * (ratio - k0)
        if g.Z > 0:
            if ratio <= k0:
                return ExistenceCase(regime, sign, "3(i)", False, None, window,
                                     "c1/(2c2) <= k0 leaves H(k) < Z for Z > 0")
            case = "1(i)" if ratio >= tanh_ell else "1(ii)"
            return ExistenceCase(regime, sign, case, 0.0 < g.Z < h_at_k0,
                                 (0.0, h_at_k0), window)
        if g.Z < 0:
            if ratio >= tanh_ell:
                return ExistenceCase(regime, sign, "3(ii)", False, None, window,
                                     "c1/(2c2) >= tanh(L/c1) keeps H(k) >= 0")
            if ratio < k0:
                return ExistenceCase(regime, sign, "1(iii)", h_at_k0 < g.Z < 0.0,
                                     (h_at_k0, 0.0), window)
            if ratio == k0:
                m0 = _grid_min_H(g, Branch.ABOVE_PI, *window)
                return ExistenceCase(regime, sign, "1(iv)", m0 < g.Z < 0.0,
                                     (m0, 0.0), window)
            beta = _g_inverse(g, ratio, *window)
            m1 = _grid_min_H(g, Branch.ABOVE_PI, beta, window[1])
            return ExistenceCase(regime, sign, "1(v)", m1 < g.Z < 0.0,
                                 (m1, 0.0), (beta, window[1]))
        solvable = k0 < ratio < tanh_ell
        return ExistenceCase(regime, sign, "1(vi)", solvable, (0.0, 0.0), window,
                             "" if solvable else "Z = 0 needs c1/(2c2) in (k0, tanh(L/c1))")

    # loop-short: L/c1 <= pi/2
    if g.Z > 0:
        return ExistenceCase(regime, sign, "2(i)", True, (0.0, g.z_max), window)
    if g.Z < 0:
        if ratio >= tanh_ell:
            return ExistenceCase(regime, sign, "4(i)", False, None, window,
                                 "c1/(2c2) >= tanh(L/c1) keeps H(k) >= 0")
        beta = _g_inverse(g, ratio, *window)
        m2 = _grid_min_H(g, Branch.ABOVE_PI, beta, window[1])
        return ExistenceCase(regime, sign, "2(ii)", m2 < g.Z < 0.0,
                             (m2, 0.0), (beta, window[1]))
    if ratio < tanh_ell:
        return ExistenceCase(regime, sign, "2(iii)", True, (0.0, 0.0), window)
    return ExistenceCase(regime, sign, "4(ii)", False, None, window,
                         "Z = 0 needs c1/(2c2) < tanh(L/c1)")


def _classify_crossing(g, k0, ratio, regime, sign) -> ExistenceCase:
    if k0 is None:
        return ExistenceCase(regime, sign, "2-crossing", False, None, (0.0, 0.0),
                             "no crossing profiles for L/c1 <= pi/2")
    window = _k_window(g, Branch.CROSSING)
    if g.Z == 0:
        solvable = ratio < k0
        note = "" if solvable else "needs c2 > c1/(2 k0)"
        return ExistenceCase(regime, sign, "exis2", solvable, (0.0, 0.0), window, note)
    if g.Z < 0 and ratio >= k0:
        return ExistenceCase(regime, sign, "exis2-impossible", False, None, window,
                             "Z < 0 with c1/(2c2) >= k0 has no crossing gluing")
    return ExistenceCase(regime, sign, "exis2-open", False, None, window,
                         "crossing branch with Z != 0 is outside the solved cases")


def solve_gluing(g: GraphParams, branch: Branch = Branch.ABOVE_PI,
                 scan_points: int = SCAN_POINTS) -> SolvedGluing | NoSolution:
    """Scan the branch's modulus window for sign changes of H(k) - Z, refine
    each by bisection, and return the root whose loop profile is a valid
    single lobe (for the crossing branch: the root beyond the last zero of F).

    Raises InadmissibleStrengthError for Z >= 2/(pi*c2).
    """
    case = classify_case(g, branch)
    if branch is Branch.CROSSING and g.Z != 0.0:
        return NoSolution(case, case.note or "crossing branch requires Z = 0")
    lo, hi = _k_window(g, branch)
    ks = np.linspace(lo, hi, scan_points)
    vals = np.array([existence_function_H(k, g, branch) - g.Z for k in ks])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    roots: list[float] = []
    for i in idx:
        a_, b_ = ks[i], ks[i + 1]
        fa = vals[i]
        while b_ - a_ > BISECT_TOL:
            mid = 0.5 * (a_ + b_)
            fm = existence_function_H(mid, g, branch) - g.Z
            if fa * fm <= 0:
                b_ = mid
            else:
                a_, fa = mid, fm
        roots.append(0.5 * (a_ + b_))

    candidates = []
    for k in roots:
        a = shift_map_a(k, g, branch)
        state = make_state(g, k, a, branch)
        if state.loop.is_single_lobe():
            candidates.append((k, a, state))
    if not candidates:
        reason = ("no sign change of H(k) - Z in the modulus window"
                  if not roots else
                  "all H(k) = Z roots give multi-lobe loop profiles")
        if not case.solvable and case.note:
            reason = case.note
        return NoSolution(case, reason)
    # beyond the last F zero the single-lobe root is the largest one
    k, a, state = candidates[-1]
    return SolvedGluing(k_Z=as_modulus(k), a=a,
                        residual=abs(state.flux_residual()), case=case, state=state)


def sweep_H(g: GraphParams, branch: Branch, n: int = 400):
    """(k, a(k), H(k)) table over the branch window, for export and plots."""
    lo, hi = _k_window(g, branch)
    ks = np.linspace(lo, hi, n)
    a = np.array([shift_map_a(k, g, branch) for k in ks])
    H = np.array([existence_function_H(k, g, branch) for k in ks])
    return ks, a, H

"""Independent oracles for the test suite.

Everything here deliberately avoids the package's own numerics: elliptic
functions come from scipy.special/mpmath, ODEs from scipy.integrate, and
the graph eigenvalue oracle couples a shot loop ODE to the closed-form
decaying tail solution of the sech^2 well.  These routines are slower but
follow independent code paths, so agreement is meaningful.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq
from scipy.special import ellipj, ellipk


def K_quadrature(k: float) -> float:
    """K(k) by adaptive quadrature of the defining integral (theta form)."""
    val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2),
                  0.0, math.pi / 2.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def sncndn_ode(u: float, k: float):
    """sn, cn, dn by integrating their first-order system from the origin."""
    def rhs(_, y):
        s, c, d = y
        return [c * d, -s * d, -k * k * s * c]
    sol = solve_ivp(rhs, [0.0, u], [0.0, 1.0, 1.0], rtol=1e-12, atol=1e-14)
    return tuple(sol.y[:, -1])


def sncndn_scipy(u, k):
    s, c, d, _ = ellipj(np.asarray(u, dtype=float), k * k)
    return s, c, d


def K_scipy(k: float) -> float:
    return float(ellipk(k * k))


def centered_diff(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def second_diff(f, x, h=1e-5):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


# ---------------------------------------------------------------------------
# closed-form spectral oracles

def robin_tail_ground(a: float, c2: float, Z: float) -> float | None:
    """Ground eigenvalue of -c2^2 g'' + (1 - 2 sech^2((x+a)/c2)) g on (0, inf)
    with g'(0) = -Z g(0), from the decaying solution e^{-kappa y}(tanh y + kappa):
    kappa solves kappa^2 + kappa (tau - Z c2) - (1 - tau^2 + Z c2 tau) = 0,
    tau = tanh(a/c2); the eigenvalue is 1 - kappa^2 when kappa > 0."""
    tau = math.tanh(a / c2)
    b = tau - Z * c2
    c = -(1.0 - tau * tau + Z * c2 * tau)
    disc = b * b - 4.0 * c
    if disc < 0:
        return None
    kappa = 0.5 * (-b + math.sqrt(disc))
    if kappa <= 0 or (tau + kappa) <= 0:
        return None
    return 1.0 - kappa * kappa


def tail_log_derivative(lam: float, a: float, c2: float) -> float:
    """g'(0)/g(0) of the decaying solution of the linearized tail equation."""
    kappa = math.sqrt(1.0 - lam)
    tau = math.tanh(a / c2)
    return (-kappa + (1.0 - tau * tau) / (tau + kappa)) / c2


def graph_ground_shooting(L, c1, c2, Z, a, loop_V, lam_lo=-0.999,
                          lam_hi=-1e-4, n_scan=120) -> float:
    """Ground eigenvalue of the coupled problem: loop -c1^2 f'' + V f = lam f
    with f(-L) = f(L) = g(0), flux f'(L) - f'(-L) = g'(0) + Z g(0), tail the
    kink well with shift a.  Loop solved by solve_ivp, tail in closed form."""
    def mismatch(lam):
        def rhs(x, y):
            return [y[1], (loop_V(x) - lam) / c1**2 * y[0]]
        s_even = solve_ivp(rhs, [-L, L], [1.0, 0.0], rtol=1e-11, atol=1e-13)
        s_slope = solve_ivp(rhs, [-L, L], [0.0, 1.0], rtol=1e-11, atol=1e-13)
        u1, du1 = s_even.y[0, -1], s_even.y[1, -1]
        u2, du2 = s_slope.y[0, -1], s_slope.y[1, -1]
        slope = (1.0 - u1) / u2           # f(-L) = 1, f(L) = 1 = g(0)
        fpL = du1 + slope * du2
        return (fpL - slope) - (tail_log_derivative(lam, a, c2) + Z)

    lams = np.linspace(lam_lo, lam_hi, n_scan)
    vals = [mismatch(l) for l in lams]
    for i in range(len(lams) - 1):
        if np.sign(vals[i]) * np.sign(vals[i + 1]) < 0:
            return brentq(mismatch, lams[i], lams[i + 1], xtol=1e-13)
    raise RuntimeError("no matching root in the scanned window")


def degenerate_ground_closed_form(L, c1, c2, Z) -> float:
    """Same matching for the constant-pi loop, fully closed form:
    f = cos(omega x / c1), omega = sqrt(1 + lam)."""
    def mismatch(lam):
        om = math.sqrt(1.0 + lam)
        arg = om * L / c1
        lhs = -2.0 * (om / c1) * math.sin(arg)
        A = math.cos(arg)
        return lhs - A * (tail_log_derivative(lam, 0.0, c2) + Z)
    return brentq(mismatch, -1.0 + 1e-12, -1e-9, xtol=1e-14)


def periodic_ground_floquet(L, c1, V, lam_lo, lam_hi) -> float:
    """Smallest periodic eigenvalue of -c1^2 f'' + V f on [-L, L] from the
    Floquet discriminant tr(monodromy) = 2."""
    def disc(lam):
        def rhs(x, y):
            return [y[1], (V(x) - lam) / c1**2 * y[0]]
        m1 = solve_ivp(rhs, [-L, L], [1.0, 0.0], rtol=1e-11, atol=1e-13)
        m2 = solve_ivp(rhs, [-L, L], [0.0, 1.0], rtol=1e-11, atol=1e-13)
        return m1.y[0, -1] + m2.y[1, -1] - 2.0
    return brentq(disc, lam_lo, lam_hi, xtol=1e-13)

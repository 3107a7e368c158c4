"""Complete elliptic integral K and Jacobi elliptic functions sn, cn, dn.

K comes from the arithmetic-geometric mean, sn/cn/dn from the descending
Landen transformation driven by the same AGM ladder.  Moduli are scalars;
arguments may be scalars or numpy arrays.  Near the separatrix (k' below
1e-7) the functions cross over to their hyperbolic limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

AGM_TOL = 1e-15
HYPERBOLIC_KCOMP = 1e-7
_MAX_LADDER = 40


@dataclass(frozen=True)
class EllipticModulus:
    """Elliptic modulus k in [0, 1) together with its complement k' = sqrt(1-k^2)."""

    k: float
    k_comp: float

    @classmethod
    def from_k(cls, k: float) -> "EllipticModulus":
        k = float(k)
        if not math.isfinite(k) or not 0.0 <= k < 1.0:
            raise DomainError(f"elliptic modulus must lie in [0, 1), got {k!r}")
        # (1-k)(1+k) keeps full precision for k near 1
        return cls(k, math.sqrt((1.0 - k) * (1.0 + k)))


def as_modulus(k) -> EllipticModulus:
    """Coerce a float or EllipticModulus to EllipticModulus."""
    if isinstance(k, EllipticModulus):
        return k
    return EllipticModulus.from_k(k)


def complete_K(k) -> float:
    """Complete elliptic integral of the first kind, K(k) = AGM quarter period.

    Strictly increasing on [0, 1), K(0) = pi/2, K(k) -> inf as k -> 1.
    """
    m = as_modulus(k)
    a, b = 1.0, m.k_comp
    if b == 0.0:
        raise DomainError("K(k) diverges at k = 1")
    while abs(a - b) > AGM_TOL:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def _ladder(m: EllipticModulus):
    """AGM ladder (a_n, c_n) for the descending Landen transformation."""
    a, b, c = 1.0, m.k_comp, m.k
    avals, cvals = [a], [c]
    n = 0
    while abs(c) > AGM_TOL and n < _MAX_LADDER:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        avals.append(a)
        cvals.append(c)
        n += 1
    return avals, cvals


def jacobi_sn_cn_dn(u, k):
    """Jacobi sn, cn, dn at argument u for modulus k.

    Arguments are reduced modulo the period 4K before evaluation.  Returns a
    triple of floats for scalar u, or a triple of arrays for array u.
    dn is recovered from dn^2 = 1 - k^2 sn^2 (dn >= k' > 0 always).
    """
    m = as_modulus(k)
    u_arr = np.asarray(u, dtype=float)
    scalar = u_arr.ndim == 0
    u_arr = np.atleast_1d(u_arr)
    if not np.all(np.isfinite(u_arr)):
        raise DomainError("elliptic argument must be finite")

    if m.k_comp < HYPERBOLIC_KCOMP:
        sn = np.tanh(u_arr)
        cn = 1.0 / np.cosh(u_arr)
        dn = cn.copy()
    elif m.k < AGM_TOL:
        sn = np.sin(u_arr)
        cn = np.cos(u_arr)
        dn = np.ones_like(u_arr)
    else:
        period = 4.0 * complete_K(m)
        u_red = u_arr - period * np.round(u_arr / period)
        avals, cvals = _ladder(m)
        n = len(avals) - 1
        phi = (2.0**n) * avals[n] * u_red
        while n > 0:
            s = np.clip(cvals[n] * np.sin(phi) / avals[n], -1.0, 1.0)
            phi = 0.5 * (phi + np.arcsin(s))
            n -= 1
        sn = np.sin(phi)
        cn = np.cos(phi)
        dn = np.sqrt(1.0 - (m.k * sn) ** 2)

    if scalar:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn


def shift_identities(u, k):
    """sn, cn, dn at u + K evaluated through the quarter-period shift identities.

    sn(u+K) = cn(u)/dn(u),  cn(u+K) = -k' sn(u)/dn(u),  dn(u+K) = k'/dn(u).
    """
    m = as_modulus(k)
    sn, cn, dn = jacobi_sn_cn_dn(u, m)
    return cn / dn, -m.k_comp * sn / dn, m.k_comp / dn

"""Stationary profiles on the tadpole graph.

The graph is a loop [-L, L] and a half-line attached at a single vertex.
Stationary states glue a loop libration (elliptic-function profile) to a
decaying kink tail 4*arctan(exp(-(x+a)/c2)).  Three loop branches occur:

* ``AbovePi``   -- profile stays above pi on the whole loop (a < 0),
* ``Crossing``  -- profile crosses pi at |x| = b = c1*K(k) (a > 0),
* ``Center``    -- the constant pi solution (degenerate, a = 0).

All evaluation functions accept scalar or array abscissae.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import EllipticModulus, as_modulus, complete_K, jacobi_sn_cn_dn
from .errors import DomainError, InvalidStateError


class Branch(enum.Enum):
    ABOVE_PI = "above-pi"
    CROSSING = "crossing"
    CENTER = "center"

    @classmethod
    def from_str(cls, s: str) -> "Branch":
        for b in cls:
            if b.value == s:
                return b
        raise DomainError(f"unknown branch {s!r}; expected one of "
                          f"{[b.value for b in cls]}")


@dataclass(frozen=True)
class GraphParams:
    """Physical configuration: loop half-length L, wave speeds, vertex strength Z."""

    L: float
    c1: float
    c2: float
    Z: float

    def __post_init__(self):
        if not (self.L > 0 and self.c1 > 0 and self.c2 > 0):
            raise DomainError("L, c1, c2 must all be positive")

    @property
    def z_max(self) -> float:
        """Supremum 2/(pi*c2) of admissible vertex strengths for kink states."""
        return 2.0 / (math.pi * self.c2)

    @property
    def ell(self) -> float:
        """Scaled loop half-length L/c1."""
        return self.L / self.c1


@dataclass(frozen=True)
class KinkTail:
    """Decaying kink 4*arctan(exp(-(x - origin + a)/c2)) on [origin, inf)."""

    a: float
    c2: float
    origin: float = 0.0


def kink_value(tail: KinkTail, x):
    """Kink profile value; strictly decreasing from its vertex value to 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < tail.origin - 1e-12):
        raise DomainError("kink tail evaluated left of its origin")
    v = 4.0 * np.arctan(np.exp(-(x - tail.origin + tail.a) / tail.c2))
    return float(v) if np.ndim(v) == 0 else v


def kink_derivative(tail: KinkTail, x):
    """d/dx of the kink: -(2/c2) sech((x - origin + a)/c2)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < tail.origin - 1e-12):
        raise DomainError("kink tail evaluated left of its origin")
    v = -(2.0 / tail.c2) / np.cosh((x - tail.origin + tail.a) / tail.c2)
    return float(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True)
class LibrationProfile:
    """Even single-lobe loop profile with maximum at x = 0.

    For the Crossing branch, ``b = c1*K(k)`` is the point where the profile
    crosses pi; it is stored at construction rather than re-detected.
    """

    k: EllipticModulus
    c1: float
    L: float
    branch: Branch
    b: float | None = field(default=None)

    @classmethod
    def create(cls, k, c1: float, L: float, branch: Branch) -> "LibrationProfile":
        m = as_modulus(k)
        if branch is Branch.CENTER:
            if m.k != 0.0:
                raise InvalidStateError("center branch is the k = 0 profile")
            return cls(m, c1, L, branch, None)
        K = complete_K(m)
        ell = L / c1
        if branch is Branch.ABOVE_PI and not K > ell:
            raise InvalidStateError(
                f"above-pi branch needs K(k) > L/c1; got K={K:.6g}, L/c1={ell:.6g}")
        if branch is Branch.CROSSING:
            if not K < ell:
                raise InvalidStateError(
                    f"crossing branch needs K(k) < L/c1; got K={K:.6g}, L/c1={ell:.6g}")
            return cls(m, c1, L, branch, c1 * K)
        return cls(m, c1, L, branch, None)

    def is_single_lobe(self, n_check: int = 512) -> bool:
        """Strict monotone decrease on (0, L] checked at grid resolution."""
        if self.branch is Branch.CENTER:
            return True
        xs = np.linspace(self.L / n_check, self.L, n_check)
        return bool(np.all(libration_derivative(self, xs) < 0.0))


def _sn2_arg(p: LibrationProfile, x):
    K = complete_K(p.k)
    sn, _, _ = jacobi_sn_cn_dn(np.asarray(x, dtype=float) / p.c1 + K, p.k)
    return sn * sn


def libration_value(p: LibrationProfile, x):
    """Loop profile value at |x| <= L.

    AbovePi: 2*pi - arccos(-1 + 2 k^2 sn^2(x/c1 + K)); Crossing switches to
    the arccos piece for |x| > b; Center is identically pi.  The arccos
    argument is clamped to [-1, 1] against roundoff.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > p.L * (1 + 1e-12) + 1e-12):
        raise DomainError("loop profile evaluated outside [-L, L]")
    if p.branch is Branch.CENTER:
        v = np.full_like(x, math.pi)
        return float(v) if np.ndim(v) == 0 else v
    arg = np.clip(-1.0 + 2.0 * p.k.k**2 * _sn2_arg(p, x), -1.0, 1.0)
    upper = 2.0 * math.pi - np.arccos(arg)
    if p.branch is Branch.ABOVE_PI:
        v = upper
    else:
        v = np.where(np.abs(x) <= p.b, upper, np.arccos(arg))
    return float(v) if np.ndim(v) == 0 else v


def libration_derivative(p: LibrationProfile, x):
    """Closed-form loop derivative (2k/c1) cn(x/c1 + K; k), valid on both
    pieces of the Crossing branch (one smooth expression across |x| = b)."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > p.L * (1 + 1e-12) + 1e-12):
        raise DomainError("loop profile evaluated outside [-L, L]")
    if p.branch is Branch.CENTER:
        v = np.zeros_like(x)
        return float(v) if np.ndim(v) == 0 else v
    K = complete_K(p.k)
    _, cn, _ = jacobi_sn_cn_dn(x / p.c1 + K, p.k)
    v = (2.0 * p.k.k / p.c1) * cn
    return float(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True)
class StationaryState:
    """Glued (loop libration, kink tail) pair.

    ``energy_E = 2 - 2k^2`` is the loop energy level: the closed-form
    derivative satisfies -(c1^2/2) phi'^2 + 1 - cos(phi) = E pointwise.
    """

    params: GraphParams
    loop: LibrationProfile
    tail: KinkTail
    energy_E: float
    admissible: bool = True

    @property
    def vertex_value(self) -> float:
        return kink_value(self.tail, self.tail.origin)

    def flux_residual(self) -> float:
        """Defect of the vertex flux condition 2 phi1'(L) = psi'(0) + Z psi(0)."""
        g = self.params
        lhs = 2.0 * libration_derivative(self.loop, g.L)
        rhs = kink_derivative(self.tail, self.tail.origin) + g.Z * self.vertex_value
        return lhs - rhs

    def continuity_residual(self) -> float:
        return libration_value(self.loop, self.params.L) - self.vertex_value


def make_state(params: GraphParams, k, a: float, branch: Branch,
               require_continuity: bool = True) -> StationaryState:
    """Assemble a stationary state from loop modulus and tail shift.

    Continuity at the vertex is verified to 1e-10; for the center branch the
    state is representable for any Z but flagged admissible only at
    Z = 2/(pi*c2).
    """
    loop = LibrationProfile.create(k, params.c1, params.L, branch)
    tail = KinkTail(a=a, c2=params.c2, origin=0.0)
    m = loop.k
    state = StationaryState(
        params=params, loop=loop, tail=tail,
        energy_E=2.0 - 2.0 * m.k**2,
        admissible=_is_admissible(params, branch),
    )
    if require_continuity and abs(state.continuity_residual()) > 1e-10:
        raise InvalidStateError(
            f"vertex continuity violated: |phi1(L) - psi(0)| = "
            f"{abs(state.continuity_residual()):.3e}")
    return state


def _is_admissible(params: GraphParams, branch: Branch) -> bool:
    if branch is Branch.CENTER:
        return abs(params.Z - params.z_max) <= 1e-12 * max(1.0, params.z_max)
    return params.Z < params.z_max


def degenerate_state(params: GraphParams) -> StationaryState:
    """The degenerate state (pi, psi_0): constant pi loop with a zero-shift kink."""
    return make_state(params, 0.0, 0.0, Branch.CENTER)


def sample_state(state: StationaryState, d) -> tuple[np.ndarray, np.ndarray]:
    """Sample the state on a Discretization: loop values on [-L, L] and tail
    values on the truncated half-line, vertex value duplicated at loop ends
    and tail start."""
    xl = d.loop_x(state.params)
    xt = d.tail_x()
    loop_vals = libration_value(state.loop, xl)
    tail_vals = kink_value(state.tail, xt)
    loop_vals[0] = loop_vals[-1] = tail_vals[0] = state.vertex_value
    return loop_vals, tail_vals


def tail_potential(state: StationaryState, x):
    """cos(psi_a(x)) = 1 - 2 sech^2((x + a)/c2), used by the spectral layer."""
    x = np.asarray(x, dtype=float)
    v = 1.0 - 2.0 / np.cosh((x - state.tail.origin + state.tail.a) / state.tail.c2) ** 2
    return float(v) if np.ndim(v) == 0 else v


def loop_potential(state: StationaryState, x):
    """cos(phi1(x)) on the loop."""
    v = np.cos(libration_value(state.loop, x))
    return float(v) if np.ndim(v) == 0 else v

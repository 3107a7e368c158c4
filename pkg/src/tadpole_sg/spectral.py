"""Spectra of the vertex-coupled operators on the tadpole graph.

Two operators are discretized on a shared grid: the graph Laplacian
(-c_j^2 d^2/dx^2 with the delta vertex condition) and the linearized
operator -c_j^2 d^2/dx^2 + cos(phi_j) around a stationary state.  With the
unweighted vertex condition f'(L) - f'(-L) = g'(0) + Z g(0), both are
self-adjoint in the edge-weighted inner product sum_j c_j^{-2} int u_j v_j;
the discretization therefore assembles a stiffness-plus-potential matrix A
and a lumped weighted mass M and solves A x = lambda M x.  The vertex is a
single symmetrizable coupling row: stiffness 1/h to its three neighbours,
lumped mass h*(1/c1^2 + 1/(2 c2^2)), and the delta term -Z.

The half-line is truncated at radius R with a Dirichlet closure; discrete
eigenfunctions below the essential edge decay exponentially, so the
truncation error is e^{-sqrt(edge - lambda) R / c2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, NumericalError
from .profiles import (Branch, GraphParams, StationaryState, loop_potential,
                       sample_state, tail_potential)

EDGE_GUARD_FACTOR = 10.0    # eigenvalues within 10*h of the edge are flagged


@dataclass(frozen=True)
class Discretization:
    """Shared grid for the loop [-L, L] and truncated half-line [0, R].

    One spacing h serves both edges: h*(n_loop - 1) = 2L and
    h*(n_tail - 1) = R exactly (R is rounded up to a multiple of h).
    ``coupling_rows`` describes the vertex stencil used by assembly and by
    the time stepper.
    """

    h: float
    n_loop: int
    R: float
    n_tail: int
    coupling_rows: dict = field(default_factory=dict, compare=False)

    @classmethod
    def for_graph(cls, g: GraphParams, h: float | None = None,
                  R: float | None = None) -> "Discretization":
        if h is None:
            h = 1e-3 * min(g.L, g.c2)
        if R is None:
            R = 40.0 * g.c2
        half = max(2, int(round(g.L / h)))
        n_loop = 2 * half + 1
        h_eff = 2.0 * g.L / (n_loop - 1)
        n_tail = int(math.ceil(R / h_eff - 1e-9)) + 1
        R_eff = h_eff * (n_tail - 1)
        coupling = {
            "vertex_mass": h_eff * (1.0 / g.c1**2 + 0.5 / g.c2**2),
            "segment_weight": 1.0 / h_eff,
            "delta_strength": g.Z,
        }
        return cls(h=h_eff, n_loop=n_loop, R=R_eff, n_tail=n_tail,
                   coupling_rows=coupling)

    def refine(self, g: GraphParams) -> "Discretization":
        return Discretization.for_graph(g, h=self.h / 2.0, R=self.R)

    # Degrees of freedom: loop interior, vertex, tail interior (Dirichlet at R).
    @property
    def n_dof(self) -> int:
        return (self.n_loop - 2) + 1 + (self.n_tail - 2)

    @property
    def vertex_index(self) -> int:
        return self.n_loop - 2

    def loop_x(self, g: GraphParams) -> np.ndarray:
        return -g.L + self.h * np.arange(self.n_loop)

    def tail_x(self) -> np.ndarray:
        return self.h * np.arange(self.n_tail)

    def lumped_masses(self, g: GraphParams) -> np.ndarray:
        """Weighted lumped masses: h/c_j^2 at interior points, the combined
        loop/tail half-cells at the vertex."""
        nl = self.n_loop - 2
        mu = np.empty(self.n_dof)
        mu[:nl] = self.h / g.c1**2
        mu[nl] = self.h * (1.0 / g.c1**2 + 0.5 / g.c2**2)
        mu[nl + 1:] = self.h / g.c2**2
        return mu

    def pack(self, loop_vals: np.ndarray, tail_vals: np.ndarray) -> np.ndarray:
        """Full (loop, tail) samples -> reduced DOF vector."""
        if len(loop_vals) != self.n_loop or len(tail_vals) != self.n_tail:
            raise DomainError("grid/state size mismatch")
        return np.concatenate([loop_vals[1:-1], [tail_vals[0]], tail_vals[1:-1]])

    def unpack(self, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Reduced DOF vector -> full (loop, tail) samples with duplicated
        vertex value and the Dirichlet zero at R."""
        nl, iv = self.n_loop - 2, self.vertex_index
        w = q[iv]
        loop = np.concatenate([[w], q[:nl], [w]])
        tail = np.concatenate([[w], q[iv + 1:], [0.0]])
        return loop, tail


def vertex_potentials(state: StationaryState, d: Discretization):
    """(loop potential cos phi1, tail potential cos psi_a) on the grid."""
    xl = d.loop_x(state.params)
    xt = d.tail_x()
    return loop_potential(state, xl), tail_potential(state, xt)


def assemble_operator(g: GraphParams, d: Discretization,
                      v_loop: np.ndarray, v_tail: np.ndarray):
    """Discrete operator pair (A, M) for -c_j^2 d^2/dx^2 + V_j with the delta
    vertex coupling; A is symmetric to roundoff and A x = lambda M x is the
    discrete eigenproblem in the weighted inner product."""
    if len(v_loop) != d.n_loop or len(v_tail) != d.n_tail:
        raise DomainError("grid/state size mismatch in operator assembly")
    h = d.h
    nl, nt = d.n_loop - 2, d.n_tail - 2
    n = d.n_dof
    iv = d.vertex_index
    mu = d.lumped_masses(g)

    # stiffness: every segment contributes 1/h (edge weight c_j^{-2} times c_j^2);
    # the natural tridiagonal already couples the vertex to its tridiagonal
    # neighbours (last loop interior, first tail interior); the loop closes
    # through the long-range vertex <-> first-loop-interior entry
    main = np.full(n, 2.0 / h)
    main[iv] = 3.0 / h
    off = np.full(n - 1, -1.0 / h)
    A = sp.diags([main, off, off], [0, -1, 1], format="lil")
    A[iv, 0] = A[0, iv] = -1.0 / h

    pot = np.empty(n)
    pot[:nl] = v_loop[1:-1]
    pot[iv] = 0.0
    pot[iv + 1:] = v_tail[1:-1]
    d_pot = mu * pot
    # vertex potential lumps both loop half-cells and the tail half-cell
    d_pot[iv] = (h / g.c1**2) * v_loop[-1] + (0.5 * h / g.c2**2) * v_tail[0]
    A = (A + sp.diags(d_pot)).tolil()
    A[iv, iv] -= g.Z
    return A.tocsr(), mu


def _alternating(m: int) -> list[int]:
    """0, m-1, 1, m-2, ... : orders a chain so both ends sit up front."""
    out = []
    lo, hi = 0, m - 1
    while lo <= hi:
        out.append(lo)
        if hi != lo:
            out.append(hi)
        lo += 1
        hi -= 1
    return out


def tadpole_permutation(nl: int, nt: int) -> np.ndarray:
    """DOF ordering that makes the tadpole operator banded with bandwidth 2:
    tail interior from the far end inward, then the vertex, then the loop
    interior alternating from both ends."""
    iv = nl
    perm = [iv + j for j in range(nt, 0, -1)] + [iv] + _alternating(nl)
    return np.array(perm, dtype=np.intp)


def cycle_permutation(n: int) -> np.ndarray:
    """Bandwidth-2 ordering for a cycle: 0, 1, n-1, 2, n-2, ..."""
    return np.array([0] + [1 + i for i in _alternating(n - 1)], dtype=np.intp)


def lowest_eigenpairs(A: sp.spmatrix, mu: np.ndarray, count: int,
                      perm: np.ndarray | None = None, n_vectors: int = 1):
    """Lowest eigenpairs of A x = lambda diag(mu) x.

    The symmetrized matrix diag(mu)^{-1/2} A diag(mu)^{-1/2} is permuted to a
    narrow band (the callers pass a bandwidth-2 ordering); eigenvalues come
    from the LAPACK banded bisection solver (deterministic, no shift to
    guess) and the requested eigenvectors from sparse inverse iteration at
    the computed eigenvalues.
    """
    import scipy.linalg as sla
    import scipy.sparse.linalg as spla

    n = A.shape[0]
    count = min(count, n - 1)
    root = np.sqrt(mu)
    if perm is None:
        perm = np.arange(n, dtype=np.intp)
    inv = np.empty(n, dtype=np.intp)
    inv[perm] = np.arange(n, dtype=np.intp)
    coo = A.tocoo()
    data = coo.data / (root[coo.row] * root[coo.col])
    r, c = inv[coo.row], inv[coo.col]
    upper = c >= r
    bw = int(np.max(c[upper] - r[upper])) if np.any(upper) else 0
    band = np.zeros((bw + 1, n))
    np.add.at(band, (bw - (c[upper] - r[upper]), c[upper]), data[upper])
    try:
        vals = sla.eigvals_banded(band, lower=False, select="i",
                                  select_range=(0, count - 1))
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalError(f"banded eigensolver failed: {exc}") from exc

    B = sp.coo_matrix((data, (r, c)), shape=(n, n)).tocsc()
    scale = float(np.max(np.abs(band)))
    vecs = np.empty((n, n_vectors))
    rng_free = np.cos(0.7 * np.arange(n))          # fixed, nonzero start vector
    for j in range(min(n_vectors, count)):
        shift = vals[j] + 1e-10 * scale
        try:
            lu = spla.splu((B - shift * sp.identity(n, format="csc")).tocsc())
        except RuntimeError as exc:
            raise NumericalError(f"inverse-iteration factorization failed: "
                                 f"{exc}") from exc
        y = rng_free.copy()
        for _ in range(3):
            y = lu.solve(y)
            norm = float(np.linalg.norm(y))
            if not math.isfinite(norm) or norm == 0.0:
                raise NumericalError("inverse iteration broke down")
            y /= norm
        vecs[perm, j] = y
    vecs /= root[:, None]
    return vals, vecs


def tol_zero_for(d: Discretization, v_loop: np.ndarray, v_tail: np.ndarray) -> float:
    vmax = max(np.max(np.abs(v_loop)), np.max(np.abs(v_tail)), 1e-30)
    return max(1e-8, 5.0 * d.h**2 * vmax)


@dataclass(frozen=True)
class SpectrumReport:
    """Discrete point spectrum below the essential edge with index counts.

    ``eigenvalues`` are the Richardson-extrapolated values below the edge
    guard; ``near_edge`` collects values within 10h of the edge (reported,
    not classified).  ``ground_mode`` is the (loop, tail) pair on the report
    grid normalized to unit weighted discrete norm.
    """

    eigenvalues: np.ndarray
    morse_index: int
    kernel_dim: int
    ground_mode: tuple[np.ndarray, np.ndarray] | None
    tol_zero: float
    essential_edge: float
    method: str
    near_edge: np.ndarray = field(default_factory=lambda: np.empty(0))
    h: float = float("nan")
    eigenvalues_h: np.ndarray = field(default_factory=lambda: np.empty(0))
    eigenvalues_h2: np.ndarray = field(default_factory=lambda: np.empty(0))
    embedded: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def lambda0(self) -> float | None:
        return float(self.eigenvalues[0]) if len(self.eigenvalues) else None


@dataclass(frozen=True)
class StabilityVerdict:
    n: int
    kernel_trivial: bool
    verdict: str                 # "LinearlyUnstable" | "Inconclusive"
    predicted_growth: float | None
    spectral_gap: float | None   # observed smallest positive eigenvalue


def _counts(vals: np.ndarray, tol_zero: float) -> tuple[int, int]:
    morse = int(np.sum(vals < -tol_zero))
    kernel = int(np.sum(np.abs(vals) <= tol_zero))
    return morse, kernel


def _report_from_grids(vals_h, vals_h2, edge, guard_h, tol_zero, method,
                       ground, h) -> SpectrumReport:
    nshare = min(len(vals_h), len(vals_h2))
    extrap = (4.0 * vals_h2[:nshare] - vals_h[:nshare]) / 3.0
    keep = extrap < edge - guard_h
    near = extrap[(~keep) & (extrap < edge + guard_h)]
    kept = extrap[keep]
    morse, kernel = _counts(kept, tol_zero)
    return SpectrumReport(
        eigenvalues=kept, morse_index=morse, kernel_dim=kernel,
        ground_mode=ground, tol_zero=tol_zero, essential_edge=edge,
        method=method, near_edge=near, h=h,
        eigenvalues_h=vals_h[:nshare], eigenvalues_h2=vals_h2[:nshare])


def direct_spectrum(state: StationaryState, d: Discretization,
                    count: int = 8) -> SpectrumReport:
    """Lowest eigenpairs of the discrete linearized operator with Richardson
    extrapolation over the h and h/2 grids; essential edge at 1."""
    g = state.params
    vl, vt = vertex_potentials(state, d)
    A, mu = assemble_operator(g, d, vl, vt)
    perm = tadpole_permutation(d.n_loop - 2, d.n_tail - 2)
    vals_h, vecs = lowest_eigenpairs(A, mu, count, perm)

    d2 = d.refine(g)
    vl2, vt2 = vertex_potentials(state, d2)
    A2, mu2 = assemble_operator(g, d2, vl2, vt2)
    perm2 = tadpole_permutation(d2.n_loop - 2, d2.n_tail - 2)
    vals_h2, _ = lowest_eigenpairs(A2, mu2, count, perm2)

    ground_vec = vecs[:, 0]
    ground_vec = ground_vec / math.sqrt(float(ground_vec @ (mu * ground_vec)))
    if ground_vec[d.vertex_index] < 0:
        ground_vec = -ground_vec
    ground = d.unpack(ground_vec)
    tol = tol_zero_for(d, vl, vt)
    return _report_from_grids(vals_h, vals_h2, 1.0, EDGE_GUARD_FACTOR * d.h,
                              tol, "Direct", ground, d.h)


def _line_operator(c: float, h: float, v: np.ndarray, *, periodic: bool,
                   robin_strength: float | None = None):
    """1-D Sturm-Liouville assembly used by both splitting subproblems.

    periodic=True: cycle on len(v)-1 distinct points, plain mass h.
    periodic=False: Robin at the left end (g' = -Z g, weak form term
    -Z c^2 g(0)^2), Dirichlet at the right end, trapezoid mass.
    """
    if periodic:
        n = len(v) - 1
        main = np.full(n, 2.0 * c**2 / h) + h * v[:n]
        off = np.full(n - 1, -c**2 / h)
        A = sp.diags([main, off, off], [0, -1, 1], format="lil")
        A[0, n - 1] = A[n - 1, 0] = -c**2 / h
        return A.tocsr(), np.full(n, h)
    n = len(v) - 1          # drop the Dirichlet end
    mu = np.full(n, h)
    mu[0] = h / 2.0
    main = np.full(n, 2.0 * c**2 / h)
    main[0] = c**2 / h
    off = np.full(n - 1, -c**2 / h)
    A = sp.diags([main, off, off], [0, -1, 1], format="csr")
    A = A + sp.diags(mu * v[:n])
    A = A.tolil()
    A[0, 0] -= robin_strength * c**2
    return A.tocsr(), mu


def _line_spectrum(c, h, v, *, periodic, robin_strength=None, count=8):
    A, mu = _line_operator(c, h, v, periodic=periodic,
                           robin_strength=robin_strength)
    perm = cycle_permutation(A.shape[0]) if periodic else None
    return lowest_eigenpairs(A, mu, count, perm)


def splitting_spectrum(state: StationaryState, d: Discretization,
                       count: int = 8) -> tuple[SpectrumReport, SpectrumReport]:
    """Periodic loop eigenproblem (PBP) and Robin half-line eigenproblem
    (delta BP) for the two diagonal blocks, on the same grids with the same
    machinery as the direct operator."""
    g = state.params
    d2 = d.refine(g)
    reports = []
    for which in ("periodic", "delta"):
        vals = []
        grounds = None
        for dd in (d, d2):
            vl, vt = vertex_potentials(state, dd)
            if which == "periodic":
                v, vecs_ = _line_spectrum(g.c1, dd.h, vl, periodic=True,
                                          count=count)
            else:
                v, vecs_ = _line_spectrum(g.c2, dd.h, vt, periodic=False,
                                          robin_strength=g.Z, count=count)
            vals.append(v)
            if dd is d:
                gv = vecs_[:, 0]
                grounds = gv / np.sqrt(np.sum(dd.h * gv * gv))
        vl, vt = vertex_potentials(state, d)
        tol = tol_zero_for(d, vl, vt)
        edge = math.inf if which == "periodic" else 1.0
        guard = 0.0 if which == "periodic" else EDGE_GUARD_FACTOR * d.h
        nshare = min(len(vals[0]), len(vals[1]))
        extrap = (4.0 * vals[1][:nshare] - vals[0][:nshare]) / 3.0
        keep = extrap < edge - guard
        morse, kernel = _counts(extrap[keep], tol)
        reports.append(SpectrumReport(
            eigenvalues=extrap[keep], morse_index=morse, kernel_dim=kernel,
            ground_mode=(grounds, np.empty(0)) if which == "periodic"
            else (np.empty(0), grounds),
            tol_zero=tol, essential_edge=edge,
            method="splitting-periodic" if which == "periodic" else "splitting-delta",
            near_edge=extrap[(~keep) & (extrap < edge + guard)], h=d.h,
            eigenvalues_h=vals[0][:nshare], eigenvalues_h2=vals[1][:nshare]))
    return reports[0], reports[1]


def transcendental_rho(g: GraphParams) -> float:
    """Unique positive root of G(rho) = rho(2/c1 tanh(rho L/c1) + 1/c2) - Z
    for Z > 0; G is strictly increasing, so bisection on [0, 2 Z c2]."""
    if g.Z <= 0:
        raise DomainError("the graph Laplacian has point spectrum only for Z > 0")
    G = lambda r: r * (2.0 / g.c1 * math.tanh(r * g.L / g.c1) + 1.0 / g.c2) - g.Z
    lo, hi = 0.0, 2.0 * g.Z * g.c2
    while hi - lo > 1e-15 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if G(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def laplacian_eigenfunction(g: GraphParams, rho: float, d: Discretization):
    """(cosh(rho x/c1), cosh(rho L/c1) e^{-rho x'/c2}) sampled on the grid."""
    loop = np.cosh(rho * d.loop_x(g) / g.c1)
    tail = math.cosh(rho * g.L / g.c1) * np.exp(-rho * d.tail_x() / g.c2)
    return loop, tail


def laplacian_point_spectrum(g: GraphParams,
                             d: Discretization | None = None,
                             n_dirichlet: int = 5) -> SpectrumReport:
    """Point spectrum of the graph Laplacian: one negative eigenvalue
    -rho_Z^2 for Z > 0 (none otherwise) plus the loop-localized Dirichlet
    family (n pi c1 / L)^2 embedded in the essential spectrum [0, inf)."""
    if d is None:
        d = Discretization.for_graph(g, h=min(g.L, g.c2) / 200.0)
    embedded = np.array([(n * math.pi * g.c1 / g.L) ** 2
                         for n in range(1, n_dirichlet + 1)])
    if g.Z > 0:
        rho = transcendental_rho(g)
        mode = laplacian_eigenfunction(g, rho, d)
        vec = d.pack(*mode)
        mu = d.lumped_masses(g)
        vec = vec / math.sqrt(float(vec @ (mu * vec)))
        eigs = np.array([-rho * rho])
        ground = d.unpack(vec)
    else:
        eigs = np.empty(0)
        ground = None
    tol = max(1e-8, 5.0 * d.h**2)
    morse, kernel = _counts(eigs, tol)
    return SpectrumReport(
        eigenvalues=eigs, morse_index=morse, kernel_dim=kernel,
        ground_mode=ground, tol_zero=tol, essential_edge=0.0,
        method="analytic", h=d.h, embedded=embedded)


def discrete_laplacian_spectrum(g: GraphParams, d: Discretization,
                                count: int = 4) -> SpectrumReport:
    """Direct FD spectrum of the graph Laplacian (zero potential), for
    cross-checking the transcendental root."""
    zero_l = np.zeros(d.n_loop)
    zero_t = np.zeros(d.n_tail)
    A, mu = assemble_operator(g, d, zero_l, zero_t)
    vals_h, vecs = lowest_eigenpairs(
        A, mu, count, tadpole_permutation(d.n_loop - 2, d.n_tail - 2))
    d2 = d.refine(g)
    A2, mu2 = assemble_operator(g, d2, np.zeros(d2.n_loop), np.zeros(d2.n_tail))
    vals_h2, _ = lowest_eigenpairs(
        A2, mu2, count, tadpole_permutation(d2.n_loop - 2, d2.n_tail - 2))
    gv = vecs[:, 0] / math.sqrt(float(vecs[:, 0] @ (mu * vecs[:, 0])))
    tol = max(1e-8, 5.0 * d.h**2)
    return _report_from_grids(vals_h, vals_h2, 0.0, EDGE_GUARD_FACTOR * d.h,
                              tol, "Direct", d.unpack(gv), d.h)


def lobe_condition_check(state: StationaryState, d: Discretization | None = None,
                         tol: float = 1e-12) -> bool:
    """T(u) = u cos u - sin u must be <= tol on the loop samples and < 0 on
    the tail samples; implied by k <= k_l."""
    if d is None:
        d = Discretization.for_graph(state.params, h=min(state.params.L,
                                                         state.params.c2) / 400.0)
    loop_vals, tail_vals = sample_state(state, d)
    T = lambda u: u * np.cos(u) - np.sin(u)
    # far down the tail T(psi) ~ -psi^3/3 underflows to -0.0, hence the slack
    return bool(np.all(T(loop_vals) <= tol) and np.all(T(tail_vals) < tol))


def quadratic_form_Q(state: StationaryState, d: Discretization,
                     loop_vals: np.ndarray, tail_vals: np.ndarray) -> float:
    """Edge-weighted quadratic form of the linearized operator:

        sum_j [ int (v_j')^2 + c_j^{-2} int cos(phi_j) v_j^2 ] - Z v(0)^2

    by the trapezoid rule on the grid.  The argument must be continuous at
    the vertex (loop ends equal to the tail start)."""
    g = state.params
    if not (abs(loop_vals[0] - tail_vals[0]) <= 1e-10
            and abs(loop_vals[-1] - tail_vals[0]) <= 1e-10):
        raise DomainError("quadratic-form argument is discontinuous at the vertex")
    vl, vt = vertex_potentials(state, d)
    h = d.h
    grad = np.sum(np.diff(loop_vals) ** 2) / h + np.sum(np.diff(tail_vals) ** 2) / h
    wl = np.full(d.n_loop, h); wl[0] = wl[-1] = h / 2.0
    wt = np.full(d.n_tail, h); wt[0] = wt[-1] = h / 2.0
    pot = np.sum(wl * vl * loop_vals**2) / g.c1**2 \
        + np.sum(wt * vt * tail_vals**2) / g.c2**2
    return float(grad + pot - g.Z * tail_vals[0] ** 2)


def weighted_norm_sq(g: GraphParams, d: Discretization,
                     loop_vals: np.ndarray, tail_vals: np.ndarray) -> float:
    """Trapezoid value of the weighted L^2 norm sum_j c_j^{-2} int v_j^2."""
    h = d.h
    wl = np.full(d.n_loop, h); wl[0] = wl[-1] = h / 2.0
    wt = np.full(d.n_tail, h); wt[0] = wt[-1] = h / 2.0
    return float(np.sum(wl * loop_vals**2) / g.c1**2
                 + np.sum(wt * tail_vals**2) / g.c2**2)


def kernel_certificate(state: StationaryState, d: Discretization,
                       report: SpectrumReport | None = None):
    """Trivial-kernel certificate: analytic case from alpha_a = -(1/c2)
    tanh(a/c2) (trivial when alpha_a != -Z, or when alpha_a = -Z with
    Z <= 0), cross-checked against the numerical spectral gap at zero."""
    g = state.params
    alpha_a = -math.tanh(state.tail.a / g.c2) / g.c2
    scale = max(1.0, abs(g.Z))
    if abs(alpha_a + g.Z) > 1e-10 * scale:
        label, analytic = "alpha_a != -Z", True
    elif g.Z <= 0:
        label, analytic = "alpha_a = -Z with Z <= 0", True
    else:
        label, analytic = "alpha_a = -Z with Z > 0 (no analytic case)", False
    if report is None:
        report = direct_spectrum(state, d)
    gap = (float(np.min(np.abs(report.eigenvalues)))
           if len(report.eigenvalues) else math.inf)
    numeric = gap > report.tol_zero
    return (analytic and numeric), label, gap


def stability_verdict(report: SpectrumReport,
                      kernel_trivial: bool | None = None) -> StabilityVerdict:
    """Linear instability when the Morse index is one, the kernel is trivial,
    and the remaining computed spectrum sits above a positive gap."""
    if kernel_trivial is None:
        kernel_trivial = report.kernel_dim == 0
    vals = report.eigenvalues
    positives = vals[vals > report.tol_zero]
    gap = float(positives[0]) if len(positives) else None
    n = report.morse_index
    rest_positive = report.kernel_dim == 0 and len(vals) - n == len(positives)
    if n == 1 and kernel_trivial and rest_positive:
        lam0 = float(vals[0])
        return StabilityVerdict(n, True, "LinearlyUnstable",
                                math.sqrt(-lam0), gap)
    return StabilityVerdict(n, bool(kernel_trivial), "Inconclusive", None, gap)

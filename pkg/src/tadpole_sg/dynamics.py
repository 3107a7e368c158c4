"""Time integration of the sine-Gordon system on the tadpole graph.

First-order form u_t = v, v_t = c_j^2 u_xx - sin(u_j), stepped by leapfrog
(kick-drift-kick) on the same vertex-coupled grid as the spectral layer.
The semi-discrete flow exactly conserves the lumped Hamiltonian

    sum_j c_j^{-2} int [ v^2/2 + c_j^2 (u')^2 / 2 + 1 - cos u ] - (Z/2) u(0)^2

(edge-weighted measure, delta vertex term), so the leapfrog energy error is
a bounded O(dt^2) oscillation.  Deviations from a reference state are
measured in the discrete weighted energy norm

    || (w, v) ||^2 = sum_j int (w')^2 + sum_j c_j^{-2} int (w^2 + v^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .profiles import GraphParams, StationaryState, sample_state
from .spectral import Discretization, SpectrumReport

CFL_SAFETY = 0.9
FIT_LOWER_FACTOR = 10.0     # fit window starts at 10x the seeding amplitude
FIT_UPPER_FLOOR = 1e-2      # ... and ends at max(1e-2, 40x amplitude)
FIT_UPPER_FACTOR = 40.0


@dataclass
class EvolutionState:
    """Field and velocity on the graph at time t (full grids; vertex value
    duplicated at the loop ends and the tail start, Dirichlet zero at R)."""

    u_loop: np.ndarray
    v_loop: np.ndarray
    u_tail: np.ndarray
    v_tail: np.ndarray
    t: float


@dataclass
class EvolutionTrace:
    times: np.ndarray
    deviation_norms: np.ndarray
    energies: np.ndarray
    vertex_values: np.ndarray
    fitted_growth: float | None = None
    fit_window: tuple[float, float] | None = None
    fit_residual: float | None = None
    aborted: bool = False
    final: EvolutionState | None = None
    meta: dict = field(default_factory=dict)


class GraphWave:
    """Spatial right-hand side, energy, and norms for one (params, grid) pair."""

    def __init__(self, g: GraphParams, d: Discretization):
        self.g = g
        self.d = d
        self.h = d.h
        self.nl = d.n_loop - 2
        self.iv = d.vertex_index
        self.mu = d.lumped_masses(g)
        self.vertex_mass = self.mu[self.iv]

    def max_dt(self) -> float:
        return CFL_SAFETY * self.h / max(self.g.c1, self.g.c2)

    def acceleration(self, q: np.ndarray) -> np.ndarray:
        g, h, nl, iv = self.g, self.h, self.nl, self.iv
        a = np.empty_like(q)
        w = q[iv]
        ul = np.concatenate([[w], q[:nl], [w]])
        a[:nl] = g.c1**2 * (ul[2:] - 2.0 * ul[1:-1] + ul[:-2]) / h**2 \
            - np.sin(q[:nl])
        ut = np.concatenate([[w], q[iv + 1:], [0.0]])
        a[iv + 1:] = g.c2**2 * (ut[2:] - 2.0 * ut[1:-1] + ut[:-2]) / h**2 \
            - np.sin(q[iv + 1:])
        stiff = (q[0] + q[nl - 1] + q[iv + 1] - 3.0 * w) / h
        a[iv] = (stiff + g.Z * w) / self.vertex_mass - math.sin(w)
        return a

    def energy(self, q: np.ndarray, p: np.ndarray) -> float:
        nl, iv, h = self.nl, self.iv, self.h
        w = q[iv]
        ul = np.concatenate([[w], q[:nl], [w]])
        grad = np.sum(np.diff(ul) ** 2) / (2.0 * h)
        ut = np.concatenate([[w], q[iv + 1:], [0.0]])
        grad += np.sum(np.diff(ut) ** 2) / (2.0 * h)
        site = np.sum(self.mu * (0.5 * p * p + 1.0 - np.cos(q)))
        return float(grad + site - 0.5 * self.g.Z * w * w)

    def deviation_norm(self, dq: np.ndarray, dp: np.ndarray) -> float:
        nl, iv, h = self.nl, self.iv, self.h
        w = dq[iv]
        ul = np.concatenate([[w], dq[:nl], [w]])
        grad = np.sum(np.diff(ul) ** 2) / h
        ut = np.concatenate([[w], dq[iv + 1:], [0.0]])
        grad += np.sum(np.diff(ut) ** 2) / h
        return math.sqrt(grad + float(np.sum(self.mu * (dq * dq + dp * dp))))

    def pack_state(self, s: EvolutionState) -> tuple[np.ndarray, np.ndarray]:
        if abs(s.u_loop[0] - s.u_tail[0]) > 1e-12 or \
           abs(s.u_loop[-1] - s.u_tail[0]) > 1e-12:
            raise DomainError("evolution state violates vertex continuity")
        return self.d.pack(s.u_loop, s.u_tail), self.d.pack(s.v_loop, s.v_tail)

    def unpack_state(self, q: np.ndarray, p: np.ndarray, t: float) -> EvolutionState:
        ul, ut = self.d.unpack(q)
        vl, vt = self.d.unpack(p)
        return EvolutionState(ul, vl, ut, vt, t)


def step(wave: GraphWave, q: np.ndarray, p: np.ndarray, dt: float,
         accel: np.ndarray | None = None):
    """One kick-drift-kick leapfrog step; returns (q, p, acceleration at q)."""
    if dt > wave.max_dt() * (1.0 + 1e-12):
        raise ConfigurationError(
            f"dt = {dt:.3e} violates the CFL bound {wave.max_dt():.3e}")
    if accel is None:
        accel = wave.acceleration(q)
    p = p + 0.5 * dt * accel
    q = q + dt * p
    accel = wave.acceleration(q)
    p = p + 0.5 * dt * accel
    return q, p, accel


def evolve(wave: GraphWave, initial: EvolutionState, T: float,
           dt: float | None = None, reference: StationaryState | None = None,
           record_every: int = 10,
           stop_deviation: float | None = None) -> EvolutionTrace:
    """Integrate to time T recording deviation norm, energy, and vertex value.

    NaN/overflow aborts the run and returns the trace up to the last valid
    sample (nonlinear blow-up is reported, not hidden).
    """
    if T <= 0:
        raise ConfigurationError("final time must be positive")
    if dt is None:
        dt = wave.max_dt()
    n_steps = max(1, int(math.ceil(T / dt - 1e-12)))
    dt = T / n_steps
    if dt > wave.max_dt() * (1.0 + 1e-12):
        raise ConfigurationError(
            f"dt = {dt:.3e} violates the CFL bound {wave.max_dt():.3e}")

    q, p = wave.pack_state(initial)
    if reference is not None:
        ref_q = wave.d.pack(*sample_state(reference, wave.d))
    else:
        ref_q = q.copy()

    times = [initial.t]
    devs = [wave.deviation_norm(q - ref_q, p)]
    energies = [wave.energy(q, p)]
    vertex = [q[wave.iv]]
    aborted = False
    accel = wave.acceleration(q)
    t = initial.t
    for i in range(n_steps):
        q, p, accel = step(wave, q, p, dt, accel)
        t = initial.t + (i + 1) * dt
        if (i + 1) % record_every == 0 or i == n_steps - 1:
            if not np.all(np.isfinite(q)):
                aborted = True
                break
            times.append(t)
            devs.append(wave.deviation_norm(q - ref_q, p))
            energies.append(wave.energy(q, p))
            vertex.append(q[wave.iv])
            if stop_deviation is not None and devs[-1] >= stop_deviation:
                break
    return EvolutionTrace(
        times=np.array(times), deviation_norms=np.array(devs),
        energies=np.array(energies), vertex_values=np.array(vertex),
        aborted=aborted, final=wave.unpack_state(q, p, t),
        meta={"dt": dt, "h": wave.h,
              "energy_convention": "edge weights 1/c_j^2, vertex term -Z/2 u(0)^2"})


def state_from_stationary(wave: GraphWave, s: StationaryState) -> EvolutionState:
    loop_vals, tail_vals = sample_state(s, wave.d)
    zl = np.zeros_like(loop_vals)
    zt = np.zeros_like(tail_vals)
    return EvolutionState(loop_vals.copy(), zl, tail_vals.copy(), zt, 0.0)


def fit_growth(times: np.ndarray, devs: np.ndarray, amplitude: float):
    """Least-squares slope of log(deviation) on the window where the
    deviation lies in [10*amplitude, max(1e-2, 40*amplitude)]."""
    lower = FIT_LOWER_FACTOR * amplitude
    upper = max(FIT_UPPER_FLOOR, FIT_UPPER_FACTOR * amplitude)
    mask = (devs >= lower) & (devs <= upper)
    if int(np.sum(mask)) < 5:
        return None, None, None
    ts, ys = times[mask], np.log(devs[mask])
    slope, intercept = np.polyfit(ts, ys, 1)
    resid = float(np.sqrt(np.mean((ys - (slope * ts + intercept)) ** 2)))
    return float(slope), (float(ts[0]), float(ts[-1])), resid


def instability_experiment(s: StationaryState, spec: SpectrumReport,
                           d: Discretization, amplitude: float = 1e-4,
                           dt: float | None = None,
                           record_every: int = 5) -> EvolutionTrace:
    """Seed the stationary state with amplitude * (ground mode, 0), evolve,
    and fit the deviation growth rate for comparison with sqrt(-lambda0).

    Requires a Morse-index-one report with its ground mode on the grid d.
    """
    if spec.morse_index != 1 or spec.ground_mode is None:
        raise DomainError("instability experiment needs a Morse-index-1 "
                          "report with a ground mode")
    wave = GraphWave(s.params, d)
    mode_q = d.pack(*spec.ground_mode)
    mode_q = mode_q / wave.deviation_norm(mode_q, np.zeros_like(mode_q))
    base_q = d.pack(*sample_state(s, d))
    q0 = base_q + amplitude * mode_q

    lam0 = spec.lambda0
    sigma_pred = math.sqrt(-lam0) if lam0 is not None and lam0 < 0 else None
    upper = max(FIT_UPPER_FLOOR, FIT_UPPER_FACTOR * amplitude)
    if sigma_pred is not None and amplitude > 0:
        T = (math.log(upper / amplitude) + 3.0) / sigma_pred
    else:
        T = 10.0
    T = min(T, d.R / (2.0 * s.params.c2))   # keep reflections away from the vertex

    ul, ut = d.unpack(q0)
    initial = EvolutionState(ul, np.zeros_like(ul), ut, np.zeros_like(ut), 0.0)
    trace = evolve(wave, initial, T, dt=dt, reference=s,
                   record_every=record_every, stop_deviation=2.0 * upper)
    slope, window, resid = fit_growth(trace.times, trace.deviation_norms,
                                      amplitude)
    trace.fitted_growth = slope
    trace.fit_window = window
    trace.fit_residual = resid
    trace.meta.update({
        "amplitude": amplitude,
        "predicted_growth": sigma_pred,
        "relative_mismatch": (abs(slope - sigma_pred) / sigma_pred
                              if slope is not None and sigma_pred else None),
    })
    return trace

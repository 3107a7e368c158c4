"""Command-line front door: profile, exists, spectrum, evolve, certify.

Each subcommand reads a GraphParams JSON file, writes CSV/JSON results plus
PNG figures into the output directory, and exits 0 on success, 2 on
inadmissible parameters, 3 on numerical failure.  All numerical defaults
(h, R, tol_zero rule, energy convention) are recorded in a metadata block
of every JSON output, and identical manifests produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import report
from .dynamics import GraphWave, instability_experiment
from .errors import (ConfigurationError, DomainError, InadmissibleStrengthError,
                     InvalidStateError, NumericalError)
from .existence import (NoSolution, SolvedGluing, classify_case,
                        existence_function_H, lobe_bound_kl,
                        modulus_threshold_k0, shift_map_a, solve_gluing, sweep_H)
from .profiles import (Branch, GraphParams, StationaryState, degenerate_state,
                       kink_derivative, kink_value, libration_derivative,
                       libration_value, make_state, sample_state)
from .spectral import (Discretization, direct_spectrum, kernel_certificate,
                       laplacian_point_spectrum, lobe_condition_check,
                       splitting_spectrum, stability_verdict)

EXIT_OK = 0
EXIT_INADMISSIBLE = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class RunManifest:
    """Deterministic description of one CLI run (no RNG anywhere)."""

    command: str
    params: GraphParams
    branch: str = "above-pi"
    k: str | float = "auto"
    grid_h: float | None = None
    grid_R: float | None = None
    output_dir: str = "out"
    amplitude: float = 1e-4
    evolve_check: bool = False

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["params"] = dataclasses.asdict(self.params)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        d = dict(d)
        d["params"] = GraphParams(**d["params"])
        return cls(**d)

    def to_json(self) -> str:
        return "".join(report._iterencode_17(self.to_dict()))

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls.from_dict(json.loads(text))


def load_params(path: str) -> GraphParams:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return GraphParams(L=float(payload["L"]), c1=float(payload["c1"]),
                       c2=float(payload["c2"]), Z=float(payload["Z"]))


def _metadata(g: GraphParams, d: Discretization | None) -> dict:
    meta = {
        "params": {"L": g.L, "c1": g.c1, "c2": g.c2, "Z": g.Z},
        "defaults": {
            "h_rule": "1e-3*min(L, c2) unless overridden",
            "R_rule": "40*c2 unless overridden",
            "tol_zero_rule": "max(1e-8, 5*h^2*max|potential|)",
            "energy_convention":
                "edge weights 1/c_j^2, vertex term -Z/2 u(0)^2",
        },
    }
    if d is not None:
        meta["grid"] = {"h": d.h, "n_loop": d.n_loop, "R": d.R,
                        "n_tail": d.n_tail}
    return meta


def _resolve_state(manifest: RunManifest):
    """Build the stationary state requested by the manifest.

    Returns (state, gluing: SolvedGluing | None, case dict | None).
    """
    g = manifest.params
    branch = Branch.from_str(manifest.branch)
    if branch is Branch.CENTER:
        state = degenerate_state(g)
        if not state.admissible:
            raise InadmissibleStrengthError(
                f"the degenerate state needs Z = 2/(pi*c2) = {g.z_max:.12g}, "
                f"got Z = {g.Z:.12g}")
        return state, None, {"case_id": "degenerate", "solvable": True}
    if manifest.k == "auto":
        result = solve_gluing(g, branch)
        if isinstance(result, NoSolution):
            raise InadmissibleStrengthError(
                f"no single-lobe kink state: case {result.case.case_id}: "
                f"{result.reason}")
        return result.state, result, _case_dict(result.case)
    k = float(manifest.k)
    a = shift_map_a(k, g, branch)
    state = make_state(g, k, a, branch)
    return state, None, _case_dict(classify_case(g, branch))


def _case_dict(case) -> dict:
    return {
        "regime": case.regime, "sign_Z": case.sign_Z, "case_id": case.case_id,
        "solvable": case.solvable,
        "admissible_Z_interval": list(case.admissible_Z_interval)
        if case.admissible_Z_interval is not None else None,
        "k_window": list(case.k_window), "note": case.note,
    }


def _grid(manifest: RunManifest, g: GraphParams) -> Discretization:
    return Discretization.for_graph(g, h=manifest.grid_h, R=manifest.grid_R)


def cmd_profile(manifest: RunManifest) -> int:
    g = manifest.params
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    state, gluing, case = _resolve_state(manifest)
    d = _grid(manifest, g)
    xl = d.loop_x(g)
    xt = d.tail_x()
    loop_vals, tail_vals = sample_state(state, d)
    loop_der = libration_derivative(state.loop, xl)
    tail_der = kink_derivative(state.tail, xt)
    x = np.concatenate([xl, g.L + xt])
    vals = np.concatenate([loop_vals, tail_vals])
    ders = np.concatenate([loop_der, tail_der])
    report.write_csv(out / "profile.csv", ["x", "value", "derivative"],
                     [x, vals, ders])
    meta = _metadata(g, d)
    meta.update({
        "manifest": manifest.to_dict(),
        "k": state.loop.k.k, "a": state.tail.a, "E": state.energy_E,
        "branch": state.loop.branch.value,
        "b": state.loop.b,
        "case": case,
        "vertex_value": state.vertex_value,
        "flux_residual": state.flux_residual(),
    })
    report.write_json(out / "profile.json", meta)
    report.fig_profile(out / "profile.png", xl, loop_vals, g.L + xt, tail_vals,
                       f"single-lobe state, k={state.loop.k.k:.6g}")
    return EXIT_OK


def cmd_exists(manifest: RunManifest) -> int:
    g = manifest.params
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    branch = Branch.from_str(manifest.branch)
    if branch is Branch.CENTER:
        raise DomainError("existence sweeps need a non-degenerate branch")
    case = classify_case(g, branch)
    ks, a_vals, H_vals = sweep_H(g, branch, n=2000)
    labels = np.array([case.case_id] * len(ks))
    report.write_csv(out / "sweep.csv", ["k", "a", "H", "case"],
                     [ks, a_vals, H_vals, labels])
    result = solve_gluing(g, branch)
    roots_payload: dict = {"roots": [], "selected": None}
    if isinstance(result, SolvedGluing):
        roots_payload["selected"] = {
            "k": result.k_Z.k, "a": result.a, "residual": result.residual}
    # every sign change of H - Z, including multi-lobe rejects, goes in the file
    sign = np.sign(H_vals - g.Z)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    from scipy.optimize import brentq
    for i in idx:
        r = brentq(lambda k: existence_function_H(k, g, branch) - g.Z,
                   ks[i], ks[i + 1], xtol=1e-13)
        state = make_state(g, r, shift_map_a(r, g, branch), branch)
        roots_payload["roots"].append(
            {"k": r, "a": state.tail.a,
             "single_lobe": state.loop.is_single_lobe()})
    meta = _metadata(g, None)
    meta.update({"manifest": manifest.to_dict(), "case": _case_dict(case),
                 "k0": modulus_threshold_k0(g.L, g.c1),
                 "theta0_kl": list(lobe_bound_kl())})
    meta.update(roots_payload)
    report.write_json(out / "roots.json", meta)
    report.fig_sweep(out / "sweep.png", ks, a_vals, H_vals, g.Z,
                     [r["k"] for r in roots_payload["roots"]],
                     f"existence sweep, {branch.value}, Z={g.Z:.6g}")
    return EXIT_OK


def _spectrum_payload(rep) -> dict:
    return {
        "eigenvalues": list(rep.eigenvalues),
        "morse_index": rep.morse_index,
        "kernel_dim": rep.kernel_dim,
        "tol_zero": rep.tol_zero,
        "essential_edge": (rep.essential_edge
                           if math.isfinite(rep.essential_edge) else None),
        "method": rep.method,
        "near_edge": list(rep.near_edge),
        "h": rep.h,
    }


def cmd_spectrum(manifest: RunManifest) -> int:
    g = manifest.params
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    state, gluing, case = _resolve_state(manifest)
    d = _grid(manifest, g)
    direct = direct_spectrum(state, d)
    per, delta = splitting_spectrum(state, d)
    trivial, label, gap = kernel_certificate(state, d, direct)
    verdict = stability_verdict(direct, trivial)
    payload = _metadata(g, d)
    payload.update({
        "manifest": manifest.to_dict(),
        "k": state.loop.k.k, "a": state.tail.a, "case": case,
        "direct": _spectrum_payload(direct),
        "splitting_periodic": _spectrum_payload(per),
        "splitting_delta": _spectrum_payload(delta),
        "kernel": {"trivial": trivial, "analytic_case": label,
                   "spectral_gap_at_zero": gap},
        "verdict": {"n": verdict.n, "kernel_trivial": verdict.kernel_trivial,
                    "verdict": verdict.verdict,
                    "predicted_growth": verdict.predicted_growth,
                    "spectral_gap": verdict.spectral_gap},
        "lobe_condition": lobe_condition_check(state),
    })
    report.write_json(out / "spectrum.json", payload)
    if direct.ground_mode is not None:
        gl, gt = direct.ground_mode
        report.write_csv(out / "ground_mode.csv", ["x", "mode"],
                         [np.concatenate([d.loop_x(g), g.L + d.tail_x()]),
                          np.concatenate([gl, gt])])
    report.fig_spectrum(out / "spectrum.png", direct, d.loop_x(g),
                        g.L + d.tail_x(), "linearized operator spectrum")
    return EXIT_OK


def cmd_evolve(manifest: RunManifest) -> int:
    g = manifest.params
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    state, gluing, case = _resolve_state(manifest)
    d = _grid(manifest, g)
    spec = direct_spectrum(state, d)
    trace = instability_experiment(state, spec, d,
                                   amplitude=manifest.amplitude)
    report.write_csv(out / "trace.csv", ["t", "deviation", "energy"],
                     [trace.times, trace.deviation_norms, trace.energies])
    payload = _metadata(g, d)
    payload.update({
        "manifest": manifest.to_dict(),
        "fitted_growth": trace.fitted_growth,
        "predicted_growth": trace.meta.get("predicted_growth"),
        "relative_mismatch": trace.meta.get("relative_mismatch"),
        "fit_window": list(trace.fit_window) if trace.fit_window else None,
        "fit_residual": trace.fit_residual,
        "amplitude": manifest.amplitude,
        "aborted": trace.aborted,
        "dt": trace.meta.get("dt"),
    })
    report.write_json(out / "evolve.json", payload)
    report.fig_trace(out / "trace.png", trace, "seeded-mode instability run")
    return EXIT_OK


def cmd_certify(manifest: RunManifest) -> int:
    g = manifest.params
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    state, gluing, case = _resolve_state(manifest)
    d = _grid(manifest, g)
    direct = direct_spectrum(state, d)
    per, delta = splitting_spectrum(state, d)
    trivial, label, gap = kernel_certificate(state, d, direct)
    verdict = stability_verdict(direct, trivial)
    payload = _metadata(g, d)
    payload.update({
        "manifest": manifest.to_dict(),
        "case": case,
        "k": state.loop.k.k, "a": state.tail.a,
        "flux_residual": state.flux_residual(),
        "lobe_condition": lobe_condition_check(state),
        "direct": _spectrum_payload(direct),
        "splitting_periodic": _spectrum_payload(per),
        "splitting_delta": _spectrum_payload(delta),
        "kernel": {"trivial": trivial, "analytic_case": label,
                   "spectral_gap_at_zero": gap},
        "verdict": {"n": verdict.n, "kernel_trivial": verdict.kernel_trivial,
                    "verdict": verdict.verdict,
                    "predicted_growth": verdict.predicted_growth,
                    "spectral_gap": verdict.spectral_gap},
    })
    if manifest.evolve_check and verdict.verdict == "LinearlyUnstable":
        trace = instability_experiment(state, direct, d,
                                       amplitude=manifest.amplitude)
        payload["evolution_check"] = {
            "fitted_growth": trace.fitted_growth,
            "predicted_growth": trace.meta.get("predicted_growth"),
            "relative_mismatch": trace.meta.get("relative_mismatch"),
        }
    report.write_json(out / "certificate.json", payload)
    return EXIT_OK


def cmd_laplacian(manifest: RunManifest) -> int:
    """Point spectrum of the graph Laplacian (delta coupling, no potential)."""
    g = manifest.params
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rep = laplacian_point_spectrum(g)
    payload = _metadata(g, None)
    payload.update({"manifest": manifest.to_dict(),
                    "spectrum": _spectrum_payload(rep),
                    "embedded_dirichlet": list(rep.embedded)})
    report.write_json(out / "laplacian.json", payload)
    return EXIT_OK


_COMMANDS = {
    "profile": cmd_profile,
    "exists": cmd_exists,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "certify": cmd_certify,
    "laplacian": cmd_laplacian,
}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--params", required=True,
                   help="JSON file with L, c1, c2, Z")
    p.add_argument("--k", default="auto",
                   help="loop modulus, or 'auto' to solve the gluing")
    p.add_argument("--branch", default="above-pi",
                   choices=["above-pi", "crossing", "center"])
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--grid-h", type=float, default=None)
    p.add_argument("--grid-R", type=float, default=None)
    p.add_argument("--amplitude", type=float, default=1e-4)
    p.add_argument("--evolve", action="store_true",
                   help="certify only: append a seeded-mode evolution check")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--sweep", default=None,
                   help="JSON list of parameter files; runs each into its own "
                        "subdirectory")


def build_manifest(args, command: str) -> RunManifest:
    k = args.k if args.k == "auto" else float(args.k)
    return RunManifest(
        command=command, params=load_params(args.params), branch=args.branch,
        k=k, grid_h=args.grid_h, grid_R=args.grid_R, output_dir=args.out,
        amplitude=args.amplitude, evolve_check=args.evolve)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tadpole-sg",
        description="single-lobe kink states of sine-Gordon on a tadpole graph")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        _add_common(sub.add_parser(name))
    args = parser.parse_args(argv)

    import matplotlib
    if args.no_figures:
        # stub out the figure writers; delimited output is unaffected
        for name in ("fig_profile", "fig_sweep", "fig_spectrum", "fig_trace"):
            setattr(report, name, lambda *a, **kw: None)

    try:
        if args.sweep is not None:
            entries = json.loads(Path(args.sweep).read_text(encoding="utf-8"))
            base_out = Path(args.out)
            code = EXIT_OK
            for i, entry in enumerate(entries):
                sub_args = argparse.Namespace(**vars(args))
                sub_args.params = entry
                sub_args.out = str(base_out / f"run_{i:03d}")
                sub_args.sweep = None
                manifest = build_manifest(sub_args, args.command)
                code = max(code, _COMMANDS[args.command](manifest))
            return code
        manifest = build_manifest(args, args.command)
        return _COMMANDS[args.command](manifest)
    except (InadmissibleStrengthError, InvalidStateError, DomainError,
            ConfigurationError) as exc:
        print(f"inadmissible parameters: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

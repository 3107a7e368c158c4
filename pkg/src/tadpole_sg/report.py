"""Delimited output and figure rendering for the CLI.

JSON is written with stable key order and floats fixed to 17 significant
digits, so identical runs produce byte-identical files.  CSV uses a header
row, comma separators, and LF line endings.  Each report can also be
rendered to a PNG next to the delimited file.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


class _Float17Encoder(json.JSONEncoder):
    def iterencode(self, o, _one_shot=False):
        return _iterencode_17(o)


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _iterencode_17(o):
    if isinstance(o, float):
        yield _format_float(o)
    elif isinstance(o, dict):
        yield "{"
        first = True
        for k in sorted(o):
            if not first:
                yield ", "
            first = False
            yield json.dumps(str(k))
            yield ": "
            yield from _iterencode_17(o[k])
        yield "}"
    elif isinstance(o, (list, tuple)):
        yield "["
        first = True
        for v in o:
            if not first:
                yield ", "
            first = False
            yield from _iterencode_17(v)
        yield "]"
    else:
        yield json.dumps(o)


def write_json(path: Path, payload: dict) -> None:
    text = "".join(_iterencode_17(_jsonable(payload)))
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = zip(*[np.asarray(c) for c in columns])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_float(float(v)) if isinstance(v, (float, np.floating))
                             else v for v in row])


def read_csv_columns(path: Path) -> dict[str, np.ndarray]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                cols[name].append(value)
    out = {}
    for name, values in cols.items():
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values)
    return out


# ---------------------------------------------------------------------------
# figures

def fig_profile(path: Path, x_loop, loop_vals, x_tail_graph, tail_vals,
                title: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x_loop, loop_vals, lw=1.8, label="loop")
    ax.plot(x_tail_graph, tail_vals, lw=1.8, label="half-line")
    ax.axhline(math.pi, color="gray", lw=0.6, ls="--")
    ax.set_xlabel("x")
    ax.set_ylabel("profile")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_sweep(path: Path, ks, a_vals, H_vals, Z: float, roots,
              title: str) -> None:
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    axes[0].plot(ks, H_vals, lw=1.5)
    axes[0].axhline(Z, color="crimson", lw=0.8, ls="--", label="Z")
    for r in roots:
        axes[0].axvline(r, color="k", lw=0.6, ls=":")
    axes[0].set_ylabel("H(k)")
    axes[0].legend(frameon=False)
    axes[1].plot(ks, a_vals, lw=1.5, color="darkgreen")
    axes[1].set_xlabel("k")
    axes[1].set_ylabel("a(k)")
    axes[0].set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_spectrum(path: Path, report, x_loop, x_tail_graph, title: str) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    eigs = np.asarray(report.eigenvalues)
    axes[0].stem(eigs, np.ones_like(eigs))
    axes[0].axvline(0.0, color="gray", lw=0.6)
    if np.isfinite(report.essential_edge):
        axes[0].axvline(report.essential_edge, color="crimson", lw=0.8, ls="--")
    axes[0].set_xlabel("eigenvalue")
    axes[0].set_title("point spectrum")
    if report.ground_mode is not None:
        gl, gt = report.ground_mode
        if len(gl):
            axes[1].plot(x_loop[:len(gl)], gl, lw=1.5, label="loop")
        if len(gt):
            axes[1].plot(x_tail_graph[:len(gt)], gt, lw=1.5, label="half-line")
        axes[1].legend(frameon=False)
    axes[1].set_xlabel("x")
    axes[1].set_title("ground mode")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_trace(path: Path, trace, title: str) -> None:
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    axes[0].semilogy(trace.times, trace.deviation_norms, lw=1.5)
    if trace.fitted_growth is not None and trace.fit_window is not None:
        t0, t1 = trace.fit_window
        ts = np.linspace(t0, t1, 50)
        i0 = int(np.argmin(np.abs(trace.times - t0)))
        ref = trace.deviation_norms[i0]
        axes[0].semilogy(ts, ref * np.exp(trace.fitted_growth * (ts - t0)),
                         "--", color="crimson",
                         label=f"fit sigma={trace.fitted_growth:.4f}")
        axes[0].legend(frameon=False)
    axes[0].set_ylabel("deviation norm")
    e0 = trace.energies[0]
    scale = abs(e0) if e0 != 0 else 1.0
    axes[1].plot(trace.times, (trace.energies - e0) / scale, lw=1.2)
    axes[1].set_xlabel("t")
    axes[1].set_ylabel("relative energy drift")
    axes[0].set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

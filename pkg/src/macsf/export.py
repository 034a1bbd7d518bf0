"""CSV and SVG writers.  Floats are written with ``repr`` so output is byte-stable."""

import csv

import numpy as np

from .curve import grid_angles, radius_of_curvature, reconstruct
from .flow import _psi_grid
from .normalized import summarize


def _fmt(x):
    return repr(float(x))


def _writer(path):
    fh = open(path, "w", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def write_trace_csv(trace, path):
    """One row per grid point per record: ``t,theta,S,k,kbar``."""
    n = trace.states[0].S.n
    theta = grid_angles(n)
    psi = _psi_grid(trace.coeffs, n)
    fh, w = _writer(path)
    with fh:
        w.writerow(["t", "theta", "S", "k", "kbar"])
        for state in trace.states:
            q = radius_of_curvature(state.S)
            with np.errstate(divide="ignore"):
                k = np.where(q > 0, 1.0 / np.where(q > 0, q, 1.0), np.nan)
            kbar = k + psi
            t = _fmt(state.t)
            for i in range(n):
                w.writerow([t, _fmt(theta[i]), _fmt(state.S.values[i]), _fmt(k[i]), _fmt(kbar[i])])


def write_summary_csv(trace, path):
    """One row per record: ``t,area,length,k_min,k_max,kbar_min,diameter``."""
    fh, w = _writer(path)
    with fh:
        w.writerow(["t", "area", "length", "k_min", "k_max", "kbar_min", "diameter"])
        for state, d in zip(trace.states, trace.diags):
            w.writerow([_fmt(v) for v in (state.t, d.area, d.length, d.k_min, d.k_max,
                                          d.kbar_min, d.diameter)])


def write_normalized_csv(states, path):
    """``tau,theta,S_tilde,k_tilde`` for every normalized record."""
    n = states[0].S_tilde.n
    theta = grid_angles(n)
    fh, w = _writer(path)
    with fh:
        w.writerow(["tau", "theta", "S_tilde", "k_tilde"])
        for s in states:
            k = 1.0 / radius_of_curvature(s.S_tilde)
            tau = _fmt(s.tau)
            for i in range(n):
                w.writerow([tau, _fmt(theta[i]), _fmt(s.S_tilde.values[i]), _fmt(k[i])])


def write_normalized_summary_csv(states, path):
    """``tau,entropy,circle_deviation,stationarity_residual`` per record."""
    fh, w = _writer(path)
    with fh:
        w.writerow(["tau", "entropy", "circle_deviation", "stationarity_residual"])
        for row in summarize(states):
            w.writerow([_fmt(row.tau), _fmt(row.entropy), _fmt(row.circle_deviation),
                        _fmt(row.stationarity_residual)])


def export_svg(curves, path, margin=0.05, stroke=0.005):
    """Draw each curve as a closed polyline in one equal-scale SVG.

    The view box is the union bounding box grown by ``margin`` about its
    centre; stroke width is ``stroke`` times the box size.  The y axis is
    flipped so the picture has the usual mathematical orientation.
    """
    if not curves:
        raise ValueError("export_svg needs at least one curve")
    pts = [np.asarray(c.points) for c in curves]
    allp = np.vstack(pts)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    center = 0.5 * (lo + hi)
    half = 0.5 * max(float(np.max(hi - lo)), 1e-12) * (1.0 + margin)
    x0, y0 = float(center[0] - half), float(-center[1] - half)
    size = 2.0 * half
    sw = stroke * size
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0!r} {y0!r} {size!r} {size!r}" '
        f'width="600" height="600">',
    ]
    for p in pts:
        closed = np.vstack((p, p[:1]))
        coords = " ".join(f"{x:.6f},{-y:.6f}" for x, y in closed)
        lines.append(f'  <polyline fill="none" stroke="black" stroke-width="{sw:.6g}" points="{coords}"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def trace_curves(trace, count=8):
    """Reconstructed curves for up to ``count`` evenly spaced records (first and last included)."""
    m = len(trace.states)
    idx = sorted(set(np.linspace(0, m - 1, min(count, m)).round().astype(int).tolist()))
    return [reconstruct(trace.states[i].S) for i in idx]

"""Deterministic figure rendering for the four supported kinds.

Every figure is drawn with pinned fonts, a fixed canvas, and no clock or
RNG input, so re-rendering the same job yields byte-identical PNG and SVG
files. Inputs are read-only; outputs are ``<job.output>.png`` and
``<job.output>.svg``.
"""

from __future__ import annotations

import json
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .jobs import JobError, PlotJob

_RC = {
    "font.family": "DejaVu Sans",
    "font.size": 10.0,
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "svg.hashsalt": "plotlab",
    "svg.fonttype": "none",
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.6,
}

_COLORS = {"data": "#1f4e79", "fit": "#c0392b", "guide": "#7f8c8d",
           "envelope": "#27ae60"}


def _read_table(path: str) -> np.ndarray:
    """Load a headered CSV as a structured array; reject empty files."""
    try:
        table = np.genfromtxt(path, delimiter=",", names=True)
    except ValueError as exc:
        raise JobError(f"cannot parse {path}: {exc}") from exc
    if table.shape == () or table.size == 0:
        raise JobError(f"empty series in {path}")
    return np.atleast_1d(table)


def _column(table: np.ndarray, name: str, path: str) -> np.ndarray:
    if table.dtype.names is None or name not in table.dtype.names:
        have = table.dtype.names or ()
        raise JobError(f"missing column {name!r} in {path} "
                       f"(columns: {', '.join(have)})")
    return np.asarray(table[name], dtype=float)


def _positive_series(t, y, path):
    keep = (t > 0) & (y > 0) & np.isfinite(y)
    if np.count_nonzero(keep) < 2:
        raise JobError(f"empty series in {path} (need >= 2 positive samples)")
    return t[keep], y[keep]


def _fit_loglog(t, y, window=None):
    """Least-squares slope of log y vs log t, optionally on a t-window."""
    if window is not None:
        lo, hi = float(window[0]), float(window[1])
        keep = (t >= lo) & (t <= hi)
        if np.count_nonzero(keep) < 2:
            raise JobError(f"fit window [{lo}, {hi}] holds fewer than "
                           "2 samples")
        t, y = t[keep], y[keep]
    slope, intercept = np.polyfit(np.log(t), np.log(y), 1)
    return float(slope), float(intercept), t


def _save(fig, output: str):
    os.makedirs(os.path.dirname(os.path.abspath(output)) or ".",
                exist_ok=True)
    png, svg = output + ".png", output + ".svg"
    fig.savefig(png)
    fig.savefig(svg, metadata={"Date": None})
    plt.close(fig)
    return [png, svg]


def _draw_decay(job: PlotJob, ax):
    path = job.inputs[0]
    table = _read_table(path)
    t = _column(table, "t", path)
    y = _column(table, job.column, path)
    t, y = _positive_series(t, y, path)
    slope, intercept, t_fit = _fit_loglog(t, y, job.params.get("fit_window"))

    ax.loglog(t, y, "o-", color=_COLORS["data"], markersize=3.5,
              label=job.column)
    ax.loglog(t_fit, np.exp(intercept) * t_fit ** slope, "--",
              color=_COLORS["fit"], label=f"fit {slope:+.3f}")
    # guide lines share the fitted curve's value at the window midpoint
    t_mid = float(np.sqrt(t_fit[0] * t_fit[-1]))
    y_mid = float(np.exp(intercept) * t_mid ** slope)
    for k, s in enumerate(job.reference_slopes):
        ax.loglog(t_fit, y_mid * (t_fit / t_mid) ** s, ":",
                  color=_COLORS["guide"], alpha=0.8 - 0.2 * (k % 2),
                  label=f"slope {s:+.2f}")
    ax.set_xlabel("t")
    ax.set_ylabel(job.column)


def _collect_values(doc, key):
    """Pull a flat list of finite numbers out of one check JSON."""
    if key is not None:
        if key not in doc:
            raise JobError(f"key {key!r} not present in check file")
        vals = doc[key]
        vals = vals if isinstance(vals, list) else [vals]
    else:
        vals = []
        for v in doc.values():
            if isinstance(v, list) and v and all(
                    isinstance(x, (int, float)) for x in v):
                vals.extend(v)
        if not vals and isinstance(doc.get("value"), (int, float)):
            vals = [doc["value"]]
    out = [float(v) for v in vals if np.isfinite(v)]
    return out


def _draw_ratio_hist(job: PlotJob, ax):
    values = []
    for path in job.inputs:
        with open(path) as fh:
            doc = json.load(fh)
        values.extend(_collect_values(doc, job.params.get("key")))
    if not values:
        raise JobError("empty series: no numeric values in the check files")
    bins = int(job.params.get("bins", 20))
    ax.hist(values, bins=bins, color=_COLORS["data"], alpha=0.85,
            edgecolor="white")
    ax.axvline(1.0, color=_COLORS["fit"], linestyle="--", label="ratio = 1")
    ax.set_xlabel("inequality ratio")
    ax.set_ylabel("count")


def _draw_energy_cascade(job: PlotJob, ax):
    path = job.inputs[0]
    table = _read_table(path)
    k = _column(table, "k", path)
    E = _column(table, "E_k", path)
    pos = E > 0
    if np.count_nonzero(pos) < 3:
        raise JobError(f"empty series in {path} "
                       "(need >= 3 positive level energies)")
    k, E = k[pos], E[pos]
    ax.semilogy(k, E, "o-", color=_COLORS["data"], label="E_k")
    # one-step recursion fit log E_{k+1} = b log E_k + log a, iterated
    # forward from the first post-initial level
    if len(E) >= 4:
        x, y = np.log(E[1:-1]), np.log(E[2:])
        b, loga = np.polyfit(x, y, 1)
        fitted = [E[1]]
        for _ in range(len(E) - 2):
            fitted.append(np.exp(loga) * fitted[-1] ** b)
        ax.semilogy(k[1:], fitted, "--", color=_COLORS["fit"],
                    label=f"recursion fit, growth {b:.3f}")
    ax.set_xlabel("level k")
    ax.set_ylabel("truncated energy E_k")


def _envelope_curve(t: np.ndarray, params: dict) -> tuple:
    """Evaluate the envelope named by the job params.

    Two shapes: a decaying power law amplitude * t^exponent, or the
    growing moment bound y0 + prefactor * C * t^growth_exponent.
    """
    if "amplitude" in params:
        a, e = float(params["amplitude"]), float(params["exponent"])
        return a * t ** e, f"envelope {a:.3g} t^{e:+.2f}"
    if "C" in params:
        y0 = float(params.get("y0", 0.0))
        c = float(params["C"])
        pref = float(params.get("prefactor", 1.5))
        ge = float(params.get("growth_exponent", 2.0 / 3.0))
        return y0 + pref * c * t ** ge, "moment envelope"
    raise JobError("envelope jobs need params.amplitude/exponent "
                   "or params.C (+ optional y0)")


def _draw_envelope(job: PlotJob, ax):
    path = job.inputs[0]
    table = _read_table(path)
    t = _column(table, "t", path)
    y = _column(table, job.column, path)
    t, y = _positive_series(t, y, path)
    env, env_label = _envelope_curve(t, job.params)
    decaying = "amplitude" in job.params
    draw = ax.loglog if decaying else ax.plot
    draw(t, y, "o-", color=_COLORS["data"], markersize=3.5,
         label=job.column)
    draw(t, env, "--", color=_COLORS["envelope"], label=env_label)
    ax.set_xlabel("t")
    ax.set_ylabel(job.column)


_DRAW = {
    "decay": _draw_decay,
    "ratio_hist": _draw_ratio_hist,
    "energy_cascade": _draw_energy_cascade,
    "envelope": _draw_envelope,
}


def render(job: PlotJob):
    """Render one job; returns the list of files written (PNG then SVG)."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        _DRAW[job.kind](job, ax)
        if job.title:
            ax.set_title(job.title)
        ax.legend(loc="best", fontsize=9)
        fig.tight_layout()
        return _save(fig, job.output)

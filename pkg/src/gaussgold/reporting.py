"""Report emission: versioned JSON, CSV plot data, and rendered figures.

Every command writes a JSON report with a fixed shape::

    {"schema": 1, "command": ..., "parameters": {...}, "results": {...},
     "artifacts": [...], "timestamp": "..."}

Keys are sorted and floats serialized with repr, so two runs with the
same configuration and seed produce byte-identical files except for the
timestamp line.  CSV files carry plot-ready columns; figure helpers
render the same data to PNG with the non-interactive Agg backend.
"""

from __future__ import annotations

import csv
import datetime
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "write_json_report",
    "write_csv",
    "figure_histogram",
    "figure_series",
    "figure_heatmap",
    "figure_scatter",
]

SCHEMA_VERSION = 1


def _jsonable(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json_report(
    path: str | Path,
    command: str,
    parameters: dict[str, Any],
    results: dict[str, Any],
    artifacts: Sequence[str] = (),
) -> dict[str, Any]:
    """Write the versioned report; returns the document (with timestamp)."""
    doc = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "parameters": _jsonable(parameters),
        "results": _jsonable(results),
        "artifacts": sorted(str(a) for a in artifacts),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    text = json.dumps(doc, sort_keys=True, indent=2)
    Path(path).write_text(text + "\n")
    return doc


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(list(header))
        for row in rows:
            out.writerow(["%.17g" % v if isinstance(v, float) else v for v in row])


def _finish(fig, path: str | Path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def figure_histogram(
    path: str | Path,
    edges: Sequence[float],
    counts: Sequence[int],
    title: str,
    xlabel: str,
    log_x: bool = False,
) -> str:
    """Bar chart over possibly uneven bins given by consecutive edges."""
    fig, ax = plt.subplots(figsize=(6, 4))
    edges = np.asarray(edges, dtype=float)
    widths = np.diff(edges)
    ax.bar(edges[:-1], counts, width=widths, align="edge",
           edgecolor="black", linewidth=0.5)
    if log_x:
        ax.set_xscale("symlog")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("targets")
    ax.set_title(title)
    return _finish(fig, path)


def figure_series(
    path: str | Path,
    xs: Sequence[float],
    ys: Sequence[float],
    title: str,
    xlabel: str,
    ylabel: str,
    loglog: bool = False,
    fit: tuple[float, float] | None = None,
) -> str:
    """One line with markers; optional power-law fit overlay (slope, intercept)
    interpreted in log2-log2 coordinates when loglog is set."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, "o-", label=ylabel)
    if loglog:
        ax.set_xscale("log", base=2)
        ax.set_yscale("log", base=2)
    if fit is not None:
        slope, intercept = fit
        xs_arr = np.asarray(xs, dtype=float)
        ax.plot(xs_arr, 2.0 ** (intercept + slope * np.log2(xs_arr)), "--",
                label=f"slope {slope:.3f}")
        ax.legend()
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _finish(fig, path)


def figure_heatmap(
    path: str | Path,
    values: np.ndarray,
    title: str,
    extent: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0),
    log_scale: bool = False,
) -> str:
    """|values| as an image; frequency-style axes (row -> x, column -> y)."""
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    mag = np.abs(values)
    if log_scale:
        mag = np.log10(mag + 1e-16)
    im = ax.imshow(mag.T, origin="lower", extent=extent, aspect="auto",
                   cmap="viridis", interpolation="nearest")
    fig.colorbar(im, ax=ax)
    ax.set_xlabel("xi1")
    ax.set_ylabel("xi2")
    ax.set_title(title)
    return _finish(fig, path)


def figure_scatter(
    path: str | Path,
    xs: Sequence[float],
    ys: Sequence[float],
    title: str,
    xlabel: str,
    ylabel: str,
    hline: float | None = None,
) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, ".", markersize=3, alpha=0.6)
    if hline is not None:
        ax.axhline(hline, color="red", linewidth=1.0, linestyle="--")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _finish(fig, path)

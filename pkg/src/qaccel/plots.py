"""Figure rendering for verification reports.

Renders two PNGs next to the delimited output file: the acceleration
estimates against both bounds, and the slack curves. Degenerate samples
(empty acceleration fields) appear as gaps.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _column(rows, name) -> np.ndarray:
    return np.array(
        [getattr(r, name) if getattr(r, name) is not None else np.nan for r in rows],
        dtype=float,
    )


def render_report_figures(report, out_path) -> list[Path]:
    """Write <stem>_bounds.png and <stem>_slacks.png next to the output."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_path = Path(out_path)
    rows = sorted(report.rows, key=lambda r: r.t)
    t = _column(rows, "t")
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(t, np.abs(_column(rows, "a_analytic")), label="|a| analytic", lw=1.5)
    ax.plot(t, np.abs(_column(rows, "a_fd")), "--", label="|a| finite difference", lw=1.0)
    ax.plot(t, _column(rows, "bound_tight"), label="tight bound", lw=1.0)
    ax.plot(t, _column(rows, "bound_loose"), label="loose bound", lw=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel("acceleration")
    ax.set_title(f"{report.config.scenario}: acceleration vs bounds")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    path = out_path.with_name(out_path.stem + "_bounds.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(t, _column(rows, "slack_loose"), label="loose slack", lw=1.0)
    ax.plot(t, _column(rows, "slack_tight"), label="tight slack", lw=1.0)
    ax.axhline(0.0, color="k", lw=0.8, alpha=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("bound - |a|")
    ax.set_title(f"{report.config.scenario}: bound slack")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    path = out_path.with_name(out_path.stem + "_slacks.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written

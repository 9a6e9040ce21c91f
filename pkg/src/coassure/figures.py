"""Figure rendering for impact reports and what-if diffs.

Renders to files only (Agg backend); the CLI report path writes these
alongside the delimited output.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .impact import ImpactReport, VIOLATED_STATES, WhatIfDiff

_STATE_COLORS = {"S1": "#e6a23c", "S2": "#c0392b", "S3": "#2980b9"}


def save_state_probability_figure(report: ImpactReport, path: str | Path) -> Path:
    """Bar chart of the three per-state violation probabilities."""
    states = [state.value for state in VIOLATED_STATES]
    values = [report.state_probabilities[state] for state in VIOLATED_STATES]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(states, values, color=[_STATE_COLORS[s] for s in states])
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("P(violated)")
    ax.set_title(f"Safety-state violation probabilities (machine: "
                 f"{report.current_machine_state.value})")
    for x, v in enumerate(values):
        ax.annotate(f"{v:.3f}", (x, v), ha="center", va="bottom", fontsize=9)
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def save_whatif_figure(diff: WhatIfDiff, path: str | Path) -> Path:
    """Horizontal bars of per-state probability deltas (alternative - baseline)."""
    states = [state.value for state in VIOLATED_STATES]
    deltas = [diff.state_deltas[state] for state in VIOLATED_STATES]
    fig, ax = plt.subplots(figsize=(6, 3.2))
    colors = ["#27ae60" if d < 0 else "#c0392b" for d in deltas]
    ax.barh(states, deltas, color=colors)
    ax.axvline(0.0, color="black", linewidth=0.8)
    limit = max(0.05, max(abs(d) for d in deltas) * 1.2)
    ax.set_xlim(-limit, limit)
    ax.set_xlabel("delta P(violated)")
    ax.set_title("What-if: per-state probability change")
    for y, d in enumerate(deltas):
        ax.annotate(f"{d:+.3f}", (d, y), ha="left" if d >= 0 else "right",
                    va="center", fontsize=9)
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path

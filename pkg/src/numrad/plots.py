"""Figure rendering for the CLI report paths.

Everything uses the Agg backend and writes straight to files; nothing here
opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_range_figure(samples: np.ndarray, path: str, title: str = "numerical range boundary") -> str:
    """Scatter of boundary samples of W(T) in the complex plane."""
    fig, ax = plt.subplots(figsize=(5, 5))
    re = samples[:, 1]
    im = samples[:, 2]
    ax.plot(re, im, ".", markersize=3)
    ax.axhline(0.0, color="gray", linewidth=0.5)
    ax.axvline(0.0, color="gray", linewidth=0.5)
    ax.set_xlabel("re")
    ax.set_ylabel("im")
    ax.set_title(title)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_repro_figure(report: dict, path: str) -> str:
    """Expected vs computed bar chart for the reproduction report."""
    names, expected, computed = [], [], []
    for entry in report["entries"]:
        exp = entry["expected"]
        comp = entry["computed"]
        # pick the first shared numeric key of each entry
        for key in exp:
            e, c = exp.get(key), _lookup(comp, key)
            if isinstance(e, (int, float)) and isinstance(c, (int, float)):
                names.append(f"{entry['name']}\n{key}")
                expected.append(float(e))
                computed.append(float(c))
                break
    pos = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(1.8 * max(4, len(names)), 4))
    ax.bar(pos - 0.18, expected, width=0.36, label="expected")
    ax.bar(pos + 0.18, computed, width=0.36, label="computed")
    ax.set_xticks(pos)
    ax.set_xticklabels(names, fontsize=8)
    ax.set_ylabel("value")
    ax.set_title("reproduction report")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _lookup(computed: dict, key: str):
    if key in computed:
        return computed[key]
    aliases = {"value": "lp_value", "lambda": "lp_value", "w": "w"}
    return computed.get(aliases.get(key, key))

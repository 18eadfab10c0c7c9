"""
Figures for the learn/merge/stats reports. Everything renders to files with
the Agg backend; nothing is shown interactively.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_mapping_histogram(hist: dict, path, title: str = "") -> Path:
    """Bar chart of source units by number of candidate mappings."""
    keys = ["0", "1", "2", "3+"]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4, 3))
        bars = ax.bar(keys, [hist.get(k, 0) for k in keys], color="0.45")
        ax.bar_label(bars)
        ax.set_xlabel("possible mappings")
        ax.set_ylabel("units")
        ax.set_title(title or f"{hist.get('total', 0)} source units")
        return _save(fig, path)


def plot_pos_sizes(stats_by_name: dict, path) -> Path:
    """Grouped bars of entries per part of speech, one group per lexicon."""
    names = list(stats_by_name)
    pos = sorted({p for s in stats_by_name.values() for p in s["per_pos"]})
    width = 0.8 / max(len(names), 1)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(pos) * max(len(names), 1)), 3.5))
        for i, name in enumerate(names):
            counts = [stats_by_name[name]["per_pos"].get(p, 0) for p in pos]
            xs = [j + i * width for j in range(len(pos))]
            label = f"{name} ({stats_by_name[name]['entries']}, {stats_by_name[name]['avg_word_forms']:.2f} wf/entry)"
            ax.bar(xs, counts, width, label=label)
        ax.set_xticks([j + 0.4 - width / 2 for j in range(len(pos))], pos, rotation=45, ha="right")
        ax.set_ylabel("lexical entries")
        ax.legend(frameon=False, fontsize=7)
        return _save(fig, path)


def plot_merge_outcomes(stats: dict, path) -> Path:
    """Stacked bars per PoS: same information, gained information, no unification."""
    parts = ["same_information", "gained_information", "no_unify"]
    per_pos = stats["per_pos"]
    pos = sorted({p for k in parts for p in per_pos.get(k, {})})
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(max(4, 0.5 * len(pos)), 3.5))
        bottom = [0] * len(pos)
        for k in parts:
            counts = [per_pos.get(k, {}).get(p, 0) for p in pos]
            ax.bar(pos, counts, bottom=bottom, label=k.replace("_", " "))
            bottom = [b + c for b, c in zip(bottom, counts)]
        ax.set_ylabel("entries with shared lemma")
        ax.tick_params(axis="x", rotation=45)
        ax.legend(frameon=False, fontsize=7)
        return _save(fig, path)

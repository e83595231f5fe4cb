"""Figure rendering for benchmark reports.

Renders two summary figures next to the delimited output: planning effort
(Bellman backups) and expected cost relative to the oracle, both against the
initial uncertainty.
"""

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _series(rows):
    groups = defaultdict(list)
    for r in rows:
        eps = r.get("epsilon")
        label = r["method"] if eps is None else f"{r['method']} (eps={eps:g})"
        groups[label].append(r)
    for label in groups:
        groups[label].sort(key=lambda r: (r["H_size"], r["scenario_id"]))
    return groups


def render_backups_figure(rows, path):
    groups = _series(rows)
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, rs in sorted(groups.items()):
        xs = [r["H_size"] for r in rs if r["backups"]]
        ys = [r["backups"] for r in rs if r["backups"]]
        if xs:
            ax.plot(xs, ys, marker="o", label=label)
    ax.set_xlabel("initial uncertainty |H|")
    ax.set_ylabel("Bellman backups")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_cost_figure(rows, path):
    groups = _series(rows)
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, rs in sorted(groups.items()):
        xs, ys = [], []
        for r in rs:
            if r["expected_cost"] is not None and r["oracle_cost"]:
                xs.append(r["H_size"])
                ys.append(float(r["expected_cost"]) / float(r["oracle_cost"]))
        if xs:
            ax.plot(xs, ys, marker="o", label=label)
    ax.axhline(1.0, color="gray", linestyle="--", linewidth=0.8)
    ax.set_xlabel("initial uncertainty |H|")
    ax.set_ylabel("expected cost / oracle optimum")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report_figures(rows, stem):
    """Write <stem>_backups.png and <stem>_cost.png; returns the paths."""
    paths = (f"{stem}_backups.png", f"{stem}_cost.png")
    render_backups_figure(rows, paths[0])
    render_cost_figure(rows, paths[1])
    return paths

"""Matplotlib rendering of triple graphs and report summaries to files.

The report-producing commands can drop these figures next to their text or
structured output; everything is rendered off-screen.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import AnalysisReport
from .patterns import SatisfactionReport
from .triples import TripleGraph

_CLASS_COLORS = {"positive": "#2a9d8f", "negative": "#e9c46a", "violated": "#e76f51"}


def _column(ax, xs, items, color):
    ys = {}
    n = max(len(items), 1)
    for i, label in enumerate(items):
        y = 1.0 - (i + 1) / (n + 1)
        ys[label[0]] = (xs, y)
        ax.scatter([xs], [y], s=600, color=color, zorder=3, edgecolors="black")
        ax.annotate(f"{label[0]}\n:{label[1]}", (xs, y), ha="center", va="center",
                    fontsize=7, zorder=4)
    return ys


def render_triple(t: TripleGraph, path: Path, title: str = "") -> None:
    """Draw a triple graph with source, correspondence and target columns."""
    fig, ax = plt.subplots(figsize=(8, max(3, 0.6 * max(
        len(t.source.nodes), len(t.target.nodes), len(t.corr), 1))))
    pos = {}
    pos.update(_column(ax, 0.0, [(n.id, n.type) for n in t.source.nodes], "#8ecae6"))
    pos.update(_column(ax, 1.0, [(c.id, c.type) for c in t.corr], "#dddddd"))
    pos.update(_column(ax, 2.0, [(n.id, n.type) for n in t.target.nodes], "#ffb703"))

    def arrow(a, b, style, label=""):
        (x1, y1), (x2, y2) = pos[a], pos[b]
        ax.annotate("", xy=(x2, y2), xytext=(x1, y1),
                    arrowprops=dict(arrowstyle="-|>" if style == "solid" else "-",
                                    linestyle="solid" if style == "solid" else "dashed",
                                    color="black", shrinkA=16, shrinkB=16))
        if label:
            ax.annotate(label, ((x1 + x2) / 2, (y1 + y2) / 2 + 0.02),
                        fontsize=6, ha="center", color="#555555")

    for e in t.source.edges + t.target.edges:
        arrow(e.src, e.tgt, "solid", e.type)
    for c in t.corr:
        arrow(c.id, c.source, "dashed")
        arrow(c.id, c.target, "dashed")

    ax.set_xlim(-0.5, 2.5)
    ax.set_ylim(-0.05, 1.05)
    ax.set_xticks([0, 1, 2])
    ax.set_xticklabels(["source", "correspondence", "target"])
    ax.set_yticks([])
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_check_report(report: SatisfactionReport, path: Path) -> None:
    """Bar chart of base-match classifications per pattern and direction."""
    labels = []
    counts = {k: [] for k in _CLASS_COLORS}
    for e in report.entries:
        labels.append(f"{e.pattern}\n{e.direction}")
        for k in counts:
            counts[k].append(sum(1 for m in e.matches if m.classification == k))
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(labels)), 4))
    bottom = [0] * len(labels)
    for k, values in counts.items():
        ax.bar(labels, values, bottom=bottom, label=k, color=_CLASS_COLORS[k])
        bottom = [b + v for b, v in zip(bottom, values)]
    ax.set_ylabel("base matches")
    ax.set_title("satisfied" if report.satisfied else "VIOLATED")
    ax.legend()
    plt.setp(ax.get_xticklabels(), fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_analysis_report(report: AnalysisReport, path: Path) -> None:
    """Coverage chart plus finding counts."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    sides = ("source", "target")
    covered = [len(report.source_coverage.covered_node_types)
               + len(report.source_coverage.covered_edge_types),
               len(report.target_coverage.covered_node_types)
               + len(report.target_coverage.covered_edge_types)]
    uncovered = [len(report.source_coverage.uncovered_node_types)
                 + len(report.source_coverage.uncovered_edge_types),
                 len(report.target_coverage.uncovered_node_types)
                 + len(report.target_coverage.uncovered_edge_types)]
    ax1.bar(sides, covered, label="covered", color="#2a9d8f")
    ax1.bar(sides, uncovered, bottom=covered, label="uncovered", color="#e76f51")
    ax1.set_title("language covering")
    ax1.legend()
    findings = {"conflicts": len(report.conflicts),
                "tautologies": len(report.tautologies),
                "contradictions": len(report.contradictions)}
    ax2.bar(list(findings), list(findings.values()), color="#264653")
    ax2.set_title("findings")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

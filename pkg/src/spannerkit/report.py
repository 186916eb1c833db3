"""Render benchmark figures from run records.

The report path complements the delimited outputs: given the JSONL records of
a bench run it renders PNG figures into the same directory so a run leaves
records, an aggregate CSV, and plots side by side.
"""

from __future__ import annotations

import math
import os
import statistics
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _group_median(records: list[dict], key_fn, value_fn) -> dict:
    buckets: dict = defaultdict(list)
    for record in records:
        value = value_fn(record)
        if value is None:
            continue
        if isinstance(value, float) and not math.isfinite(value):
            continue
        buckets[key_fn(record)].append(value)
    return {k: statistics.median(v) for k, v in buckets.items() if v}


def _spec_n(record: dict) -> int:
    return int(record.get("provenance", {}).get("spec", {}).get("n", 0))


def render_report(records: list[dict], out_dir: str, prefix: str = "report") -> list[str]:
    """Write runtime, gap, and status figures; returns the created paths."""
    os.makedirs(out_dir, exist_ok=True)
    created = []
    solvers = sorted({r["solver"] for r in records})

    # Median wall time against instance size, one line per solver.
    fig, ax = plt.subplots(figsize=(6, 4))
    for solver in solvers:
        rows = [r for r in records if r["solver"] == solver]
        med = _group_median(rows, _spec_n, lambda r: r.get("wall_time"))
        if not med:
            continue
        xs = sorted(med)
        ax.plot(xs, [med[x] for x in xs], marker="o", label=solver)
    ax.set_xlabel("nodes")
    ax.set_ylabel("median wall time [s]")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("runtime by instance size")
    fig.tight_layout()
    path = os.path.join(out_dir, f"{prefix}_time.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    created.append(path)

    # Gap distribution per solver (solvers reporting finite gaps only).
    gap_data = []
    gap_labels = []
    for solver in solvers:
        values = [
            r["gap"]
            for r in records
            if r["solver"] == solver
            and r.get("gap") is not None
            and math.isfinite(r["gap"])
        ]
        if values:
            gap_data.append(values)
            gap_labels.append(solver)
    if gap_data:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.boxplot(gap_data, tick_labels=gap_labels)
        ax.set_ylabel("gap [%]")
        ax.set_title("primal-dual gap by solver")
        fig.tight_layout()
        path = os.path.join(out_dir, f"{prefix}_gap.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        created.append(path)

    # Status counts per solver.
    statuses = sorted({r["status"] for r in records})
    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.8 / max(1, len(statuses))
    for pos, status in enumerate(statuses):
        counts = [
            sum(1 for r in records if r["solver"] == s and r["status"] == status)
            for s in solvers
        ]
        xs = [i + pos * width for i in range(len(solvers))]
        ax.bar(xs, counts, width=width, label=status)
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(solvers))])
    ax.set_xticklabels(solvers)
    ax.set_ylabel("runs")
    ax.legend()
    ax.set_title("status by solver")
    fig.tight_layout()
    path = os.path.join(out_dir, f"{prefix}_status.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    created.append(path)
    return created

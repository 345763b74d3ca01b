"""Figure rendering for benchmark reports.

Each suite's report renders to one PNG next to its CSV. The CSV stays the
machine-readable contract; figures are the human-readable view of the same
rows.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .suites import BenchReport


def render_figure(report: BenchReport, out_dir: str | Path) -> Path | None:
    """Render the suite's figure; returns its path, or None for empty reports."""
    if not report.rows:
        return None
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{report.suite}.png"

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    suite = report.suite

    if suite in ("segment_sweep", "group_sweep"):
        xs = [row.value for row in report.rows]
        ax.plot(xs, [row.paths_per_mb for row in report.rows], "o-", label="paths per MB")
        ax.set_xlabel("segment size (bytes)" if suite == "segment_sweep" else "group size")
        ax.set_ylabel("paths per MB")
        if suite == "segment_sweep":
            ax.set_xscale("log", base=2)
        ax2 = ax.twinx()
        ax2.plot(xs, [row.mb_per_s for row in report.rows], "s--", color="tab:orange", label="MB/s")
        ax2.set_ylabel("MB/s")
        lines, labels = ax.get_legend_handles_labels()
        lines2, labels2 = ax2.get_legend_handles_labels()
        ax.legend(lines + lines2, labels + labels2, loc="best")
        ax.set_title("Path cost and throughput vs " + ("segment size" if suite == "segment_sweep" else "group size"))

    elif suite == "packing":
        labels = [row.param for row in report.rows]
        ax.bar(labels, [row.buckets_final for row in report.rows], color=["tab:gray", "tab:blue"])
        ax.set_ylabel("final bucket count")
        ax.set_title(f"Tree size with and without packing ({report.rows[0].value:g} KB files)")

    elif suite == "resize":
        source = report.series or [
            {"op": i, "live": row.value, "buckets": row.buckets_final}
            for i, row in enumerate(report.rows)
        ]
        ops = [point["op"] for point in source]
        ax.step(ops, [point["live"] for point in source], where="post", label="live blocks")
        ax.step(ops, [point["buckets"] for point in source], where="post", label="tree buckets")
        ax.set_xlabel("operation")
        ax.set_ylabel("count")
        ax.legend()
        ax.set_title("Tree size tracking live data")

    elif suite == "baseline":
        labels = [row.param for row in report.rows]
        values = [row.mb_per_s for row in report.rows]
        ax.bar(labels, values, color=["tab:green", "tab:olive", "tab:red"])
        ax.set_ylabel("MB/s")
        ax.set_yscale("log")
        ax.set_title("Write throughput: plain vs encrypted vs oblivious")

    else:  # distribution and anything new: totals per row
        labels = [f"{row.param}={row.value:g}" for row in report.rows]
        ax.bar(labels, [row.fg_paths for row in report.rows], label="foreground paths")
        ax.bar(
            labels,
            [row.evict_paths for row in report.rows],
            bottom=[row.fg_paths for row in report.rows],
            label="eviction paths",
        )
        ax.set_ylabel("paths")
        ax.legend()
        ax.set_title(f"{suite}: path counts")

    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path

from .distribution import SizeDistribution, default_distribution, load_csv
from .figures import render_figure
from .suites import (
    CSV_HEADER,
    BenchReport,
    BenchRow,
    baseline_compare,
    compare_packing,
    resize_trace,
    run_distribution_workload,
    sweep_group_size,
    sweep_segment_size,
)

__all__ = [
    "BenchReport",
    "BenchRow",
    "CSV_HEADER",
    "SizeDistribution",
    "baseline_compare",
    "compare_packing",
    "default_distribution",
    "load_csv",
    "render_figure",
    "resize_trace",
    "run_distribution_workload",
    "sweep_group_size",
    "sweep_segment_size",
]

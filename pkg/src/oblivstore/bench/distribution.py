"""File-size distributions for workload generation.

A distribution is a piecewise-linear CDF given as (size_kb, cumulative_pct)
points; sampling inverts the CDF with uniform interpolation inside each
bin. The default table ships with the package and skews small: most files
fit one 64 KB segment, with a long tail out to a few megabytes. Any suite
accepts a user-supplied table in the same two-column CSV format.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class SizeDistribution:
    """Cumulative size distribution; sizes in KB, percentages to 100."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("distribution needs at least one point")
        prev_size, prev_pct = 0.0, 0.0
        for size_kb, cum_pct in self.points:
            if size_kb <= prev_size:
                raise ValueError("sizes must be strictly increasing")
            if cum_pct <= prev_pct:
                raise ValueError("cumulative percentages must be strictly increasing")
            prev_size, prev_pct = size_kb, cum_pct
        if self.points[-1][1] != 100:
            raise ValueError("last cumulative percentage must be 100")

    def sample_bytes(self, rng: random.Random) -> int:
        """Draw one file size in bytes (never zero)."""
        u = rng.uniform(0.0, 100.0)
        prev_size, prev_pct = 0.0, 0.0
        for size_kb, cum_pct in self.points:
            if u <= cum_pct:
                fraction = (u - prev_pct) / (cum_pct - prev_pct)
                kb = prev_size + fraction * (size_kb - prev_size)
                return max(1, round(kb * 1024))
            prev_size, prev_pct = size_kb, cum_pct
        return max(1, round(self.points[-1][0] * 1024))


def load_csv(path: str | Path) -> SizeDistribution:
    """Read a ``size_kb,cum_pct`` CSV (header row required)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    points = tuple((float(r["size_kb"]), float(r["cum_pct"])) for r in rows)
    return SizeDistribution(points)


def default_distribution() -> SizeDistribution:
    ref = resources.files("oblivstore.bench") / "data" / "file_size_cdf.csv"
    with resources.as_file(ref) as path:
        return load_csv(path)

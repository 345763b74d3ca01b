"""Benchmark suites measured in exact path counts plus wall time.

Every suite writes and reads synthetic workloads through in-process stores
and reports instrumented counters (foreground paths, eviction paths, bytes
moved) alongside wall-clock throughput. The counters are the contract:
identical seeds reproduce them exactly, while wall times vary with
hardware. Each suite emits one CSV with a fixed header row; ``value`` holds
the swept parameter and ``bytes`` the logical workload volume.

Suites verify every read against what was written and abort on the first
mismatch: a benchmark of an incorrect store is meaningless.
"""

from __future__ import annotations

import hashlib
import random
import statistics
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..backend import DirectoryBackend, MemoryBackend
from ..config import OramConfig, ResizePolicy
from ..crypto import SecretKey, seal
from ..errors import BenchVerificationError
from ..filestore import FileStore
from .distribution import SizeDistribution, default_distribution

CSV_HEADER = "suite,param,value,fg_paths,evict_paths,buckets_final,bytes,wall_ms,mb_per_s"

_MB = 1024 * 1024


@dataclass
class BenchRow:
    suite: str
    param: str
    value: float
    fg_paths: int
    evict_paths: int
    buckets_final: int
    bytes: int
    wall_ms: float
    mb_per_s: float

    @property
    def paths_per_mb(self) -> float:
        """Hardware-independent cost: total paths per MB of workload."""
        if self.bytes == 0:
            return 0.0
        return (self.fg_paths + self.evict_paths) / (self.bytes / _MB)

    def as_csv(self) -> str:
        return (
            f"{self.suite},{self.param},{self.value:g},{self.fg_paths},"
            f"{self.evict_paths},{self.buckets_final},{self.bytes},"
            f"{self.wall_ms:.3f},{self.mb_per_s:.4f}"
        )


@dataclass
class BenchReport:
    suite: str
    rows: list[BenchRow] = field(default_factory=list)
    # Per-operation trace for suites that log over time (resize_trace);
    # not part of the CSV contract.
    series: list[dict] = field(default_factory=list)

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        lines = [CSV_HEADER] + [row.as_csv() for row in self.rows]
        path.write_text("\n".join(lines) + "\n")
        return path


def _fresh_store(
    seed: int,
    *,
    segment_size: int = 65536,
    group_size: int = 3,
    z: int = 3,
    stash_max: int = 100,
    packing: bool = True,
    auto_resize: bool = True,
    backend=None,
) -> FileStore:
    config = OramConfig(
        z=z,
        segment_size=segment_size,
        stash_max=stash_max,
        group_size=group_size,
        rng_seed=seed ^ 0x6F72616D,
    )
    return FileStore.create(
        config,
        backend if backend is not None else MemoryBackend(),
        SecretKey.generate(),
        policy=ResizePolicy(),
        packing=packing,
        auto_resize=auto_resize,
    )


def _write_read_verify(store: FileStore, sizes: list[int], payload_seed: int) -> int:
    """Write one file per size, read each back, verify; returns bytes moved."""
    rng = random.Random(payload_seed)
    digests = {}
    for i, size in enumerate(sizes):
        data = rng.randbytes(size)
        name = f"f{i:05d}"
        store.write_file(name, data)
        digests[name] = hashlib.sha256(data).digest()
    for name, digest in digests.items():
        got = store.read_file(name)
        if hashlib.sha256(got).digest() != digest:
            raise BenchVerificationError(f"read of {name} returned different bytes")
    return 2 * sum(sizes)


def run_distribution_workload(
    n_files: int,
    dist: SizeDistribution | None = None,
    seed: int = 0,
    **store_kwargs,
) -> BenchReport:
    """Write then read ``n_files`` drawn from the size distribution."""
    report = BenchReport("distribution")
    if n_files == 0:
        return report
    dist = dist or default_distribution()
    rng = random.Random(seed)
    sizes = [dist.sample_bytes(rng) for _ in range(n_files)]

    store = _fresh_store(seed, **store_kwargs)
    start = time.perf_counter()
    moved = _write_read_verify(store, sizes, payload_seed=seed + 1)
    wall = time.perf_counter() - start

    counters = store.engine.counters
    report.rows.append(
        BenchRow(
            suite="distribution",
            param="n_files",
            value=n_files,
            fg_paths=counters.foreground_paths,
            evict_paths=counters.eviction_paths,
            buckets_final=store.engine.n_buckets,
            bytes=moved,
            wall_ms=wall * 1000,
            mb_per_s=moved / _MB / wall if wall > 0 else 0.0,
        )
    )
    return report


def sweep_segment_size(
    values: list[int],
    n_files: int = 200,
    dist: SizeDistribution | None = None,
    seed: int = 0,
    **store_kwargs,
) -> BenchReport:
    """Run the same workload at each segment size."""
    dist = dist or default_distribution()
    rng = random.Random(seed)
    sizes = [dist.sample_bytes(rng) for _ in range(n_files)]
    store_kwargs.pop("segment_size", None)

    report = BenchReport("segment_sweep")
    for segment_size in values:
        store = _fresh_store(seed, segment_size=segment_size, **store_kwargs)
        start = time.perf_counter()
        moved = _write_read_verify(store, sizes, payload_seed=seed + 1)
        wall = time.perf_counter() - start
        counters = store.engine.counters
        report.rows.append(
            BenchRow(
                suite="segment_sweep",
                param="segment_size",
                value=segment_size,
                fg_paths=counters.foreground_paths,
                evict_paths=counters.eviction_paths,
                buckets_final=store.engine.n_buckets,
                bytes=moved,
                wall_ms=wall * 1000,
                mb_per_s=moved / _MB / wall if wall > 0 else 0.0,
            )
        )
    return report


def sweep_group_size(
    values: list[int],
    n_files: int = 200,
    dist: SizeDistribution | None = None,
    seed: int = 0,
    **store_kwargs,
) -> BenchReport:
    """Run the same workload at each grouping size.

    Foreground and eviction paths are reported separately: larger groups cut
    foreground fetches but congest paths, which shows up as eviction work.
    """
    dist = dist or default_distribution()
    rng = random.Random(seed)
    sizes = [dist.sample_bytes(rng) for _ in range(n_files)]
    store_kwargs.pop("group_size", None)

    report = BenchReport("group_sweep")
    for group_size in values:
        store = _fresh_store(seed, group_size=group_size, **store_kwargs)
        start = time.perf_counter()
        moved = _write_read_verify(store, sizes, payload_seed=seed + 1)
        wall = time.perf_counter() - start
        counters = store.engine.counters
        report.rows.append(
            BenchRow(
                suite="group_sweep",
                param="group_size",
                value=group_size,
                fg_paths=counters.foreground_paths,
                evict_paths=counters.eviction_paths,
                buckets_final=store.engine.n_buckets,
                bytes=moved,
                wall_ms=wall * 1000,
                mb_per_s=moved / _MB / wall if wall > 0 else 0.0,
            )
        )
    return report


def compare_packing(file_size_kb: int, n_files: int = 250, seed: int = 0) -> BenchReport:
    """Same-size workload with packing off vs on, auto-resize enabled.

    The interesting output is the final bucket count: packing lets several
    tails share a block, so the resizer settles on a smaller tree.
    """
    report = BenchReport("packing")
    size = file_size_kb * 1024
    for packing in (False, True):
        store = _fresh_store(seed, packing=packing, auto_resize=True)
        sizes = [size] * n_files
        start = time.perf_counter()
        moved = _write_read_verify(store, sizes, payload_seed=seed + 1)
        wall = time.perf_counter() - start
        counters = store.engine.counters
        report.rows.append(
            BenchRow(
                suite="packing",
                param="packing=on" if packing else "packing=off",
                value=file_size_kb,
                fg_paths=counters.foreground_paths,
                evict_paths=counters.eviction_paths,
                buckets_final=store.engine.n_buckets,
                bytes=moved,
                wall_ms=wall * 1000,
                mb_per_s=moved / _MB / wall if wall > 0 else 0.0,
            )
        )
    return report


def resize_trace(n_ops: int = 32, seed: int = 0) -> BenchReport:
    """Random adds and deletes; logs live blocks and tree size per step.

    Files span 9..24 segments so the tree stays large enough for one-bucket
    resize steps to land near the target utilization. One row per
    operation: ``value`` is the live block count, ``buckets_final`` the tree
    size after the step.
    """
    rng = random.Random(seed)
    store = _fresh_store(seed, auto_resize=True)
    segment_size = store.config.segment_size
    report = BenchReport("resize")

    live_names: list[str] = []
    for i in range(n_ops):
        grown_before = store.resizer.total_grown
        shrunk_before = store.resizer.total_shrunk
        add = len(live_names) < 2 or rng.random() < 0.55
        start = time.perf_counter()
        if add:
            name = f"t{i:03d}"
            size = rng.randint(9, 24) * segment_size
            store.write_file(name, rng.randbytes(size))
            live_names.append(name)
            kind = "add"
        else:
            name = live_names.pop(rng.randrange(len(live_names)))
            size = store.files[name].total_bytes
            store.delete_file(name)
            kind = "rm"
        wall = time.perf_counter() - start

        resized = (
            store.resizer.total_grown > grown_before
            or store.resizer.total_shrunk > shrunk_before
        )
        live = store.engine.live_blocks
        buckets = store.engine.n_buckets
        report.rows.append(
            BenchRow(
                suite="resize",
                param=f"op{i:02d}:{kind}",
                value=live,
                fg_paths=store.engine.counters.foreground_paths,
                evict_paths=store.engine.counters.eviction_paths,
                buckets_final=buckets,
                bytes=size,
                wall_ms=wall * 1000,
                mb_per_s=size / _MB / wall if wall > 0 else 0.0,
            )
        )
        report.series.append(
            {
                "op": i,
                "kind": kind,
                "live": live,
                "buckets": buckets,
                "utilization": store.utilization(),
                "resized": resized,
            }
        )
    return report


def baseline_compare(
    n_files: int = 60,
    size_kb: int = 256,
    seed: int = 0,
    workdir: str | Path | None = None,
) -> BenchReport:
    """Plain directory writes vs encrypt-then-write vs the full store.

    All three write the same files to the same filesystem. Plain and
    encrypted runs take the median of three repetitions; the oblivious run
    is measured once (it dominates the runtime anyway).
    """
    report = BenchReport("baseline")
    if n_files == 0:
        for param in ("plain", "encrypted", "oram"):
            report.rows.append(BenchRow("baseline", param, 0, 0, 0, 0, 0, 0.0, 0.0))
        return report

    rng = random.Random(seed)
    payloads = [rng.randbytes(size_kb * 1024) for _ in range(n_files)]
    total = sum(len(p) for p in payloads)
    key = SecretKey.generate()

    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        tmp = Path(tmp)

        def timed_writes(target: Path, transform) -> float:
            walls = []
            for rep in range(3):
                rep_dir = target / f"rep{rep}"
                rep_dir.mkdir(parents=True)
                start = time.perf_counter()
                for i, payload in enumerate(payloads):
                    (rep_dir / f"f{i:05d}.bin").write_bytes(transform(payload))
                walls.append(time.perf_counter() - start)
            return statistics.median(walls)

        plain_wall = timed_writes(tmp / "plain", lambda p: p)
        enc_wall = timed_writes(tmp / "encrypted", lambda p: seal(p, key))

        store = _fresh_store(seed, backend=DirectoryBackend(tmp / "oram"))
        start = time.perf_counter()
        for i, payload in enumerate(payloads):
            store.write_file(f"f{i:05d}", payload)
        oram_wall = time.perf_counter() - start
        counters = store.engine.counters

    for param, wall, fg, ev, buckets in (
        ("plain", plain_wall, 0, 0, 0),
        ("encrypted", enc_wall, 0, 0, 0),
        ("oram", oram_wall, counters.foreground_paths, counters.eviction_paths, store.engine.n_buckets),
    ):
        report.rows.append(
            BenchRow(
                suite="baseline",
                param=param,
                value=size_kb,
                fg_paths=fg,
                evict_paths=ev,
                buckets_final=buckets,
                bytes=total,
                wall_ms=wall * 1000,
                mb_per_s=total / _MB / wall if wall > 0 else 0.0,
            )
        )
    return report

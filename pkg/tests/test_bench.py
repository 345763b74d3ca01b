import math
import random

import pytest

from oblivstore.bench import (
    CSV_HEADER,
    SizeDistribution,
    baseline_compare,
    compare_packing,
    default_distribution,
    load_csv,
    render_figure,
    resize_trace,
    run_distribution_workload,
    sweep_group_size,
    sweep_segment_size,
)


def counters_only(report):
    return [
        (r.suite, r.param, r.value, r.fg_paths, r.evict_paths, r.buckets_final, r.bytes)
        for r in report.rows
    ]


def test_distribution_validation():
    with pytest.raises(ValueError):
        SizeDistribution(((4, 50), (2, 100)))  # sizes not increasing
    with pytest.raises(ValueError):
        SizeDistribution(((2, 60), (4, 40)))  # pct not increasing
    with pytest.raises(ValueError):
        SizeDistribution(((2, 60), (4, 90)))  # does not reach 100
    with pytest.raises(ValueError):
        SizeDistribution(())


def test_default_distribution_sampling():
    dist = default_distribution()
    rng = random.Random(0)
    samples = [dist.sample_bytes(rng) for _ in range(4000)]
    assert min(samples) >= 1
    assert max(samples) <= 4096 * 1024
    # The table front-loads small files: most samples fit one 64 KB segment.
    assert sum(s <= 65536 for s in samples) / len(samples) > 0.6


def test_load_csv_round_trip(tmp_path):
    path = tmp_path / "dist.csv"
    path.write_text("size_kb,cum_pct\n10,50\n100,100\n")
    dist = load_csv(path)
    assert dist.points == ((10.0, 50.0), (100.0, 100.0))


def test_workload_deterministic_for_fixed_seed():
    a = run_distribution_workload(15, seed=5, segment_size=1024)
    b = run_distribution_workload(15, seed=5, segment_size=1024)
    assert counters_only(a) == counters_only(b)
    c = run_distribution_workload(15, seed=6, segment_size=1024)
    assert counters_only(a) != counters_only(c)


def test_empty_workload():
    assert run_distribution_workload(0).rows == []


def test_csv_output(tmp_path):
    report = run_distribution_workload(5, seed=1, segment_size=1024)
    path = report.write_csv(tmp_path / "out.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2


def test_segment_sweep_row_per_value():
    small = SizeDistribution(((1, 50), (8, 100)))
    report = sweep_segment_size([1024, 3000], n_files=10, dist=small, seed=2)
    assert [r.value for r in report.rows] == [1024, 3000]
    assert all(r.fg_paths > 0 for r in report.rows)
    # Non-power-of-two segment size accepted.
    single = sweep_segment_size([3000], n_files=5, dist=small, seed=2)
    assert len(single.rows) == 1


def test_group_sweep_foreground_scaling():
    # Files of up to 6 one-KB segments: sequential access needs ceil(s/n)
    # paths per file, so foreground traffic shrinks as the group grows.
    dist = SizeDistribution(((6, 100),))
    report = sweep_group_size([1, 2, 3], n_files=8, dist=dist, seed=3, segment_size=1024)
    fg = {int(r.value): r.fg_paths for r in report.rows}
    assert fg[1] > fg[2] > fg[3]


def test_compare_packing_shrinks_tree():
    report = compare_packing(2, n_files=40, seed=4)  # 2 KB files, 64 KB segments
    off, on = report.rows
    assert off.param == "packing=off" and on.param == "packing=on"
    assert on.buckets_final < off.buckets_final


def test_resize_trace_tracks_live_blocks():
    report = resize_trace(10, seed=6)
    assert len(report.rows) == 10
    assert len(report.series) == 10
    for point in report.series:
        if point["resized"]:
            assert 0.45 <= point["utilization"] <= 0.55


def test_all_adds_grow_monotonically():
    rng = random.Random(7)
    from oblivstore import FileStore, MemoryBackend, OramConfig, SecretKey

    store = FileStore.create(
        OramConfig(segment_size=1024, rng_seed=7), MemoryBackend(), SecretKey.generate()
    )
    buckets = [store.engine.n_buckets]
    for i in range(10):
        store.write_file(f"f{i}", rng.randbytes(rng.randint(1024, 8192)))
        buckets.append(store.engine.n_buckets)
    assert buckets == sorted(buckets)
    for i in range(10):
        store.delete_file(f"f{i}")
    assert store.engine.n_buckets == 1


def test_baseline_empty_workload_is_zeroed():
    report = baseline_compare(n_files=0)
    assert [r.param for r in report.rows] == ["plain", "encrypted", "oram"]
    assert all(r.mb_per_s == 0 for r in report.rows)


def test_baseline_structure(tmp_path):
    report = baseline_compare(n_files=4, size_kb=64, seed=8, workdir=tmp_path)
    by_param = {r.param: r for r in report.rows}
    assert by_param["oram"].fg_paths > 0
    assert by_param["plain"].fg_paths == 0
    assert all(r.mb_per_s > 0 for r in report.rows)
    # The oblivious store is never faster than a plain copy.
    assert by_param["oram"].mb_per_s < by_param["plain"].mb_per_s


def test_figures_render(tmp_path):
    reports = [
        sweep_group_size([1, 2], n_files=4, dist=SizeDistribution(((4, 100),)), seed=9),
        resize_trace(4, seed=9),
        compare_packing(2, n_files=6, seed=9),
    ]
    for report in reports:
        path = render_figure(report, tmp_path)
        assert path is not None and path.stat().st_size > 0

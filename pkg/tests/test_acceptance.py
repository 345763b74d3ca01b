"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a single PASS/FAIL line (run with ``pytest -s`` to see them
live). Oracles are independent of the paths they check: the state scanner
parses raw envelopes, count models are closed-form arithmetic, and the
shadow model is a flat dict plus exhaustive scan.
"""

import contextlib
import random

import pytest
from scipy import stats

from checker import ancestors, check_store, scan_engine
from oblivstore import (
    FileStore,
    MemoryBackend,
    OramConfig,
    PathOram,
    RecordingBackend,
    Resizer,
    SecretKey,
    login,
    logout,
)
from oblivstore.bench import baseline_compare, compare_packing, resize_trace, run_distribution_workload

SEG = 1024


@contextlib.contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} [{description}]: FAIL")
        raise
    print(f"ACCEPTANCE {number} [{description}]: PASS")


def small_store(seed, **kwargs):
    config = OramConfig(segment_size=SEG, rng_seed=seed)
    return FileStore.create(config, MemoryBackend(), SecretKey.generate(), **kwargs)


def test_criterion_1_invariants_over_random_operations():
    """10,000 mixed put/get/rm with every structural check after each op."""
    with criterion(1, "invariant suite, 10k ops"):
        store = small_store(seed=101)
        rng = random.Random(102)
        names = [f"n{i}" for i in range(30)]
        shadow = {}
        for _ in range(10_000):
            name = rng.choice(names)
            action = rng.random()
            if name not in shadow or action < 0.45:
                data = rng.randbytes(rng.randint(0, 4096))
                store.write_file(name, data)
                shadow[name] = data
            elif action < 0.80:
                assert store.read_file(name) == shadow[name]
            else:
                store.delete_file(name)
                del shadow[name]
            check_store(store)
        assert shadow, "workload degenerated to an empty store"


def test_criterion_2_read_your_writes_1000_files():
    """1,000 distribution-sampled files written then read byte-identically."""
    with criterion(2, "read-your-writes, 1000 files"):
        report = run_distribution_workload(1000, seed=201)
        row = report.rows[0]
        assert row.bytes > 0
        assert row.fg_paths > 0


def test_criterion_3_trace_shape_and_leaf_uniformity():
    """Every access is one full path read then written; remaps are uniform."""
    with criterion(3, "trace shape + chi-square uniformity"):
        recorder = RecordingBackend(MemoryBackend())
        config = OramConfig(segment_size=SEG, rng_seed=301)
        engine = PathOram.create(config, recorder, SecretKey.generate(), n_buckets=1023)
        ids = list(range(120))
        recorder.clear()

        samples = []
        for block_id in ids:
            engine.access("write", block_id, bytes(SEG))
            samples.append(engine.position_map[block_id])
        rng = random.Random(302)
        for step in range(10_000):
            block_id = rng.choice(ids)
            if rng.random() < 0.5:
                engine.access("read", block_id)
            else:
                engine.access("write", block_id, rng.randbytes(SEG))
            samples.append(engine.position_map[block_id])
            if step % 100 == 0:
                engine.background_evict(1)

        # Trace shape: a 1023-bucket complete tree has 10-bucket paths, so
        # each access contributes exactly 10 gets then 10 puts of one path.
        events = recorder.events
        assert len(events) % 20 == 0
        for start in range(0, len(events), 20):
            chunk = events[start : start + 20]
            kinds = [kind for kind, _ in chunk]
            assert kinds == ["get"] * 10 + ["put"] * 10
            gets = [index for _, index in chunk[:10]]
            puts = [index for _, index in chunk[10:]]
            leaf = gets[-1]
            assert 511 <= leaf < 1023
            assert gets == sorted(ancestors(leaf))
            assert puts == gets

        # Leaf uniformity over the 512 leaves at p = 0.001.
        assert len(samples) >= 10_000
        counts = [0] * 512
        for leaf in samples:
            counts[leaf - 511] += 1
        result = stats.chisquare(counts)
        assert result.pvalue > 0.001, f"uniformity rejected: p={result.pvalue}"


def test_criterion_4_multi_block_fetching_counts():
    """Grouped fetching: exact path counts and the count-model speedup."""
    with criterion(4, "multi-block fetch path counts"):
        store = small_store(seed=401)
        store.write_file("thirty", bytes(30 * SEG))
        before = store.engine.counters.foreground_paths
        store.read_file("thirty")
        assert store.engine.counters.foreground_paths - before == 10

        # Count-model speedup on files of >= 3 segments, groups of 3 vs 1.
        rng = random.Random(402)
        segment_counts = [rng.randint(3, 30) for _ in range(40)]
        read_paths = {}
        for group_size in (1, 3):
            config = OramConfig(segment_size=SEG, group_size=group_size, rng_seed=403)
            grouped = FileStore.create(config, MemoryBackend(), SecretKey.generate())
            for i, segments in enumerate(segment_counts):
                grouped.write_file(f"f{i}", bytes(segments * SEG))
            before = grouped.engine.counters.foreground_paths
            for i in range(len(segment_counts)):
                grouped.read_file(f"f{i}")
            read_paths[group_size] = grouped.engine.counters.foreground_paths - before

        model = {
            1: sum(segment_counts),
            3: sum(-(-s // 3) for s in segment_counts),
        }
        assert read_paths == model, "instrumented counts diverge from the count model"
        speedup = read_paths[1] / read_paths[3]
        assert speedup >= 2.5, f"speedup {speedup:.2f} below 2.5x"


def test_criterion_5_block_packing_tree_ratios():
    """Final tree sizes with packing on vs off, per file size."""
    with criterion(5, "block packing tree-size ratios"):
        expectations = {16: (0.25, 0.15), 32: (0.50, 0.15), 70: (0.50, 0.15)}
        for size_kb, (center, tolerance) in expectations.items():
            report = compare_packing(size_kb, n_files=250, seed=500 + size_kb)
            off, on = report.rows
            ratio = on.buckets_final / off.buckets_final
            assert center - tolerance <= ratio <= center + tolerance, (
                f"{size_kb} KB files: bucket ratio {ratio:.3f} outside "
                f"{center} +/- {tolerance}"
            )


def test_criterion_6_resizing_band_and_no_loss():
    """Triggered resizes land in the threshold band; fuzz loses nothing."""
    with criterion(6, "resize band + grow/shrink no-loss fuzz"):
        report = resize_trace(32, seed=601)
        assert any(point["resized"] for point in report.series)
        for point in report.series:
            if point["resized"]:
                assert 0.45 <= point["utilization"] <= 0.55, (
                    f"op {point['op']}: utilization {point['utilization']:.3f} "
                    "outside [0.45, 0.55] after a triggered resize"
                )

        config = OramConfig(segment_size=SEG, rng_seed=602, stash_max=60)
        engine = PathOram.create(config, MemoryBackend(), SecretKey.generate(), n_buckets=5)
        rng = random.Random(603)
        expected = {}
        for block_id in range(25):
            payload = rng.randbytes(SEG)
            engine.access("write", block_id, payload)
            expected[block_id] = payload
        resizer = Resizer(engine)
        for _ in range(1000):
            if engine.n_buckets == 1 or (engine.n_buckets < 60 and rng.random() < 0.5):
                resizer.grow_one()
            else:
                resizer.shrink_one()
            assert scan_engine(engine) == expected


def test_criterion_7_baseline_ordering():
    """Plain writes beat encrypted writes beat the oblivious store."""
    with criterion(7, "baseline throughput ordering"):
        report = baseline_compare(n_files=24, size_kb=512, seed=701)
        speed = {row.param: row.mb_per_s for row in report.rows}
        assert speed["plain"] > speed["encrypted"] > speed["oram"], speed
        assert speed["encrypted"] / speed["oram"] > 5, (
            f"oblivious slowdown only {speed['encrypted'] / speed['oram']:.1f}x"
        )


def test_criterion_8_checkpoint_hand_off():
    """Hand-off fidelity and content-independent checkpoint size."""
    with criterion(8, "checkpoint hand-off"):
        pad = 512 * 1024
        lengths = []
        for workload_seed, n_files in ((801, 3), (802, 12)):
            backend = MemoryBackend()
            key = SecretKey.generate()
            config = OramConfig(segment_size=SEG, rng_seed=workload_seed)
            store = FileStore.create(config, backend, key)
            rng = random.Random(workload_seed)
            contents = {
                f"f{i}": rng.randbytes(rng.randint(0, 5 * SEG)) for i in range(n_files)
            }
            for name, data in contents.items():
                store.write_file(name, data)
            logout(store, key, pad_size=pad)
            lengths.append(len(backend.get_named("checkpoint")))

            restored = login(backend, key)
            check_store(restored)
            for name, data in contents.items():
                assert restored.read_file(name) == data
        assert lengths[0] == lengths[1]


def test_criterion_9_shadow_model_equivalence():
    """5,000-op fuzz against a flat map with exhaustive scans, N <= 15."""
    with criterion(9, "shadow-model oracle equivalence"):
        config = OramConfig(segment_size=SEG, rng_seed=901, stash_max=50)
        engine = PathOram.create(config, MemoryBackend(), SecretKey.generate(), n_buckets=7)
        resizer = Resizer(engine)
        rng = random.Random(902)
        shadow: dict[int, bytes] = {}
        groups: list[tuple[int, ...]] = []
        next_id = 0

        for _ in range(5000):
            action = rng.random()
            if action < 0.30 and len(shadow) < 38:
                block_id = next_id
                next_id += 1
                payload = rng.randbytes(SEG)
                engine.access("write", block_id, payload)
                shadow[block_id] = payload
            elif action < 0.45 and shadow:
                block_id = rng.choice(list(shadow))
                assert engine.access("read", block_id) == shadow[block_id]
                groups = [g for g in groups if block_id not in g]
            elif action < 0.55 and shadow:
                block_id = rng.choice(list(shadow))
                assert engine.access("delete", block_id) == shadow.pop(block_id)
                groups = [g for g in groups if block_id not in g]
            elif action < 0.70 and len(shadow) < 36:
                size = rng.randint(1, 3)
                group = tuple(range(next_id, next_id + size))
                next_id += size
                payloads = [rng.randbytes(SEG) for _ in group]
                engine.multi_access("write", group, payloads)
                shadow.update(zip(group, payloads))
                groups.append(group)
            elif action < 0.80 and groups:
                group = rng.choice(groups)
                assert engine.multi_access("read", group) == [shadow[b] for b in group]
            elif action < 0.90:
                engine.background_evict(rng.randint(1, 3))
            elif action < 0.95 and engine.n_buckets < 15:
                resizer.grow_one()
            elif engine.n_buckets > 1:
                resizer.shrink_one()
            assert engine.n_buckets <= 15
            assert len(shadow) <= 40
            assert scan_engine(engine) == shadow

"""Path-based oblivious block engine.

Blocks live in a binary tree of sealed buckets held by an untrusted
backend. The client keeps a position map assigning every live block to a
leaf and a stash of blocks not currently placed on their paths. The core
invariant: a live block is either in some bucket on the root-to-leaf path
of its assigned leaf, or in the stash.

Every logical operation reads exactly one root-to-leaf path and writes the
same path back, re-placing stash blocks greedily from the leaf upward, so
the physical trace reveals nothing about which block was touched. Grouped
operations (:meth:`PathOram.multi_access`) service several blocks sharing
one leaf through a single path access; :meth:`PathOram.background_evict`
performs dummy accesses to drain the stash under congestion.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .backend import StorageBackend
from .blocks import Block, bucket_bytes, decode_bucket, encode_bucket
from .config import OramConfig
from .crypto import SecretKey, open_envelope, seal
from .errors import (
    GroupingViolatedError,
    NotFoundError,
    OblivStoreError,
    StashOverflowError,
)
from .tree import leaf_range, path_indices

# Stash drain policy: evict in batches of EVICT_BATCH paths, at most
# EVICT_PATHS_PER_OP per operation; fail only past HARD_CAP_FACTOR x stash_max.
EVICT_BATCH = 4
EVICT_PATHS_PER_OP = 32
HARD_CAP_FACTOR = 4


@dataclass
class AccessCounters:
    """Exact instrumentation of physical work, maintained per engine."""

    foreground_paths: int = 0
    eviction_paths: int = 0
    bytes_read: int = 0
    bytes_written: int = 0

    def snapshot(self) -> "AccessCounters":
        return AccessCounters(
            self.foreground_paths, self.eviction_paths, self.bytes_read, self.bytes_written
        )


@dataclass
class PathOram:
    """The block engine. Single logical writer; see module docstring."""

    config: OramConfig
    backend: StorageBackend
    key: SecretKey
    n_buckets: int = 1
    position_map: dict[int, int] = field(default_factory=dict)
    stash: dict[int, Block] = field(default_factory=dict)
    counters: AccessCounters = field(default_factory=AccessCounters)

    def __post_init__(self) -> None:
        if self.n_buckets < 1:
            raise ValueError("tree must contain at least the root bucket")
        self._rng = random.Random(self.config.rng_seed)

    @classmethod
    def create(
        cls,
        config: OramConfig,
        backend: StorageBackend,
        key: SecretKey,
        n_buckets: int = 1,
    ) -> "PathOram":
        """Build a fresh engine, writing ``n_buckets`` all-dummy buckets."""
        engine = cls(config, backend, key, n_buckets=n_buckets)
        for index in range(n_buckets):
            engine.write_bucket(index, [])
        return engine

    # ------------------------------------------------------------------
    # Geometry and bookkeeping
    # ------------------------------------------------------------------

    @property
    def live_blocks(self) -> int:
        return len(self.position_map)

    def utilization(self) -> float:
        """Fraction of block slots holding live data (stash counts as live)."""
        return len(self.position_map) / (self.n_buckets * self.config.z)

    def leaves(self) -> range:
        return leaf_range(self.n_buckets)

    def random_leaf(self) -> int:
        """Uniform over the current childless-bucket set."""
        lo, hi = self.n_buckets // 2, self.n_buckets
        return self._rng.randrange(lo, hi)

    # ------------------------------------------------------------------
    # Sealed bucket I/O
    # ------------------------------------------------------------------

    def read_bucket(self, index: int) -> list[Block]:
        """Fetch, unseal, and parse one bucket; returns its real blocks.

        Stored leaf fields can go stale after a resize (headers in the tree
        are repaired lazily), so each block's leaf is normalized from the
        position map, which is authoritative.
        """
        envelope = self.backend.get_bucket(index)
        self.counters.bytes_read += len(envelope)
        raw = open_envelope(envelope, self.key)
        blocks = decode_bucket(raw, self.config.z, self.config.segment_size)
        for blk in blocks:
            try:
                blk.leaf = self.position_map[blk.block_id]
            except KeyError:
                raise OblivStoreError(
                    f"bucket {index} holds block {blk.block_id} with no position-map entry"
                ) from None
        return blocks

    def write_bucket(self, index: int, blocks: list[Block]) -> None:
        raw = encode_bucket(blocks, self.config.z, self.config.segment_size)
        envelope = seal(raw, self.key)
        self.counters.bytes_written += len(envelope)
        self.backend.put_bucket(index, envelope)

    def bucket_envelope_bytes(self) -> int:
        """Sealed size of any bucket; constant for a fixed config."""
        return 16 + bucket_bytes(self.config.z, self.config.segment_size)

    # ------------------------------------------------------------------
    # Path plumbing
    # ------------------------------------------------------------------

    def _fetch_path(self, leaf: int) -> list[int]:
        """Read one root-to-leaf path into the stash; returns its indices."""
        path = path_indices(leaf, self.n_buckets)
        for index in path:
            for blk in self.read_bucket(index):
                self.stash[blk.block_id] = blk
        return path

    def _write_path(self, path: list[int]) -> None:
        """Write the fetched path back, placing stash blocks greedily.

        Each stash block whose leaf path intersects ``path`` is eligible for
        every bucket on the intersection; buckets fill deepest-first so
        blocks land as close to their leaves as possible.
        """
        depth_of = {index: depth for depth, index in enumerate(path)}
        eligible_at: dict[int, list[Block]] = defaultdict(list)
        for blk in self.stash.values():
            node = blk.leaf
            while node not in depth_of:
                node = (node - 1) // 2
            eligible_at[depth_of[node]].append(blk)

        placed: dict[int, list[Block]] = {index: [] for index in path}
        pool: list[Block] = []
        for depth in range(len(path) - 1, -1, -1):
            pool.extend(eligible_at.get(depth, ()))
            bucket = placed[path[depth]]
            while pool and len(bucket) < self.config.z:
                bucket.append(pool.pop(0))
        for index in path:
            for blk in placed[index]:
                del self.stash[blk.block_id]
            self.write_bucket(index, placed[index])

    def _drain_stash(self) -> None:
        """Apply the stash pressure policy after an access."""
        if len(self.stash) <= self.config.stash_max:
            return
        for _ in range(EVICT_PATHS_PER_OP // EVICT_BATCH):
            self.background_evict(EVICT_BATCH)
            if len(self.stash) <= self.config.stash_max:
                return
        if len(self.stash) > HARD_CAP_FACTOR * self.config.stash_max:
            raise StashOverflowError(
                f"stash holds {len(self.stash)} blocks after eviction, hard cap is "
                f"{HARD_CAP_FACTOR * self.config.stash_max}"
            )

    def _check_payload(self, payload: bytes) -> bytes:
        if len(payload) != self.config.segment_size:
            raise ValueError(
                f"payload must be exactly {self.config.segment_size} bytes, "
                f"got {len(payload)}"
            )
        return bytes(payload)

    # ------------------------------------------------------------------
    # Public operations
    # ------------------------------------------------------------------

    def access(self, op: str, block_id: int, payload: bytes | None = None) -> bytes | None:
        """Single-block read, write, or delete through one path access.

        Returns the prior payload for read and delete, None for write. The
        target is remapped to a fresh uniform leaf (removed from the map
        entirely on delete); a new block id gets a fresh leaf assigned
        before the path is chosen.
        """
        if op not in ("read", "write", "delete"):
            raise ValueError(f"unknown op {op!r}")
        if op == "write":
            if payload is None:
                raise ValueError("write requires a payload")
            payload = self._check_payload(payload)
        if block_id not in self.position_map:
            if op != "write":
                raise NotFoundError(f"block {block_id} is not live")
            self.position_map[block_id] = self.random_leaf()

        leaf = self.position_map[block_id]
        path = self._fetch_path(leaf)

        result = None
        target = self.stash.get(block_id)
        if op == "write":
            if target is None:
                target = Block(block_id, leaf, payload)
                self.stash[block_id] = target
            else:
                target.payload = payload
        else:
            if target is None:
                raise OblivStoreError(
                    f"block {block_id} mapped to leaf {leaf} missing from path and stash"
                )
            result = bytes(target.payload)

        if op == "delete":
            del self.stash[block_id]
            del self.position_map[block_id]
        else:
            new_leaf = self.random_leaf()
            self.position_map[block_id] = new_leaf
            target.leaf = new_leaf

        self._write_path(path)
        self.counters.foreground_paths += 1
        self._drain_stash()
        return result

    def multi_access(
        self,
        op: str,
        group: Sequence[int],
        payloads: Sequence[bytes] | None = None,
    ) -> list[bytes] | None:
        """Service a whole same-leaf group through one path access.

        All members are remapped together to one fresh uniform leaf, so the
        grouping survives for future fetches. Returns the payload list for
        reads, None for writes.
        """
        if op not in ("read", "write"):
            raise ValueError(f"unknown op {op!r}")
        if not group:
            raise ValueError("group must not be empty")
        if len(set(group)) != len(group):
            raise ValueError("group contains duplicate block ids")
        if op == "write":
            if payloads is None or len(payloads) != len(group):
                raise ValueError("write requires one payload per group member")
            payloads = [self._check_payload(p) for p in payloads]

        mapped_leaves = {self.position_map[b] for b in group if b in self.position_map}
        if len(mapped_leaves) > 1:
            raise GroupingViolatedError(
                f"group {list(group)} spans leaves {sorted(mapped_leaves)}"
            )
        if op == "read":
            missing = [b for b in group if b not in self.position_map]
            if missing:
                raise NotFoundError(f"blocks {missing} are not live")

        if mapped_leaves:
            leaf = mapped_leaves.pop()
        else:
            leaf = self.random_leaf()
        for block_id in group:
            self.position_map.setdefault(block_id, leaf)

        path = self._fetch_path(leaf)

        results: list[bytes] = []
        for position, block_id in enumerate(group):
            target = self.stash.get(block_id)
            if op == "write":
                if target is None:
                    self.stash[block_id] = Block(block_id, leaf, payloads[position])
                else:
                    target.payload = payloads[position]
            else:
                if target is None:
                    raise OblivStoreError(
                        f"block {block_id} mapped to leaf {leaf} missing from path and stash"
                    )
                results.append(bytes(target.payload))

        new_leaf = self.random_leaf()
        for block_id in group:
            self.position_map[block_id] = new_leaf
            self.stash[block_id].leaf = new_leaf

        self._write_path(path)
        self.counters.foreground_paths += 1
        self._drain_stash()
        return results if op == "read" else None

    def modify(self, block_id: int, transform: Callable[[bytes], bytes]) -> None:
        """Read-modify-write a block's payload in a single path access."""
        if block_id not in self.position_map:
            raise NotFoundError(f"block {block_id} is not live")
        leaf = self.position_map[block_id]
        path = self._fetch_path(leaf)
        target = self.stash.get(block_id)
        if target is None:
            raise OblivStoreError(
                f"block {block_id} mapped to leaf {leaf} missing from path and stash"
            )
        target.payload = self._check_payload(transform(target.payload))
        new_leaf = self.random_leaf()
        self.position_map[block_id] = new_leaf
        target.leaf = new_leaf
        self._write_path(path)
        self.counters.foreground_paths += 1
        self._drain_stash()

    def background_evict(self, count: int) -> None:
        """Perform ``count`` dummy path accesses, draining the stash.

        Each access reads a uniform random path and writes it straight back
        with greedy placement; no block is remapped, so the physical trace
        is indistinguishable from a real access.
        """
        for _ in range(count):
            leaf = self.random_leaf()
            path = self._fetch_path(leaf)
            self._write_path(path)
            self.counters.eviction_paths += 1

    def live_ids(self) -> Iterable[int]:
        return self.position_map.keys()

"""File layer: segmentation, grouping, block packing, and metadata tables.

Files are split into segments of ``segment_size`` bytes. Full segments each
occupy one block and are written through grouped path accesses: consecutive
runs of ``group_size`` segments share a leaf, so one path access services
the whole run. A final partial segment is packed into a shared host block
alongside tails from other files, tracked by offset tables; deleting a
packed tail compacts the host so the occupied region stays a gapless
prefix. Host blocks are shared across files, so they are excluded from
groups and keep individual leaves.

Segment ids come from a monotone counter and are never reused. Overwriting
an existing name deletes the old file first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .backend import StorageBackend
from .config import OramConfig, ResizePolicy
from .crypto import SecretKey
from .errors import NotFoundError
from .oram import PathOram
from .resize import Resizer


@dataclass
class FileRecord:
    name: str
    segment_ids: list[int]
    total_bytes: int


@dataclass
class PackLocation:
    """Byte range of a packed segment inside its host block."""

    host_block_id: int
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass
class FileStore:
    engine: PathOram
    resizer: Resizer | None = None
    packing: bool = True
    auto_resize: bool = True
    files: dict[str, FileRecord] = field(default_factory=dict)
    pack_locations: dict[int, PackLocation] = field(default_factory=dict)
    free_space: dict[int, int] = field(default_factory=dict)
    next_segment_id: int = 0

    @classmethod
    def create(
        cls,
        config: OramConfig,
        backend: StorageBackend,
        key: SecretKey,
        *,
        policy: ResizePolicy | None = None,
        packing: bool = True,
        auto_resize: bool = True,
    ) -> "FileStore":
        engine = PathOram.create(config, backend, key)
        return cls(
            engine=engine,
            resizer=Resizer(engine, policy),
            packing=packing,
            auto_resize=auto_resize,
        )

    # ------------------------------------------------------------------
    # Bookkeeping
    # ------------------------------------------------------------------

    @property
    def config(self) -> OramConfig:
        return self.engine.config

    def list_files(self) -> list[str]:
        return sorted(self.files)

    def utilization(self) -> float:
        return self.engine.utilization()

    def _alloc_id(self) -> int:
        segment_id = self.next_segment_id
        self.next_segment_id += 1
        return segment_id

    def _maybe_resize(self) -> None:
        if self.auto_resize and self.resizer is not None:
            self.resizer.maybe_resize()

    def make_groups(self, segment_ids: list[int]) -> list[tuple[int, ...]]:
        """Chunk ids into consecutive runs of at most ``group_size``."""
        n = self.config.group_size
        return [tuple(segment_ids[i : i + n]) for i in range(0, len(segment_ids), n)]

    # ------------------------------------------------------------------
    # File operations
    # ------------------------------------------------------------------

    def write_file(self, name: str, data: bytes) -> None:
        if name in self.files:
            self.delete_file(name)

        segment_size = self.config.segment_size
        total = len(data)
        n_full, tail_len = divmod(total, segment_size)

        full_payloads = [
            data[i * segment_size : (i + 1) * segment_size] for i in range(n_full)
        ]
        pack_tail_bytes = None
        if tail_len:
            tail = data[n_full * segment_size :]
            if self.packing:
                pack_tail_bytes = tail
            else:
                # Packing disabled: the tail occupies a whole block.
                full_payloads.append(tail + bytes(segment_size - tail_len))

        segment_ids = [self._alloc_id() for _ in full_payloads]
        cursor = 0
        for group in self.make_groups(segment_ids):
            payloads = full_payloads[cursor : cursor + len(group)]
            cursor += len(group)
            self.engine.multi_access("write", group, payloads)
            self._maybe_resize()

        if pack_tail_bytes is not None:
            tail_id = self._alloc_id()
            segment_ids.append(tail_id)
            self.pack_tail(tail_id, pack_tail_bytes)
            self._maybe_resize()

        self.files[name] = FileRecord(name, segment_ids, total)
        self._maybe_resize()

    def read_file(self, name: str) -> bytes:
        record = self.files.get(name)
        if record is None:
            raise NotFoundError(f"no file named {name!r}")

        payload_by_id: dict[int, bytes] = {}
        full_ids = [s for s in record.segment_ids if s not in self.pack_locations]
        for group in self.make_groups(full_ids):
            payloads = self.engine.multi_access("read", group)
            payload_by_id.update(zip(group, payloads))
        for segment_id in record.segment_ids:
            if segment_id in self.pack_locations:
                loc = self.pack_locations[segment_id]
                host_payload = self.engine.access("read", loc.host_block_id)
                payload_by_id[segment_id] = host_payload[loc.start : loc.end]

        data = b"".join(payload_by_id[s] for s in record.segment_ids)
        return data[: record.total_bytes]

    def delete_file(self, name: str) -> None:
        record = self.files.pop(name, None)
        if record is None:
            raise NotFoundError(f"no file named {name!r}")
        for segment_id in record.segment_ids:
            if segment_id in self.pack_locations:
                self.unpack_and_compact(segment_id)
            else:
                self.engine.access("delete", segment_id)
            self._maybe_resize()

    # ------------------------------------------------------------------
    # Block packing
    # ------------------------------------------------------------------

    def _occupied(self, host_block_id: int) -> int:
        return self.config.segment_size - self.free_space[host_block_id]

    def pack_tail(self, segment_id: int, data: bytes) -> PackLocation:
        """Place a partial segment into a host block with spare room.

        First-fit over the free-space table in insertion order; appends at
        the end of the host's occupied prefix. Falls back to a fresh host
        block when nothing fits.
        """
        length = len(data)
        if not 0 < length < self.config.segment_size:
            raise ValueError(
                f"packed segment must be 1..{self.config.segment_size - 1} bytes, got {length}"
            )

        host = next((h for h, free in self.free_space.items() if free >= length), None)
        if host is None:
            host = self._alloc_id()
            payload = data + bytes(self.config.segment_size - length)
            self.engine.access("write", host, payload)
            self.free_space[host] = self.config.segment_size - length
            start = 0
        else:
            start = self._occupied(host)
            self.engine.modify(
                host, lambda p: p[:start] + data + p[start + length :]
            )
            self.free_space[host] -= length

        location = PackLocation(host, start, start + length)
        self.pack_locations[segment_id] = location
        return location

    def unpack_and_compact(self, segment_id: int) -> None:
        """Remove a packed segment, closing the gap it leaves behind.

        Later ranges in the host shift left by the removed length, keeping
        the occupied region a prefix; their offset entries are updated. A
        host left empty is deleted from the engine outright.
        """
        location = self.pack_locations.pop(segment_id, None)
        if location is None:
            raise NotFoundError(f"segment {segment_id} has no pack location")
        host = location.host_block_id
        length = location.length

        later = [
            (sid, loc)
            for sid, loc in self.pack_locations.items()
            if loc.host_block_id == host and loc.start >= location.end
        ]
        remaining = any(
            loc.host_block_id == host for loc in self.pack_locations.values()
        )
        if not remaining:
            self.engine.access("delete", host)
            del self.free_space[host]
            return

        def shift(payload: bytes) -> bytes:
            return payload[: location.start] + payload[location.end :] + bytes(length)

        self.engine.modify(host, shift)
        for sid, loc in later:
            self.pack_locations[sid] = PackLocation(host, loc.start - length, loc.end - length)
        self.free_space[host] += length

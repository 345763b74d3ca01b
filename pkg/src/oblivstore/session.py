"""Multi-computer hand-off through one encrypted, constant-size checkpoint.

On logout every piece of trusted client state (position map, stash, file
and packing tables, counters) is serialized in a canonical order, zero-
padded to ``pad_size``, sealed, and written to the backend as the single
named object ``checkpoint``. Any machine holding the folder and the key can
then log in and continue where the previous one stopped. Padding makes the
checkpoint length independent of content, so the server learns nothing from
its size; sessions are strictly sequential (no concurrent writers).

Counter mode carries no MAC, so a wrong key is detected structurally: a
32-bit magic constant plus per-section length fields must all validate,
which fails for garbage plaintext with probability >= 1 - 2**-32.

Checkpoint body layout (before padding and sealing), all integers
big-endian: magic u32, version u16, then length-prefixed sections in fixed
order: config, position map, stash, file table, pack table, free-space
table, counters.
"""

from __future__ import annotations

import struct

from .backend import StorageBackend
from .config import OramConfig, ResizePolicy
from .crypto import SecretKey, open_envelope, seal
from .errors import CheckpointOverflowError, CorruptCheckpointError, UnsupportedVersionError
from .filestore import FileRecord, FileStore, PackLocation
from .oram import Block, PathOram
from .resize import Resizer

MAGIC = 0x4F52414D
VERSION = 1
DEFAULT_PAD_SIZE = 4 * 1024 * 1024

_U16 = struct.Struct(">H")
_U32 = struct.Struct(">I")
_U64 = struct.Struct(">Q")


def _section(body: bytes) -> bytes:
    return _U64.pack(len(body)) + body


class _Reader:
    """Bounds-checked cursor; any overrun means a corrupt checkpoint."""

    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.buf):
            raise CorruptCheckpointError("section length exceeds checkpoint body")
        out = self.buf[self.pos : self.pos + n]
        self.pos += n
        return out

    def u16(self) -> int:
        return _U16.unpack(self.take(2))[0]

    def u32(self) -> int:
        return _U32.unpack(self.take(4))[0]

    def u64(self) -> int:
        return _U64.unpack(self.take(8))[0]

    def section(self) -> "_Reader":
        return _Reader(self.take(self.u64()))

    def expect_end(self) -> None:
        if self.pos != len(self.buf):
            raise CorruptCheckpointError("trailing bytes inside section")


def _serialize(store: FileStore) -> bytes:
    engine = store.engine
    cfg = engine.config

    config = _U32.pack(cfg.z) + _U64.pack(cfg.segment_size) + _U32.pack(cfg.stash_max) + _U32.pack(cfg.group_size)

    posmap = [_U64.pack(len(engine.position_map))]
    for block_id, leaf in engine.position_map.items():
        posmap.append(_U64.pack(block_id) + _U64.pack(leaf))

    stash = [_U64.pack(len(engine.stash))]
    for blk in engine.stash.values():
        stash.append(_U64.pack(blk.block_id) + _U64.pack(blk.leaf) + blk.payload)

    files = [_U64.pack(len(store.files))]
    for record in store.files.values():
        name = record.name.encode("utf-8")
        files.append(_U16.pack(len(name)) + name)
        files.append(_U64.pack(record.total_bytes))
        files.append(_U64.pack(len(record.segment_ids)))
        files.extend(_U64.pack(s) for s in record.segment_ids)

    packs = [_U64.pack(len(store.pack_locations))]
    for segment_id, loc in store.pack_locations.items():
        packs.append(
            _U64.pack(segment_id)
            + _U64.pack(loc.host_block_id)
            + _U64.pack(loc.start)
            + _U64.pack(loc.end)
        )

    # Free-space entries keep their insertion order: first-fit depends on it.
    free = [_U64.pack(len(store.free_space))]
    for host, amount in store.free_space.items():
        free.append(_U64.pack(host) + _U64.pack(amount))

    counters = (
        _U64.pack(store.next_segment_id)
        + _U64.pack(engine.n_buckets)
        + _U64.pack(engine.counters.foreground_paths)
        + _U64.pack(engine.counters.eviction_paths)
    )

    return b"".join(
        [
            _U32.pack(MAGIC),
            _U16.pack(VERSION),
            _section(config),
            _section(b"".join(posmap)),
            _section(b"".join(stash)),
            _section(b"".join(files)),
            _section(b"".join(packs)),
            _section(b"".join(free)),
            _section(counters),
        ]
    )


def logout(store: FileStore, key: SecretKey, *, pad_size: int = DEFAULT_PAD_SIZE) -> int:
    """Seal all client state into the checkpoint object; returns its size.

    Raises CheckpointOverflowError when the state does not fit ``pad_size``;
    nothing is ever silently truncated. Local state may be discarded after
    this returns.
    """
    body = _serialize(store)
    if len(body) > pad_size:
        raise CheckpointOverflowError(
            f"state needs {len(body)} bytes but pad size is {pad_size}; raise pad_size"
        )
    envelope = seal(body + bytes(pad_size - len(body)), key)
    store.engine.backend.put_named("checkpoint", envelope)
    return len(envelope)


def login(
    backend: StorageBackend,
    key: SecretKey,
    *,
    policy: ResizePolicy | None = None,
    packing: bool = True,
    auto_resize: bool = True,
    rng_seed: int | None = None,
) -> FileStore:
    """Reconstruct a :class:`FileStore` from the checkpoint object.

    Raises MissingObjectError when no checkpoint exists, CorruptCheckpointError
    on validation failure (including wrong keys), and UnsupportedVersionError
    on a format mismatch.
    """
    envelope = backend.get_named("checkpoint")
    body = open_envelope(envelope, key)
    reader = _Reader(body)

    if reader.u32() != MAGIC:
        raise CorruptCheckpointError("bad magic: wrong key or damaged checkpoint")
    version = reader.u16()
    if version != VERSION:
        raise UnsupportedVersionError(f"checkpoint version {version}, supported: {VERSION}")

    sec = reader.section()
    try:
        config = OramConfig(
            z=sec.u32(),
            segment_size=sec.u64(),
            stash_max=sec.u32(),
            group_size=sec.u32(),
            rng_seed=rng_seed,
        )
    except ValueError as exc:
        raise CorruptCheckpointError(f"invalid config section: {exc}") from exc
    sec.expect_end()

    sec = reader.section()
    position_map = {}
    for _ in range(sec.u64()):
        block_id = sec.u64()
        position_map[block_id] = sec.u64()
    sec.expect_end()

    sec = reader.section()
    stash = {}
    for _ in range(sec.u64()):
        block_id = sec.u64()
        leaf = sec.u64()
        stash[block_id] = Block(block_id, leaf, sec.take(config.segment_size))
    sec.expect_end()

    sec = reader.section()
    files = {}
    for _ in range(sec.u64()):
        try:
            name = sec.take(sec.u16()).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptCheckpointError("file name is not valid UTF-8") from exc
        total_bytes = sec.u64()
        segment_ids = [sec.u64() for _ in range(sec.u64())]
        files[name] = FileRecord(name, segment_ids, total_bytes)
    sec.expect_end()

    sec = reader.section()
    pack_locations = {}
    for _ in range(sec.u64()):
        segment_id = sec.u64()
        pack_locations[segment_id] = PackLocation(sec.u64(), sec.u64(), sec.u64())
    sec.expect_end()

    sec = reader.section()
    free_space = {}
    for _ in range(sec.u64()):
        host = sec.u64()
        free_space[host] = sec.u64()
    sec.expect_end()

    sec = reader.section()
    next_segment_id = sec.u64()
    n_buckets = sec.u64()
    foreground_paths = sec.u64()
    eviction_paths = sec.u64()
    sec.expect_end()

    if n_buckets < 1:
        raise CorruptCheckpointError("checkpoint claims an empty tree")

    engine = PathOram(
        config,
        backend,
        key,
        n_buckets=n_buckets,
        position_map=position_map,
        stash=stash,
    )
    engine.counters.foreground_paths = foreground_paths
    engine.counters.eviction_paths = eviction_paths
    return FileStore(
        engine=engine,
        resizer=Resizer(engine, policy),
        packing=packing,
        auto_resize=auto_resize,
        files=files,
        pack_locations=pack_locations,
        free_space=free_space,
        next_segment_id=next_segment_id,
    )

"""Block and bucket wire format.

Plaintext block layout: 8-byte big-endian block id, 8-byte big-endian leaf,
then exactly ``segment_size`` payload bytes. A bucket plaintext is ``z``
concatenated blocks; unused slots are filled with dummy blocks carrying the
all-ones id sentinel and a uniformly random payload, so a sealed bucket's
length never depends on how many slots are real.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

DUMMY_ID = 2**64 - 1
BLOCK_HEADER = struct.Struct(">QQ")
HEADER_BYTES = BLOCK_HEADER.size


@dataclass
class Block:
    block_id: int
    leaf: int
    payload: bytes


def block_bytes(segment_size: int) -> int:
    return HEADER_BYTES + segment_size


def bucket_bytes(z: int, segment_size: int) -> int:
    return z * block_bytes(segment_size)


def encode_bucket(blocks: list[Block], z: int, segment_size: int) -> bytes:
    """Serialize up to ``z`` real blocks, padding with fresh dummies."""
    if len(blocks) > z:
        raise ValueError(f"bucket holds {z} slots, got {len(blocks)} blocks")
    parts = []
    for blk in blocks:
        if len(blk.payload) != segment_size:
            raise ValueError(
                f"payload of block {blk.block_id} is {len(blk.payload)} bytes, "
                f"expected {segment_size}"
            )
        parts.append(BLOCK_HEADER.pack(blk.block_id, blk.leaf))
        parts.append(blk.payload)
    for _ in range(z - len(blocks)):
        parts.append(BLOCK_HEADER.pack(DUMMY_ID, 0))
        parts.append(os.urandom(segment_size))
    return b"".join(parts)


def decode_bucket(raw: bytes, z: int, segment_size: int) -> list[Block]:
    """Parse a bucket plaintext, dropping dummy slots."""
    expected = bucket_bytes(z, segment_size)
    if len(raw) != expected:
        raise ValueError(f"bucket plaintext is {len(raw)} bytes, expected {expected}")
    blocks = []
    stride = block_bytes(segment_size)
    for slot in range(z):
        off = slot * stride
        block_id, leaf = BLOCK_HEADER.unpack_from(raw, off)
        if block_id == DUMMY_ID:
            continue
        payload = raw[off + HEADER_BYTES : off + stride]
        blocks.append(Block(block_id, leaf, payload))
    return blocks

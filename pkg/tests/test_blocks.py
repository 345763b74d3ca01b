import os

import pytest

from oblivstore.blocks import (
    DUMMY_ID,
    Block,
    bucket_bytes,
    decode_bucket,
    encode_bucket,
)

SEG = 1024


def _block(block_id, leaf=0):
    return Block(block_id, leaf, os.urandom(SEG))


def test_round_trip_partial_bucket():
    blocks = [_block(1, 5), _block(2, 9)]
    decoded = decode_bucket(encode_bucket(blocks, 3, SEG), 3, SEG)
    assert [(b.block_id, b.leaf, b.payload) for b in decoded] == [
        (b.block_id, b.leaf, b.payload) for b in blocks
    ]


def test_empty_bucket_is_all_dummies():
    raw = encode_bucket([], 3, SEG)
    assert len(raw) == bucket_bytes(3, SEG) == 3 * (16 + SEG)
    assert decode_bucket(raw, 3, SEG) == []


def test_length_independent_of_occupancy():
    assert len(encode_bucket([], 3, SEG)) == len(encode_bucket([_block(7)], 3, SEG))


def test_dummy_payloads_are_random():
    # Two all-dummy encodings must not share payload bytes.
    assert encode_bucket([], 3, SEG)[16:] != encode_bucket([], 3, SEG)[16:]


def test_overfull_bucket_rejected():
    with pytest.raises(ValueError):
        encode_bucket([_block(i) for i in range(4)], 3, SEG)


def test_wrong_payload_size_rejected():
    with pytest.raises(ValueError):
        encode_bucket([Block(1, 0, b"tiny")], 3, SEG)


def test_wrong_bucket_size_rejected():
    with pytest.raises(ValueError):
        decode_bucket(b"\x00" * 100, 3, SEG)


def test_dummy_sentinel_never_decodes():
    raw = encode_bucket([Block(DUMMY_ID - 1, 3, bytes(SEG))], 2, SEG)
    decoded = decode_bucket(raw, 2, SEG)
    assert len(decoded) == 1 and decoded[0].block_id == DUMMY_ID - 1

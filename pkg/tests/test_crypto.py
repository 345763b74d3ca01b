import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oblivstore.crypto import NONCE_BYTES, SecretKey, open_envelope, seal
from oblivstore.errors import MalformedEnvelopeError


def test_round_trip_1kib(key):
    plaintext = os.urandom(1024)
    assert open_envelope(seal(plaintext, key), key) == plaintext


def test_fresh_nonce_every_seal(key):
    plaintext = b"same plaintext"
    a = seal(plaintext, key)
    b = seal(plaintext, key)
    assert a[:NONCE_BYTES] != b[:NONCE_BYTES]
    assert a[NONCE_BYTES:] != b[NONCE_BYTES:]


def test_envelope_length_for_bucket_plaintext(key):
    # A z=3 bucket of 64 KB segments: 3 * (16 + 65536) plaintext bytes.
    plaintext = bytes(3 * (16 + 65536))
    assert len(seal(plaintext, key)) == 16 + 3 * (16 + 65536) == 196672


@given(st.integers(min_value=0, max_value=2048))
def test_round_trip_all_lengths(length):
    key = SecretKey(b"0123456789abcdef")
    plaintext = os.urandom(length)
    envelope = seal(plaintext, key)
    assert len(envelope) == NONCE_BYTES + length
    assert open_envelope(envelope, key) == plaintext


def test_length_depends_only_on_plaintext_size(key):
    assert len(seal(bytes(500), key)) == len(seal(os.urandom(500), key))


def test_wrong_key_yields_garbage(key):
    plaintext = os.urandom(256)
    envelope = seal(plaintext, key)
    assert open_envelope(envelope, SecretKey.generate()) != plaintext


def test_short_envelope_rejected(key):
    with pytest.raises(MalformedEnvelopeError):
        open_envelope(b"\x00" * 15, key)
    # Exactly the nonce is an empty message, not an error.
    assert open_envelope(os.urandom(16), key) == b""


def test_key_length_enforced():
    with pytest.raises(ValueError):
        SecretKey(b"short")


def test_key_repr_hides_material():
    material = b"super secret ky!"
    assert material.hex() not in repr(SecretKey(material))
    assert b"super" not in repr(SecretKey(material)).encode()


def test_passphrase_derivation_deterministic():
    salt = b"\x01" * 16
    a = SecretKey.from_passphrase("hunter2", salt)
    b = SecretKey.from_passphrase("hunter2", salt)
    c = SecretKey.from_passphrase("hunter2", b"\x02" * 16)
    d = SecretKey.from_passphrase("hunter3", salt)
    assert a == b
    assert a != c
    assert a != d

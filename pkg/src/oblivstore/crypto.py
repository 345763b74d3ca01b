"""Bucket and checkpoint sealing with AES-128 in counter mode.

Every write uses a fresh random 16-byte nonce, stored as the envelope
prefix, so identical plaintexts never produce identical ciphertexts.
Counter mode is unauthenticated: decrypting with the wrong key yields
garbage bytes rather than an error. The threat model is an honest-but-
curious server; tamper evidence is an extension point, not built here.
"""

from __future__ import annotations

import hashlib
import os

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .errors import MalformedEnvelopeError

KEY_BYTES = 16
NONCE_BYTES = 16

_SCRYPT_N = 2**14
_SCRYPT_R = 8
_SCRYPT_P = 1


class SecretKey:
    """Immutable 16-byte symmetric key. Never written to the backend."""

    __slots__ = ("_material",)

    def __init__(self, material: bytes):
        if len(material) != KEY_BYTES:
            raise ValueError(f"key must be {KEY_BYTES} bytes, got {len(material)}")
        self._material = bytes(material)

    @classmethod
    def generate(cls) -> "SecretKey":
        return cls(os.urandom(KEY_BYTES))

    @classmethod
    def from_passphrase(cls, passphrase: str, salt: bytes) -> "SecretKey":
        material = hashlib.scrypt(
            passphrase.encode("utf-8"),
            salt=salt,
            n=_SCRYPT_N,
            r=_SCRYPT_R,
            p=_SCRYPT_P,
            dklen=KEY_BYTES,
        )
        return cls(material)

    @property
    def material(self) -> bytes:
        return self._material

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SecretKey):
            return self._material == other._material
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._material)

    def __repr__(self) -> str:  # never leak key bytes
        return "SecretKey(<16 bytes>)"


def seal(plaintext: bytes, key: SecretKey) -> bytes:
    """Encrypt under a fresh nonce; returns nonce || ciphertext."""
    nonce = os.urandom(NONCE_BYTES)
    encryptor = Cipher(algorithms.AES(key.material), modes.CTR(nonce)).encryptor()
    return nonce + encryptor.update(plaintext) + encryptor.finalize()


def open_envelope(envelope: bytes, key: SecretKey) -> bytes:
    """Decrypt an envelope produced by :func:`seal`.

    Raises MalformedEnvelopeError when the envelope cannot even contain a
    nonce. A wrong key produces garbage plaintext, not an error; callers
    validate structure downstream.
    """
    if len(envelope) < NONCE_BYTES:
        raise MalformedEnvelopeError(
            f"envelope of {len(envelope)} bytes is shorter than the {NONCE_BYTES}-byte nonce"
        )
    nonce = envelope[:NONCE_BYTES]
    decryptor = Cipher(algorithms.AES(key.material), modes.CTR(nonce)).decryptor()
    return decryptor.update(envelope[NONCE_BYTES:]) + decryptor.finalize()

"""Hashing, signatures, and Base58 text encoding.

SHA3-256 addresses every transaction and block; ED25519 signs them; Base58
(Bitcoin alphabet) renders keys and signatures as text that survives JSON,
URLs, and humans.
"""

from __future__ import annotations

import hashlib

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .errors import Base58DecodeError, InvalidKeyError, InvalidSeedError

__all__ = [
    "sha3_256",
    "base58_encode",
    "base58_decode",
    "generate_keypair",
    "sign",
    "verify_signature",
]

SEED_LEN = 32
PUBKEY_LEN = 32
SIGNATURE_LEN = 64

_B58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_B58_INDEX = {c: i for i, c in enumerate(_B58_ALPHABET)}


def sha3_256(data: bytes) -> str:
    """SHA3-256 digest as 64 lowercase hex characters."""
    return hashlib.sha3_256(data).hexdigest()


def base58_encode(data: bytes) -> str:
    n = int.from_bytes(data, "big")
    encoded = ""
    while n:
        n, rem = divmod(n, 58)
        encoded = _B58_ALPHABET[rem] + encoded
    # Leading zero bytes carry no weight in the integer; each becomes a '1'.
    pad = 0
    for byte in data:
        if byte:
            break
        pad += 1
    return "1" * pad + encoded


def base58_decode(text: str) -> bytes:
    n = 0
    for ch in text:
        try:
            n = n * 58 + _B58_INDEX[ch]
        except KeyError:
            raise Base58DecodeError(f"invalid Base58 character {ch!r}") from None
    pad = 0
    for ch in text:
        if ch != "1":
            break
        pad += 1
    body = n.to_bytes((n.bit_length() + 7) // 8, "big") if n else b""
    return b"\x00" * pad + body


def generate_keypair(seed: bytes | None = None) -> tuple[str, str]:
    """Return a (private_key, public_key) pair, both Base58 text.

    The private key is the 32-byte ED25519 seed. A caller-provided seed gives
    a reproducible keypair for tests; omit it for a random one.
    """
    if seed is None:
        private = Ed25519PrivateKey.generate()
    else:
        if len(seed) != SEED_LEN:
            raise InvalidSeedError(f"seed must be {SEED_LEN} bytes, got {len(seed)}")
        private = Ed25519PrivateKey.from_private_bytes(seed)
    seed_bytes = private.private_bytes(
        serialization.Encoding.Raw,
        serialization.PrivateFormat.Raw,
        serialization.NoEncryption(),
    )
    pub_bytes = private.public_key().public_bytes(
        serialization.Encoding.Raw, serialization.PublicFormat.Raw
    )
    return base58_encode(seed_bytes), base58_encode(pub_bytes)


def _private_from_b58(private_key: str) -> Ed25519PrivateKey:
    raw = base58_decode(private_key)
    if len(raw) != SEED_LEN:
        raise InvalidKeyError(f"private key decodes to {len(raw)} bytes")
    return Ed25519PrivateKey.from_private_bytes(raw)


def sign(message: bytes, private_key: str) -> str:
    """Sign message bytes; returns the Base58 signature."""
    return base58_encode(_private_from_b58(private_key).sign(message))


def verify_signature(message: bytes, signature: str, public_key: str) -> bool:
    """True iff signature is valid for message under public_key.

    Malformed keys or signatures verify as False rather than raising: on the
    verification path they are indistinguishable from tampering.
    """
    try:
        raw_key = base58_decode(public_key)
        raw_sig = base58_decode(signature)
    except Base58DecodeError:
        return False
    if len(raw_key) != PUBKEY_LEN or len(raw_sig) != SIGNATURE_LEN:
        return False
    try:
        Ed25519PublicKey.from_public_bytes(raw_key).verify(raw_sig, message)
    except (InvalidSignature, ValueError):
        return False
    return True

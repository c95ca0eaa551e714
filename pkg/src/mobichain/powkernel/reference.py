"""Reference nonce search on hashlib's SHA3-256.

This is the correctness oracle for the accelerated kernels: slowest path,
shortest code, standard library only.
"""

from __future__ import annotations

import hashlib

NAME = "hashlib"


def search(
    prefix: bytes, suffix: bytes, difficulty_digits: int, start: int, count: int
) -> int:
    """Smallest nonce in [start, start+count) whose digest passes, else -1."""
    zeros = "0" * difficulty_digits
    for nonce in range(start, start + count):
        digest = hashlib.sha3_256(prefix + str(nonce).encode() + suffix).hexdigest()
        if digest.startswith(zeros):
            return nonce
    return -1

"""Keccak-f[1600] constant tables, derived at import time.

Deriving the tables from the permutation's definition (instead of pasting
magic numbers) means a typo is impossible; the kernels that consume them are
checked against hashlib by the test suite anyway.

Lane layout used by both kernels: flat index x + 5*y, which is also the order
in which message bytes fill lanes during absorption (8 bytes per lane,
little-endian).
"""

from __future__ import annotations

import numpy as np

RATE_BYTES = 136  # SHA3-256: 1600/8 - 2*32
RATE_LANES = RATE_BYTES // 8
DIGEST_BYTES = 32


def _round_constants() -> list[int]:
    # LFSR x^8 + x^6 + x^5 + x^4 + 1 over GF(2), one bit per (round, j).
    constants = []
    state = 1
    for _ in range(24):
        rc = 0
        for j in range(7):
            state = ((state << 1) ^ ((state >> 7) * 0x71)) & 0xFF
            if state & 2:
                rc ^= 1 << ((1 << j) - 1)
        constants.append(rc)
    return constants


def _rho_pi_walk() -> tuple[list[int], list[int]]:
    # The rho/pi step visits lanes in a fixed cycle starting at (1, 0); each
    # step t rotates by the triangular number (t+1)(t+2)/2 mod 64.
    indices = []
    rotations = []
    x, y = 1, 0
    for t in range(24):
        x, y = y, (2 * x + 3 * y) % 5
        indices.append(x + 5 * y)
        rotations.append(((t + 1) * (t + 2) // 2) % 64)
    return indices, rotations


_pi, _rot = _rho_pi_walk()

RC = np.array(_round_constants(), dtype=np.uint64)
PI_INDICES = np.array(_pi, dtype=np.int64)
ROTATIONS = np.array(_rot, dtype=np.uint64)

"""Pure-numpy nonce search: Keccak-f[1600] over lane-parallel nonce batches.

One state lane is a length-N vector, so each permutation instruction advances
N candidate nonces at once. Candidates inside a batch share an ascii digit
count so the message matrix stays rectangular; the search splits ranges at
powers of ten to guarantee that.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .tables import PI_INDICES, RATE_BYTES, RC, ROTATIONS

NAME = "numpy"

_BATCH = 512


def _digit_runs(start: int, count: int) -> Iterator[tuple[int, int, int]]:
    """Split [start, start+count) into maximal runs of equal digit count."""
    end = start + count
    while start < end:
        digits = len(str(start))
        run_end = min(end, 10**digits)
        yield start, run_end - start, digits
        start = run_end


def _rol(lanes: np.ndarray, r: int) -> np.ndarray:
    # r is never 0 here (theta uses 1, the rho offsets are all nonzero)
    return (lanes << np.uint64(r)) | (lanes >> np.uint64(64 - r))


def _keccak_f(state: np.ndarray) -> None:
    """In-place permutation of state with shape (25, n)."""
    for rnd in range(24):
        c = [
            state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20]
            for x in range(5)
        ]
        for x in range(5):
            d = c[(x + 4) % 5] ^ _rol(c[(x + 1) % 5], 1)
            for y in range(0, 25, 5):
                state[x + y] ^= d
        current = state[1].copy()
        for t in range(24):
            idx = int(PI_INDICES[t])
            nxt = state[idx].copy()
            state[idx] = _rol(current, int(ROTATIONS[t]))
            current = nxt
        for y in range(0, 25, 5):
            row = state[y : y + 5].copy()
            for x in range(5):
                state[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5])
        state[0] ^= RC[rnd]


def _sha3_batch(messages: np.ndarray) -> np.ndarray:
    """SHA3-256 of each column; messages is (length, n) uint8, returns (4, n) lanes."""
    length, n = messages.shape
    padded_len = ((length // RATE_BYTES) + 1) * RATE_BYTES
    padded = np.zeros((padded_len, n), dtype=np.uint8)
    padded[:length] = messages
    padded[length] = 0x06
    padded[padded_len - 1] ^= 0x80

    state = np.zeros((25, n), dtype=np.uint64)
    shifts = np.uint64(8) * np.arange(8, dtype=np.uint64)
    for offset in range(0, padded_len, RATE_BYTES):
        block = padded[offset : offset + RATE_BYTES].astype(np.uint64)
        for lane in range(RATE_BYTES // 8):
            chunk = block[lane * 8 : lane * 8 + 8]
            acc = np.zeros(n, dtype=np.uint64)
            for j in range(8):
                acc |= chunk[j] << shifts[j]
            state[lane] ^= acc
        _keccak_f(state)
    return state[:4]


def _passes(digest_lanes: np.ndarray, difficulty: int) -> np.ndarray:
    ok = np.ones(digest_lanes.shape[1], dtype=bool)
    for k in range(difficulty // 2):
        byte = (digest_lanes[k // 8] >> np.uint64(8 * (k % 8))) & np.uint64(0xFF)
        ok &= byte == 0
    if difficulty % 2:
        half = difficulty // 2
        byte = (digest_lanes[half // 8] >> np.uint64(8 * (half % 8))) & np.uint64(0xFF)
        ok &= byte < 16
    return ok


def search(
    prefix: bytes, suffix: bytes, difficulty_digits: int, start: int, count: int
) -> int:
    prefix_col = np.frombuffer(prefix, dtype=np.uint8)[:, None]
    suffix_col = np.frombuffer(suffix, dtype=np.uint8)[:, None]
    plen = prefix_col.shape[0]
    slen = suffix_col.shape[0]

    for run_start, run_count, digits in _digit_runs(start, count):
        for chunk_start in range(run_start, run_start + run_count, _BATCH):
            n = min(_BATCH, run_start + run_count - chunk_start)
            nonces = np.arange(chunk_start, chunk_start + n, dtype=np.uint64)
            messages = np.empty((plen + digits + slen, n), dtype=np.uint8)
            messages[:plen] = prefix_col
            for k in range(digits):
                power = np.uint64(10 ** (digits - 1 - k))
                messages[plen + k] = (nonces // power) % np.uint64(10) + np.uint64(48)
            messages[plen + digits :] = suffix_col
            hits = _passes(_sha3_batch(messages), difficulty_digits)
            winners = np.flatnonzero(hits)
            if winners.size:
                return chunk_start + int(winners[0])
    return -1

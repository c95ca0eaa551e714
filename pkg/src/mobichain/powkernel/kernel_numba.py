"""Numba-compiled nonce search: scalar Keccak-f[1600] in an @njit loop.

Importing this module requires numba; callers go through the backend
registry, which treats an ImportError here as "backend unavailable".
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .tables import PI_INDICES, RATE_BYTES, RC, ROTATIONS

NAME = "numba"

_U64 = np.uint64
_ONE = _U64(1)
_SIXTYFOUR = _U64(64)


@njit(cache=True)
def _keccak_f(s):
    for rnd in range(24):
        # theta
        c0 = s[0] ^ s[5] ^ s[10] ^ s[15] ^ s[20]
        c1 = s[1] ^ s[6] ^ s[11] ^ s[16] ^ s[21]
        c2 = s[2] ^ s[7] ^ s[12] ^ s[17] ^ s[22]
        c3 = s[3] ^ s[8] ^ s[13] ^ s[18] ^ s[23]
        c4 = s[4] ^ s[9] ^ s[14] ^ s[19] ^ s[24]
        d0 = c4 ^ ((c1 << _ONE) | (c1 >> _U64(63)))
        d1 = c0 ^ ((c2 << _ONE) | (c2 >> _U64(63)))
        d2 = c1 ^ ((c3 << _ONE) | (c3 >> _U64(63)))
        d3 = c2 ^ ((c4 << _ONE) | (c4 >> _U64(63)))
        d4 = c3 ^ ((c0 << _ONE) | (c0 >> _U64(63)))
        for y in range(0, 25, 5):
            s[y] ^= d0
            s[y + 1] ^= d1
            s[y + 2] ^= d2
            s[y + 3] ^= d3
            s[y + 4] ^= d4
        # rho + pi: rotate lanes while walking the permutation cycle
        current = s[1]
        for t in range(24):
            idx = PI_INDICES[t]
            rot = ROTATIONS[t]
            nxt = s[idx]
            s[idx] = (current << rot) | (current >> (_SIXTYFOUR - rot))
            current = nxt
        # chi, row by row
        for y in range(0, 25, 5):
            t0 = s[y]
            t1 = s[y + 1]
            t2 = s[y + 2]
            t3 = s[y + 3]
            t4 = s[y + 4]
            s[y] = t0 ^ ((~t1) & t2)
            s[y + 1] = t1 ^ ((~t2) & t3)
            s[y + 2] = t2 ^ ((~t3) & t4)
            s[y + 3] = t3 ^ ((~t4) & t0)
            s[y + 4] = t4 ^ ((~t0) & t1)
        # iota
        s[0] ^= RC[rnd]


@njit(cache=True)
def _search_jit(prefix, suffix, difficulty, start, count):
    plen = prefix.shape[0]
    slen = suffix.shape[0]
    max_len = plen + 20 + slen  # 20 digits covers any uint64 nonce
    buf = np.zeros(((max_len // RATE_BYTES) + 1) * RATE_BYTES, dtype=np.uint8)
    digits = np.zeros(20, dtype=np.uint8)
    state = np.zeros(25, dtype=np.uint64)
    full_zero_bytes = difficulty // 2
    odd = difficulty % 2 == 1

    for nonce in range(start, start + count):
        # ascii digits of the nonce, most significant first
        n = nonce
        dlen = 0
        if n == 0:
            digits[0] = 48
            dlen = 1
        else:
            while n > 0:
                digits[dlen] = 48 + n % 10
                n //= 10
                dlen += 1
        msg_len = plen + dlen + slen
        padded = ((msg_len // RATE_BYTES) + 1) * RATE_BYTES

        for i in range(plen):
            buf[i] = prefix[i]
        for i in range(dlen):
            buf[plen + i] = digits[dlen - 1 - i]
        for i in range(slen):
            buf[plen + dlen + i] = suffix[i]
        for i in range(msg_len, padded):
            buf[i] = 0
        buf[msg_len] = 0x06
        buf[padded - 1] ^= 0x80

        for i in range(25):
            state[i] = 0
        for block in range(0, padded, RATE_BYTES):
            for lane in range(RATE_BYTES // 8):
                acc = _U64(0)
                base = block + lane * 8
                for j in range(8):
                    acc |= _U64(buf[base + j]) << _U64(8 * j)
                state[lane] ^= acc
            _keccak_f(state)

        ok = True
        for k in range(full_zero_bytes):
            if (state[k // 8] >> _U64(8 * (k % 8))) & _U64(0xFF) != _U64(0):
                ok = False
                break
        if ok and odd:
            if (state[full_zero_bytes // 8] >> _U64(8 * (full_zero_bytes % 8))) & _U64(
                0xFF
            ) >= _U64(16):
                ok = False
        if ok:
            return nonce
    return -1


def search(
    prefix: bytes, suffix: bytes, difficulty_digits: int, start: int, count: int
) -> int:
    return int(
        _search_jit(
            np.frombuffer(prefix, dtype=np.uint8).copy(),
            np.frombuffer(suffix, dtype=np.uint8).copy(),
            difficulty_digits,
            start,
            count,
        )
    )

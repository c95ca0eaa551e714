"""Slow, self-contained Ed25519 written straight from the RFC 8032 pseudocode.

Exists purely as an independent oracle for the test suite: signatures made
by the production code must verify here, and public keys derived from the
same seed must match byte for byte. Never import this outside tests.
"""

import hashlib

P = 2**255 - 19
Q = 2**252 + 27742317777372353535851937790883648493
D = (-121665 * pow(121666, P - 2, P)) % P
SQRT_M1 = pow(2, (P - 1) // 4, P)


def _sha512(data: bytes) -> bytes:
    return hashlib.sha512(data).digest()


def _point_add(a, b):
    e = (a[1] - a[0]) * (b[1] - b[0]) % P
    f = (a[1] + a[0]) * (b[1] + b[0]) % P
    g = 2 * a[3] * b[3] * D % P
    h = 2 * a[2] * b[2] % P
    return (
        (f - e) * (h - g) % P,
        (h + g) * (f + e) % P,
        (h - g) * (h + g) % P,
        (f - e) * (f + e) % P,
    )


def _point_mul(scalar, point):
    result = (0, 1, 1, 0)
    while scalar:
        if scalar & 1:
            result = _point_add(result, point)
        point = _point_add(point, point)
        scalar >>= 1
    return result


def _point_equal(a, b):
    return (
        (a[0] * b[2] - b[0] * a[2]) % P == 0
        and (a[1] * b[2] - b[1] * a[2]) % P == 0
    )


def _recover_x(y, sign):
    if y >= P:
        return None
    x2 = (y * y - 1) * pow(D * y * y + 1, P - 2, P) % P
    if x2 == 0:
        return None if sign else 0
    x = pow(x2, (P + 3) // 8, P)
    if (x * x - x2) % P != 0:
        x = x * SQRT_M1 % P
    if (x * x - x2) % P != 0:
        return None
    if (x & 1) != sign:
        x = P - x
    return x


_G_Y = 4 * pow(5, P - 2, P) % P
_G_X = _recover_x(_G_Y, 0)
G = (_G_X, _G_Y, 1, _G_X * _G_Y % P)


def _compress(point):
    zinv = pow(point[2], P - 2, P)
    x = point[0] * zinv % P
    y = point[1] * zinv % P
    return int.to_bytes(y | ((x & 1) << 255), 32, "little")


def _decompress(data):
    if len(data) != 32:
        return None
    y = int.from_bytes(data, "little")
    sign = y >> 255
    y &= (1 << 255) - 1
    x = _recover_x(y, sign)
    if x is None:
        return None
    return (x, y, 1, x * y % P)


def _expand_secret(secret: bytes):
    if len(secret) != 32:
        raise ValueError("secret must be 32 bytes")
    h = _sha512(secret)
    a = int.from_bytes(h[:32], "little")
    a &= (1 << 254) - 8
    a |= 1 << 254
    return a, h[32:]


def _scalar_from_hash(data: bytes) -> int:
    return int.from_bytes(_sha512(data), "little") % Q


def public_key(secret: bytes) -> bytes:
    a, _ = _expand_secret(secret)
    return _compress(_point_mul(a, G))


def sign(secret: bytes, message: bytes) -> bytes:
    a, prefix = _expand_secret(secret)
    public = _compress(_point_mul(a, G))
    r = _scalar_from_hash(prefix + message)
    big_r = _compress(_point_mul(r, G))
    h = _scalar_from_hash(big_r + public + message)
    s = (r + h * a) % Q
    return big_r + int.to_bytes(s, 32, "little")


def verify(public: bytes, message: bytes, signature: bytes) -> bool:
    if len(public) != 32 or len(signature) != 64:
        return False
    point_a = _decompress(public)
    if point_a is None:
        return False
    big_r = signature[:32]
    point_r = _decompress(big_r)
    if point_r is None:
        return False
    s = int.from_bytes(signature[32:], "little")
    if s >= Q:
        return False
    h = _scalar_from_hash(big_r + public + message)
    return _point_equal(
        _point_mul(s, G), _point_add(point_r, _point_mul(h, point_a))
    )

"""Proof-of-work: find the smallest nonce whose block id meets the difficulty.

The candidate id is SHA3-256 over the canonical header document
{block_number, nonce, previous_block, tx_hash}. Only the ascii digits of the
nonce change between iterations, so the canonical bytes are split once around
the nonce and the search kernels re-assemble prefix + digits + suffix per
candidate.

Three interchangeable kernels exist:

- ``numba``:   scalar Keccak in an @njit loop (fastest, needs numba)
- ``numpy``:   batched Keccak, one vector element per candidate nonce
- ``hashlib``: stdlib reference, also the oracle the others are tested against

The ``MOBICHAIN_POW_BACKEND`` environment variable picks one; the default
``auto`` takes numba when it imports and falls back to numpy otherwise.
Whatever the kernel, the winning digest is recomputed from the full canonical
document through hashlib before it is returned, so an accelerated-kernel bug
can surface only as a raised error, never as a bad block.
"""

from __future__ import annotations

import hashlib
import importlib
import os
from typing import Callable

from ..canonical import canonical_serialize
from ..errors import MobiChainError, PowCapExceededError
from ..models import Difficulty, block_header_doc

__all__ = [
    "BACKEND_ENV_VAR",
    "available_backends",
    "resolve_backend",
    "split_preimage",
    "proof_of_work",
]

BACKEND_ENV_VAR = "MOBICHAIN_POW_BACKEND"

_SEARCH_BATCH = 16384

# name -> module path; "auto" resolves through this order
_KERNEL_MODULES = {
    "numba": ".kernel_numba",
    "numpy": ".kernel_numpy",
    "hashlib": ".reference",
}
_AUTO_ORDER = ("numba", "numpy")

SearchFn = Callable[[bytes, bytes, int, int, int], int]

_loaded: dict[str, SearchFn | None] = {}


def _load(name: str) -> SearchFn | None:
    if name not in _loaded:
        try:
            module = importlib.import_module(_KERNEL_MODULES[name], __package__)
            _loaded[name] = module.search
        except ImportError:
            _loaded[name] = None
    return _loaded[name]


def available_backends() -> list[str]:
    return [name for name in _KERNEL_MODULES if _load(name) is not None]


def resolve_backend(name: str | None = None) -> tuple[str, SearchFn]:
    """Map a requested backend name (or the env default) to a search function."""
    requested = name or os.environ.get(BACKEND_ENV_VAR, "auto")
    if requested == "auto":
        for candidate in _AUTO_ORDER:
            fn = _load(candidate)
            if fn is not None:
                return candidate, fn
        return "hashlib", _load("hashlib")  # numpy is a hard dependency; belt and braces
    if requested not in _KERNEL_MODULES:
        raise MobiChainError(f"unknown PoW backend {requested!r}")
    fn = _load(requested)
    if fn is None:
        raise MobiChainError(f"PoW backend {requested!r} is not importable here")
    return requested, fn


def split_preimage(
    block_number: int, tx_hash: str, previous_block: str
) -> tuple[bytes, bytes]:
    """Canonical header bytes split just around the nonce value."""
    base = canonical_serialize(
        block_header_doc(block_number, tx_hash, previous_block, 0)
    )
    marker = b'"nonce":0'
    if base.count(marker) != 1:
        raise MobiChainError("header fields collide with the nonce marker")
    at = base.index(marker)
    return base[: at + len(marker) - 1], base[at + len(marker) :]


def proof_of_work(
    block_number: int,
    tx_hash: str,
    previous_block: str,
    difficulty: Difficulty | int = Difficulty(),
    *,
    max_iterations: int | None = None,
    backend: str | None = None,
) -> tuple[str, int]:
    """Return (id, nonce) for the smallest nonce meeting the difficulty.

    Deterministic: the search always starts at nonce 0 and increments by 1.
    max_iterations, when given, bounds the search and raises
    PowCapExceededError once exhausted.
    """
    if isinstance(difficulty, int):
        difficulty = Difficulty(difficulty)
    digits = difficulty.leading_zero_hex_digits
    prefix, suffix = split_preimage(block_number, tx_hash, previous_block)
    _, search = resolve_backend(backend)

    start = 0
    while True:
        count = _SEARCH_BATCH
        if max_iterations is not None:
            remaining = max_iterations - start
            if remaining <= 0:
                raise PowCapExceededError(max_iterations)
            count = min(count, remaining)
        nonce = search(prefix, suffix, digits, start, count)
        if nonce >= 0:
            break
        start += count

    # Authoritative recompute from the full canonical document via hashlib;
    # also re-checks that the split preimage matched it byte for byte.
    header = canonical_serialize(
        block_header_doc(block_number, tx_hash, previous_block, nonce)
    )
    if header != prefix + str(nonce).encode() + suffix:
        raise MobiChainError("split preimage diverged from canonical serialization")
    digest = hashlib.sha3_256(header).hexdigest()
    if not difficulty.matches(digest):
        raise MobiChainError(
            f"kernel returned nonce {nonce} whose digest fails the difficulty"
        )
    return digest, nonce

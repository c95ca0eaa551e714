"""Deterministic chain construction for benchmarks.

The full mining pipeline re-verifies the whole chain before every append,
which is quadratic in chain length. Benchmarks that need a thousand-block
chain build it here instead: each block is assembled, sealed with real
proof of work, and appended directly. The product is indistinguishable
from a mined chain and passes full verification.
"""

from __future__ import annotations

import uuid as uuid_module

from ..crypto import sha3_256
from ..ledger import create_account, create_transaction, make_vote
from ..models import (
    Account,
    AppendResult,
    Block,
    BLOCK_VERSION,
    Chain,
    Difficulty,
    transactions_hash,
    virtual_iso,
)
from ..powkernel import proof_of_work

__all__ = ["BenchIdentity", "build_chain", "build_block"]


class BenchIdentity:
    """Seeded accounts, uuids, and timestamps for reproducible chains."""

    def __init__(self, seed: int):
        self.seed = seed
        self._uuid_count = 0
        self._clock = 0
        self.miner = self._account("miner")
        self.sender = self._account("sender")
        self.receiver = self._account("receiver")

    def _account(self, role: str) -> Account:
        raw = bytes.fromhex(sha3_256(f"bench:{self.seed}:{role}".encode()))
        return create_account(f"bench-{role}", seed=raw, now=virtual_iso(0))

    def next_uuid(self) -> str:
        self._uuid_count += 1
        raw = sha3_256(f"bench:{self.seed}:uuid:{self._uuid_count}".encode())
        return str(uuid_module.UUID(bytes=bytes.fromhex(raw)[:16]))

    def next_timestamp(self) -> str:
        self._clock += 1
        return virtual_iso(self._clock)


def build_block(
    identity: BenchIdentity,
    block_number: int,
    previous_block: str,
    tx_per_block: int,
    difficulty: Difficulty,
    payload_chars: int,
) -> Block:
    txs = []
    for i in range(tx_per_block):
        tag = f"b{block_number}t{i}:"
        payload = (tag + "x" * payload_chars)[:payload_chars]
        txs.append(
            create_transaction(
                payload,
                identity.sender,
                identity.receiver.public_key,
                now=identity.next_timestamp(),
                uuid=identity.next_uuid(),
            )
        )
    transactions = tuple(txs)
    tx_hash = transactions_hash(transactions)
    block_id, nonce = proof_of_work(
        block_number, tx_hash, previous_block, difficulty
    )
    vote = make_vote(
        block_id, previous_block, identity.miner, now=identity.next_timestamp()
    )
    return Block(
        id=block_id,
        block_number=block_number,
        votes=(vote,),
        version=BLOCK_VERSION,
        tx_hash=tx_hash,
        transactions=transactions,
        voters=(identity.miner.public_key,),
        nonce=nonce,
    )


def build_chain(
    blocks: int,
    tx_per_block: int = 1,
    difficulty: Difficulty = Difficulty(1),
    payload_chars: int = 20,
    seed: int = 0,
) -> Chain:
    """Grow a fresh chain to `blocks` blocks in linear time."""
    identity = BenchIdentity(seed)
    chain = Chain()
    for number in range(1, blocks + 1):
        block = build_block(
            identity,
            number,
            chain.head_id(),
            tx_per_block,
            difficulty,
            payload_chars,
        )
        result = chain.append(block)
        if result is not AppendResult.APPENDED:
            raise RuntimeError(f"bench chain append failed: {result}")
    return chain

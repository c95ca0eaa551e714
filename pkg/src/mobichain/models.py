"""Domain types: accounts, transactions, votes, blocks, the chain, backlogs.

Every type knows how to render itself to its wire document (`to_doc`) and
parse back (`from_doc`). Parsing checks structure only; cryptographic checks
live in the verification operations, so tampered documents still parse.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Any, Iterable, Sequence

from .canonical import canonical_serialize
from .crypto import sha3_256
from .errors import MalformedDocumentError

__all__ = [
    "Account",
    "TransactionData",
    "Transaction",
    "Vote",
    "Block",
    "Difficulty",
    "Chain",
    "Backlog",
    "AppendResult",
    "EMPTY_CHAIN_HEAD",
    "BLOCK_VERSION",
    "VIRTUAL_EPOCH",
    "utc_now_iso",
    "virtual_iso",
]

# Head id of a chain with no blocks; the first block's votes point here.
EMPTY_CHAIN_HEAD = "0"
BLOCK_VERSION = "1"

# Deterministic contexts (simulation, benchmarks) date their documents
# relative to this instant instead of the wall clock.
VIRTUAL_EPOCH = datetime(2020, 1, 1, tzinfo=timezone.utc)


def utc_now_iso() -> str:
    """Current UTC time as ISO-8601 text with second precision."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def virtual_iso(seconds: float) -> str:
    """ISO-8601 text for a virtual-time offset from the fixed epoch."""
    return (VIRTUAL_EPOCH + timedelta(seconds=seconds)).strftime("%Y-%m-%dT%H:%M:%SZ")


def _need(doc: dict, key: str, kind: type) -> Any:
    try:
        value = doc[key]
    except (KeyError, TypeError):
        raise MalformedDocumentError(f"missing field {key!r}") from None
    if kind is int and isinstance(value, bool):
        raise MalformedDocumentError(f"field {key!r} must be {kind.__name__}")
    if not isinstance(value, kind):
        raise MalformedDocumentError(f"field {key!r} must be {kind.__name__}")
    return value


@dataclass(frozen=True, slots=True)
class Account:
    """A user identity: username plus a Base58 ED25519 keypair."""

    username: str
    private_key: str
    public_key: str
    create_date: str

    def to_doc(self) -> dict:
        return {
            "type": "account",
            "username": self.username,
            "private_key": self.private_key,
            "public_key": self.public_key,
            "create_date": self.create_date,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Account":
        return cls(
            username=_need(doc, "username", str),
            private_key=_need(doc, "private_key", str),
            public_key=_need(doc, "public_key", str),
            create_date=_need(doc, "create_date", str),
        )


@dataclass(frozen=True, slots=True)
class TransactionData:
    payload: str
    uuid: str


@dataclass(frozen=True, slots=True)
class Transaction:
    """A signed message from owner[0] (sender) to owner[1] (destination).

    id = SHA3-256 over the canonical signing document (everything except id
    and signature); signature covers the same bytes under the sender's key.
    """

    id: str
    signature: str
    timestamp: str
    data: TransactionData
    owner: tuple[str, str]

    def signing_doc(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "transaction": {
                "data": {"payload": self.data.payload, "uuid": self.data.uuid},
                "owner": list(self.owner),
            },
        }

    def signing_bytes(self) -> bytes:
        return canonical_serialize(self.signing_doc())

    def to_doc(self) -> dict:
        doc = self.signing_doc()
        doc["id"] = self.id
        doc["signature"] = self.signature
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "Transaction":
        inner = _need(doc, "transaction", dict)
        data = _need(inner, "data", dict)
        owner = _need(inner, "owner", list)
        if len(owner) != 2 or not all(isinstance(k, str) for k in owner):
            raise MalformedDocumentError("owner must be [sender, destination]")
        return cls(
            id=_need(doc, "id", str),
            signature=_need(doc, "signature", str),
            timestamp=_need(doc, "timestamp", str),
            data=TransactionData(
                payload=_need(data, "payload", str),
                uuid=_need(data, "uuid", str),
            ),
            owner=(owner[0], owner[1]),
        )


@dataclass(frozen=True, slots=True)
class Vote:
    """A miner's signed attestation for a block and its predecessor link."""

    node_pubkey: str
    signature: str
    is_block_valid: bool
    previous_block: str
    timestamp: str
    voting_for_block: str

    def record_doc(self) -> dict:
        return {
            "is_block_valid": self.is_block_valid,
            "previous_block": self.previous_block,
            "timestamp": self.timestamp,
            "voting_for_block": self.voting_for_block,
        }

    def record_bytes(self) -> bytes:
        return canonical_serialize(self.record_doc())

    def to_doc(self) -> dict:
        return {
            "node_pubkey": self.node_pubkey,
            "signature": self.signature,
            "vote": self.record_doc(),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Vote":
        record = _need(doc, "vote", dict)
        valid = record.get("is_block_valid")
        if not isinstance(valid, bool):
            raise MalformedDocumentError("vote.is_block_valid must be boolean")
        return cls(
            node_pubkey=_need(doc, "node_pubkey", str),
            signature=_need(doc, "signature", str),
            is_block_valid=valid,
            previous_block=_need(record, "previous_block", str),
            timestamp=_need(record, "timestamp", str),
            voting_for_block=_need(record, "voting_for_block", str),
        )


def block_header_doc(
    block_number: int, tx_hash: str, previous_block: str, nonce: int
) -> dict:
    """The four-field document whose hash is the block id."""
    return {
        "block_number": block_number,
        "nonce": nonce,
        "previous_block": previous_block,
        "tx_hash": tx_hash,
    }


def transactions_hash(transactions: Sequence[Transaction]) -> str:
    """Hash of the ordered transaction list, as stored in tx_hash."""
    return sha3_256(canonical_serialize([tx.to_doc() for tx in transactions]))


@dataclass(frozen=True, slots=True)
class Block:
    """A proof-of-work-sealed container of transactions plus miner votes."""

    id: str
    block_number: int
    votes: tuple[Vote, ...]
    version: str
    tx_hash: str
    transactions: tuple[Transaction, ...]
    voters: tuple[str, ...]
    nonce: int

    @property
    def previous_block(self) -> str:
        return self.votes[0].previous_block

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "block_number": self.block_number,
            "votes": [v.to_doc() for v in self.votes],
            "version": self.version,
            "tx_hash": self.tx_hash,
            "block": {
                "transactions": [tx.to_doc() for tx in self.transactions],
                "voters": list(self.voters),
            },
            "nonce": self.nonce,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Block":
        votes = _need(doc, "votes", list)
        if not votes:
            raise MalformedDocumentError("block has no votes")
        inner = _need(doc, "block", dict)
        transactions = _need(inner, "transactions", list)
        voters = _need(inner, "voters", list)
        if not all(isinstance(v, str) for v in voters):
            raise MalformedDocumentError("voters must be public key text")
        return cls(
            id=_need(doc, "id", str),
            block_number=_need(doc, "block_number", int),
            votes=tuple(Vote.from_doc(v) for v in votes),
            version=_need(doc, "version", str),
            tx_hash=_need(doc, "tx_hash", str),
            transactions=tuple(Transaction.from_doc(t) for t in transactions),
            voters=tuple(voters),
            nonce=_need(doc, "nonce", int),
        )


@dataclass(frozen=True, slots=True)
class Difficulty:
    """Number of leading '0' hex digits a block id must have.

    0 is the degenerate always-true condition (one PoW iteration), kept for
    benchmarks; normal operation uses >= 1.
    """

    leading_zero_hex_digits: int = 3

    def __post_init__(self) -> None:
        if self.leading_zero_hex_digits < 0:
            raise ValueError("difficulty cannot be negative")

    @property
    def expected_iterations(self) -> int:
        return 16**self.leading_zero_hex_digits

    def matches(self, hex_digest: str) -> bool:
        d = self.leading_zero_hex_digits
        return hex_digest[:d] == "0" * d


class AppendResult(Enum):
    APPENDED = "appended"
    STALE_HEAD = "stale-head"


@dataclass(frozen=True, slots=True)
class ChainView:
    """Immutable snapshot of a chain: blocks, head id, and known tx ids."""

    blocks: tuple[Block, ...]
    head_id: str
    tx_ids: frozenset[str]

    def __len__(self) -> int:
        return len(self.blocks)


class Chain:
    """The shared, append-only block sequence.

    append() is atomic compare-and-append on the head id: a block whose
    recorded previous id no longer matches the head is refused, so concurrent
    miners can never fork the chain or double-mine a transaction (their
    snapshot is certified unchanged by the head check).
    """

    def __init__(self, blocks: Iterable[Block] = ()):
        self._lock = threading.Lock()
        self._blocks: list[Block] = []
        self._tx_ids: set[str] = set()
        for block in blocks:
            if self.append(block) is not AppendResult.APPENDED:
                raise ValueError(f"block {block.block_number} does not extend the chain")

    def __len__(self) -> int:
        with self._lock:
            return len(self._blocks)

    @property
    def blocks(self) -> tuple[Block, ...]:
        with self._lock:
            return tuple(self._blocks)

    def head_id(self) -> str:
        with self._lock:
            return self._blocks[-1].id if self._blocks else EMPTY_CHAIN_HEAD

    def contains_transaction(self, tx_id: str) -> bool:
        with self._lock:
            return tx_id in self._tx_ids

    def snapshot(self) -> ChainView:
        with self._lock:
            blocks = tuple(self._blocks)
            head = blocks[-1].id if blocks else EMPTY_CHAIN_HEAD
            return ChainView(blocks=blocks, head_id=head, tx_ids=frozenset(self._tx_ids))

    def append(self, block: Block) -> AppendResult:
        with self._lock:
            head = self._blocks[-1].id if self._blocks else EMPTY_CHAIN_HEAD
            if block.previous_block != head:
                return AppendResult.STALE_HEAD
            if block.block_number != len(self._blocks) + 1:
                return AppendResult.STALE_HEAD
            self._blocks.append(block)
            self._tx_ids.update(tx.id for tx in block.transactions)
            return AppendResult.APPENDED

    def to_doc_list(self) -> list[dict]:
        return [block.to_doc() for block in self.blocks]


class Backlog:
    """FIFO queue of pending transactions, deduplicated by id."""

    def __init__(self) -> None:
        self._queue: list[Transaction] = []
        self._ids: set[str] = set()

    def __len__(self) -> int:
        return len(self._queue)

    def __contains__(self, tx_id: str) -> bool:
        return tx_id in self._ids

    def enqueue(self, tx: Transaction) -> bool:
        """Add to the tail; False if a transaction with this id is queued."""
        if tx.id in self._ids:
            return False
        self._queue.append(tx)
        self._ids.add(tx.id)
        return True

    def dequeue_up_to(self, count: int) -> list[Transaction]:
        taken = self._queue[:count]
        del self._queue[:count]
        self._ids.difference_update(tx.id for tx in taken)
        return taken

    def return_to_front(self, transactions: Sequence[Transaction]) -> None:
        """Put transactions back at the head, preserving their order."""
        fresh = [tx for tx in transactions if tx.id not in self._ids]
        self._queue[:0] = fresh
        self._ids.update(tx.id for tx in fresh)

    def remove(self, tx_id: str) -> bool:
        """Drop a queued transaction by id (it was mined elsewhere)."""
        if tx_id not in self._ids:
            return False
        self._ids.discard(tx_id)
        self._queue = [tx for tx in self._queue if tx.id != tx_id]
        return True

    def peek_all(self) -> tuple[Transaction, ...]:
        return tuple(self._queue)

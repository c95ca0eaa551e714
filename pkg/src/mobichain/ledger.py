"""Creating and verifying transactions, votes, blocks, and whole chains.

Verification is re-derivation: every id is recomputed from the fields it
binds and every signature is checked under the key the document names. A
document passes only if the recomputed values match the stored ones.
"""

from __future__ import annotations

import uuid as uuid_module
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from typing import Sequence

from .canonical import canonical_serialize
from .crypto import (
    PUBKEY_LEN,
    base58_decode,
    generate_keypair,
    sha3_256,
    sign,
    verify_signature,
)
from .errors import Base58DecodeError, InvalidKeyError
from .models import (
    Account,
    Block,
    BLOCK_VERSION,
    Chain,
    ChainView,
    Difficulty,
    Transaction,
    TransactionData,
    Vote,
    block_header_doc,
    transactions_hash,
    utc_now_iso,
)

__all__ = [
    "TxStatus",
    "create_account",
    "create_transaction",
    "verify_transaction",
    "make_vote",
    "verify_vote",
    "verify_block",
    "verify_chain",
]


class TxStatus(Enum):
    VALID = "valid"
    TAMPERED = "tampered"
    DUPLICATE = "duplicate"


def create_account(
    username: str, seed: bytes | None = None, now: str | None = None
) -> Account:
    private_key, public_key = generate_keypair(seed)
    return Account(
        username=username,
        private_key=private_key,
        public_key=public_key,
        create_date=now or utc_now_iso(),
    )


def create_transaction(
    payload: str,
    sender: Account,
    dest_pubkey: str,
    now: str | None = None,
    uuid: str | None = None,
) -> Transaction:
    """Build, id, and sign a transaction from sender to dest_pubkey.

    `now` and `uuid` exist so simulations can inject virtual time and seeded
    uuids; left alone, wall clock and a random uuid4 are used.
    """
    try:
        if len(base58_decode(dest_pubkey)) != PUBKEY_LEN:
            raise InvalidKeyError("destination key has the wrong length")
    except Base58DecodeError as exc:
        raise InvalidKeyError(f"destination key is not Base58: {exc}") from None
    data = TransactionData(payload=payload, uuid=uuid or str(uuid_module.uuid4()))
    unsigned = Transaction(
        id="",
        signature="",
        timestamp=now or utc_now_iso(),
        data=data,
        owner=(sender.public_key, dest_pubkey),
    )
    message = unsigned.signing_bytes()
    return Transaction(
        id=sha3_256(message),
        signature=sign(message, sender.private_key),
        timestamp=unsigned.timestamp,
        data=data,
        owner=unsigned.owner,
    )


def verify_transaction(
    tx: Transaction, chain: Chain | ChainView | None = None
) -> TxStatus:
    """Tampered beats Duplicate: a forged copy of a mined tx is still forged."""
    message = tx.signing_bytes()
    if sha3_256(message) != tx.id:
        return TxStatus.TAMPERED
    if not verify_signature(message, tx.signature, tx.owner[0]):
        return TxStatus.TAMPERED
    if chain is not None:
        if isinstance(chain, ChainView):
            duplicate = tx.id in chain.tx_ids
        else:
            duplicate = chain.contains_transaction(tx.id)
        if duplicate:
            return TxStatus.DUPLICATE
    return TxStatus.VALID


def make_vote(
    block_id: str, previous_block: str, miner: Account, now: str | None = None
) -> Vote:
    unsigned = Vote(
        node_pubkey=miner.public_key,
        signature="",
        is_block_valid=True,
        previous_block=previous_block,
        timestamp=now or utc_now_iso(),
        voting_for_block=block_id,
    )
    return Vote(
        node_pubkey=unsigned.node_pubkey,
        signature=sign(unsigned.record_bytes(), miner.private_key),
        is_block_valid=unsigned.is_block_valid,
        previous_block=unsigned.previous_block,
        timestamp=unsigned.timestamp,
        voting_for_block=unsigned.voting_for_block,
    )


def verify_vote(vote: Vote) -> bool:
    return verify_signature(vote.record_bytes(), vote.signature, vote.node_pubkey)


def verify_block(
    block: Block, expected_previous: str, difficulty: Difficulty = Difficulty()
) -> bool:
    """Re-derive everything the block claims; True only if it all matches."""
    if block.version != BLOCK_VERSION:
        return False
    if not block.transactions or not block.votes:
        return False
    if tuple(v.node_pubkey for v in block.votes) != block.voters:
        return False
    if transactions_hash(block.transactions) != block.tx_hash:
        return False
    header = block_header_doc(
        block.block_number, block.tx_hash, expected_previous, block.nonce
    )
    if sha3_256(canonical_serialize(header)) != block.id:
        return False
    if not difficulty.matches(block.id):
        return False
    for vote in block.votes:
        if vote.previous_block != expected_previous:
            return False
        if vote.voting_for_block != block.id:
            return False
        if not vote.is_block_valid:
            return False
        if not verify_vote(vote):
            return False
    for tx in block.transactions:
        if verify_transaction(tx) is not TxStatus.VALID:
            return False
    return True


def _verify_span(
    blocks: tuple[Block, ...], first_previous: str, difficulty_digits: int
) -> bool:
    difficulty = Difficulty(difficulty_digits)
    previous = first_previous
    for block in blocks:
        if not verify_block(block, previous, difficulty):
            return False
        previous = block.id
    return True


def verify_chain(
    chain: Chain | ChainView | Sequence[Block],
    workers: int = 1,
    difficulty: Difficulty = Difficulty(),
) -> bool:
    """True iff every block verifies against its actual predecessor.

    The chain is cut into `workers` contiguous spans, each carrying the
    predecessor id its first block must link to, so spans verify
    independently; the result is the same for every worker count. Workers are
    processes: signature verification does not release the GIL, so threads
    cannot scale this.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if isinstance(chain, Chain):
        blocks = chain.blocks
    elif isinstance(chain, ChainView):
        blocks = chain.blocks
    else:
        blocks = tuple(chain)
    for k, block in enumerate(blocks):
        if block.block_number != k + 1:
            return False
    if not blocks:
        return True

    digits = difficulty.leading_zero_hex_digits
    if workers == 1 or len(blocks) < 2:
        return _verify_span(blocks, "0", digits)

    spans: list[tuple[tuple[Block, ...], str]] = []
    span_count = min(workers, len(blocks))
    base, extra = divmod(len(blocks), span_count)
    start = 0
    for i in range(span_count):
        size = base + (1 if i < extra else 0)
        first_previous = blocks[start - 1].id if start else "0"
        spans.append((blocks[start : start + size], first_previous))
        start += size

    with ProcessPoolExecutor(max_workers=span_count) as pool:
        results = pool.map(
            _verify_span,
            [span for span, _ in spans],
            [prev for _, prev in spans],
            [digits] * span_count,
        )
        return all(results)

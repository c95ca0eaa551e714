"""The five-step mining pipeline.

1. Pull pending transactions from the backlog and verify them; tampered ones
   are dropped with a reported reason, already-mined ones are discarded.
2. Find the head the new block will extend ("0" on an empty chain).
3. Hash the transaction list, search the proof-of-work nonce, sign the vote.
4. Re-verify every existing block in the chain.
5. Append, unless some other miner advanced the head first.

Steps 1 and 2 read one atomic chain snapshot, and step 5 is a
compare-and-append on the head id. An unchanged head certifies the snapshot
is still the whole truth (the chain only grows, and every append changes the
head id), which is what keeps a transaction from ever being mined twice, no
matter how miners interleave. MiningSession exposes the steps individually so
tests can drive racing miners through arbitrary interleavings; mine() is the
plain run-to-completion call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .ledger import TxStatus, make_vote, verify_chain, verify_transaction
from .models import (
    Account,
    AppendResult,
    Backlog,
    Block,
    BLOCK_VERSION,
    Chain,
    ChainView,
    Difficulty,
    Transaction,
    transactions_hash,
)
from .powkernel import proof_of_work

__all__ = ["MineStatus", "MineResult", "MiningSession", "mine"]


class MineStatus(Enum):
    MINED = "mined"
    REJECTED = "rejected"
    ALREADY_MINED = "already-mined"
    NOTHING_TO_MINE = "nothing-to-mine"


@dataclass(frozen=True, slots=True)
class MineResult:
    status: MineStatus
    block: Block | None = None
    reason: str | None = None
    # (transaction, reason) for every tampered transaction dropped in step 1
    dropped: tuple[tuple[Transaction, str], ...] = ()


@dataclass
class MiningSession:
    """One mining attempt, advanced a step at a time via step()."""

    backlog: Backlog
    chain: Chain
    miner: Account
    tx_per_block: int = 1
    difficulty: Difficulty = field(default_factory=Difficulty)
    now: str | None = None
    verify_workers: int = 1
    pow_backend: str | None = None

    def __post_init__(self) -> None:
        if self.tx_per_block < 1:
            raise ValueError("tx_per_block must be >= 1")
        self.result: MineResult | None = None
        self._stage = 1
        self._snapshot: ChainView | None = None
        self._batch: list[Transaction] = []
        self._dropped: list[tuple[Transaction, str]] = []
        self._previous = ""
        self._block_number = 0
        self._candidate: Block | None = None

    def step(self) -> MineResult | None:
        """Run the next pipeline step; returns the result once finished."""
        if self.result is None:
            getattr(self, f"_step{self._stage}")()
        return self.result

    def run(self) -> MineResult:
        while self.result is None:
            self.step()
        return self.result

    def _finish(self, result: MineResult) -> None:
        self.result = MineResult(
            status=result.status,
            block=result.block,
            reason=result.reason,
            dropped=tuple(self._dropped),
        )

    def _step1(self) -> None:
        """Collect a batch of verified transactions against one chain snapshot."""
        self._snapshot = self.chain.snapshot()
        while not self._batch:
            pulled = self.backlog.dequeue_up_to(self.tx_per_block)
            if not pulled:
                self._finish(MineResult(MineStatus.NOTHING_TO_MINE))
                return
            for tx in pulled:
                status = verify_transaction(tx, self._snapshot)
                if status is TxStatus.TAMPERED:
                    self._dropped.append((tx, "tampered"))
                elif status is TxStatus.DUPLICATE:
                    pass  # silently discard: already mined
                else:
                    self._batch.append(tx)
        self._stage = 2

    def _step2(self) -> None:
        """Latest block in the (snapshotted) chain, or "0" when empty."""
        assert self._snapshot is not None
        self._previous = self._snapshot.head_id
        self._block_number = len(self._snapshot) + 1
        self._stage = 3

    def _step3(self) -> None:
        """Proof-of-work over the candidate header, then the signed vote."""
        tx_hash = transactions_hash(self._batch)
        block_id, nonce = proof_of_work(
            self._block_number,
            tx_hash,
            self._previous,
            self.difficulty,
            backend=self.pow_backend,
        )
        vote = make_vote(block_id, self._previous, self.miner, self.now)
        self._candidate = Block(
            id=block_id,
            block_number=self._block_number,
            votes=(vote,),
            version=BLOCK_VERSION,
            tx_hash=tx_hash,
            transactions=tuple(self._batch),
            voters=(self.miner.public_key,),
            nonce=nonce,
        )
        self._stage = 4

    def _step4(self) -> None:
        """Verify all existing blocks before daring to extend them."""
        assert self._snapshot is not None
        if not verify_chain(
            self._snapshot.blocks, workers=self.verify_workers, difficulty=self.difficulty
        ):
            self._finish(MineResult(MineStatus.REJECTED, reason="chain-invalid"))
            return
        self._stage = 5

    def _step5(self) -> None:
        """Compare-and-append; on a stale head, rescue the unmined batch."""
        assert self._candidate is not None
        if self.chain.append(self._candidate) is AppendResult.APPENDED:
            self._finish(MineResult(MineStatus.MINED, block=self._candidate))
        else:
            leftover = [
                tx
                for tx in self._batch
                if not self.chain.contains_transaction(tx.id)
            ]
            self.backlog.return_to_front(leftover)
            self._finish(MineResult(MineStatus.ALREADY_MINED))


def mine(
    backlog: Backlog,
    chain: Chain,
    miner: Account,
    tx_per_block: int = 1,
    difficulty: Difficulty = Difficulty(),
    *,
    now: str | None = None,
    verify_workers: int = 1,
    pow_backend: str | None = None,
) -> MineResult:
    return MiningSession(
        backlog=backlog,
        chain=chain,
        miner=miner,
        tx_per_block=tx_per_block,
        difficulty=difficulty,
        now=now,
        verify_workers=verify_workers,
        pow_backend=pow_backend,
    ).run()

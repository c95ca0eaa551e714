"""Per-node behaviour: reacting to sends, received documents, and timer ticks.

A mobile node owns a backlog, a document store, and a replica view of the
chain built from the block documents it has received. The three handlers
mirror the three triggers of the main loop: the user sends a message, the
network delivers a document, or the periodic backlog check fires.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .canonical import canonical_serialize
from .errors import MalformedDocumentError, UploadRefusedError
from .ledger import create_transaction
from .mining import MineResult, MineStatus, MiningSession
from .models import Account, Backlog, Block, Difficulty, Transaction
from .store import DocumentStore, doc_key

if TYPE_CHECKING:
    from .netsim import Simulation

logger = logging.getLogger(__name__)

__all__ = ["NodeConfig", "MobileNode"]


@dataclass(frozen=True, slots=True)
class NodeConfig:
    tx_per_block: int = 1
    mining_interval: float = 1
    difficulty: Difficulty = field(default_factory=Difficulty)
    is_miner: bool = False

    def __post_init__(self) -> None:
        if self.mining_interval < 1:
            raise ValueError("mining_interval must be >= 1")


class MobileNode:
    def __init__(
        self,
        node_id: str,
        account: Account,
        config: NodeConfig,
        sim: "Simulation",
        gateway_id: str,
        connected: bool = True,
    ):
        self.id = node_id
        self.account = account
        self.config = config
        self.sim = sim
        self.gateway_id = gateway_id
        self.connected = connected
        self.last_synced_seq = 0
        self.tick_pending = False
        self.reports_seen = 0
        self.store = DocumentStore()
        self.backlog = Backlog()
        self.chain_view: list[Block] = []
        # the private key never leaves this store (public keys travel in txs)
        self.store.put(account.to_doc())

    # -- chain view helpers -------------------------------------------------

    def view_head(self) -> str:
        return self.chain_view[-1].id if self.chain_view else "0"

    def chain_bytes(self) -> bytes:
        """Canonical bytes of this node's chain view, for replica comparison."""
        return canonical_serialize([b.to_doc() for b in self.chain_view])

    def _mined_tx_ids(self) -> set[str]:
        return {tx.id for block in self.chain_view for tx in block.transactions}

    # -- handlers -----------------------------------------------------------

    def on_send(self, payload: str, dest_pubkey: str) -> Transaction:
        """Create, enqueue, and upload a transaction. Offline sends refuse."""
        if not self.connected:
            raise UploadRefusedError(f"node {self.id} is disconnected")
        tx = create_transaction(
            payload,
            self.account,
            dest_pubkey,
            now=self.sim.virtual_timestamp(),
            uuid=self.sim.next_uuid(self.id),
        )
        self.backlog.enqueue(tx)
        doc = dict(tx.to_doc(), type="transaction")
        self.store.put(doc)
        self.sim.upload(self, doc)
        self.wake_miner()
        return tx

    def on_receive(self, doc: dict) -> None:
        """Apply a delivered document. Idempotent: replays change nothing."""
        doc_type = doc.get("type")
        if doc_type == "report":
            self.reports_seen += 1
            return
        if doc_key(doc) in self.store:
            return
        try:
            if doc_type == "transaction":
                tx = Transaction.from_doc(doc)
                self.store.put(doc)
                if tx.id not in self._mined_tx_ids():
                    self.backlog.enqueue(tx)
                    self.wake_miner()
            elif doc_type == "block":
                block = Block.from_doc(doc)
                self.store.put(doc)
                self._apply_block(block)
            elif doc_type == "account":
                self.store.put(doc)
            else:
                raise MalformedDocumentError(f"unknown document type {doc_type!r}")
        except MalformedDocumentError as exc:
            logger.warning("node %s dropped malformed document: %s", self.id, exc)

    def _apply_block(self, block: Block) -> None:
        if block.block_number != len(self.chain_view) + 1:
            return  # already present, or does not extend the view head
        if block.previous_block != self.view_head():
            return
        self.chain_view.append(block)
        # transactions sealed in a block leave the backlog for good
        for tx in block.transactions:
            self.backlog.remove(tx.id)
        self.wake_miner()

    def on_tick(self) -> MineResult | None:
        """Periodic backlog check; mines when there is anything to mine."""
        if not self.config.is_miner or not self.connected:
            return None
        session = MiningSession(
            backlog=self.backlog,
            chain=self.sim.chain,
            miner=self.account,
            tx_per_block=self.config.tx_per_block,
            difficulty=self.config.difficulty,
            now=self.sim.virtual_timestamp(),
            pow_backend=self.sim.pow_backend,
        )
        result = session.run()
        for tx, reason in result.dropped:
            self.sim.report_problem(self, tx, reason)
        if result.status is MineStatus.MINED and result.block is not None:
            self.sim.stats["mined_blocks"] += 1
            self.sim.upload(self, dict(result.block.to_doc(), type="block"))
        self.wake_miner()
        return result

    def wake_miner(self) -> None:
        if self.config.is_miner and self.connected and len(self.backlog):
            self.sim.ensure_tick(self)

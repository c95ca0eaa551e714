"""Discrete-event simulation of the broadcast network.

Topology: mobile nodes attach to sync-gateway servers; gateways form a
connected graph and flood every uploaded document to all gateways and all
connected nodes. Disconnected nodes receive nothing; on reconnect their
gateway replays its change feed from the node's last synced sequence.

The simulation also holds the one logical Chain that miners race on with
compare-and-append. Per-node chain views are replicas built from broadcast
block documents; with everyone connected they converge to the same bytes.

Scenario files are JSON:

    {
      "seed": 7, "difficulty": 3, "tx_per_block": 1,
      "mining_interval": 1, "latency": 0,
      "gateways": [{"id": "F", "peers": ["G"]}, ...],
      "nodes":    [{"id": "A", "gateway": "F", "miner": false,
                    "connected": true}, ...],
      "messages": [{"at": 1, "from": "A", "to": "C", "payload": "..."}, ...],
      "connectivity": [{"at": 50, "node": "E", "action": "connect"}, ...]
    }
"""

from __future__ import annotations

import heapq
import json
import logging
import uuid as uuid_module
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .crypto import sha3_256
from .errors import EventCapExceededError, MobiChainError, UploadRefusedError
from .ledger import create_account
from .models import Chain, Difficulty, Transaction, virtual_iso
from .node import MobileNode, NodeConfig
from .store import DocumentStore, STORABLE_TYPES, doc_key

logger = logging.getLogger(__name__)

__all__ = ["SimEvent", "Gateway", "Simulation", "load_scenario"]

EVENT_KINDS = frozenset({"deliver", "connect", "disconnect", "tick", "send"})


@dataclass(frozen=True, slots=True)
class SimEvent:
    at: float
    kind: str
    target: str
    payload: Any = None


@dataclass
class Gateway:
    id: str
    peers: tuple[str, ...]
    attached: list[str] = field(default_factory=list)
    store: DocumentStore = field(default_factory=DocumentStore)
    seen: set[str] = field(default_factory=set)


def load_scenario(path: str | Path) -> dict:
    with Path(path).open("r", encoding="utf-8") as fh:
        return json.load(fh)


class Simulation:
    def __init__(
        self,
        *,
        seed: int = 0,
        difficulty: int = 3,
        tx_per_block: int = 1,
        mining_interval: float = 1,
        latency: float = 0,
        pow_backend: str | None = None,
    ):
        self.seed = seed
        self.default_difficulty = Difficulty(difficulty)
        self.default_tx_per_block = tx_per_block
        self.default_mining_interval = mining_interval
        self.latency = latency
        self.pow_backend = pow_backend

        self.time = 0.0
        self._heap: list[tuple[float, int, SimEvent]] = []
        self._counter = 0
        self._uuid_counters: dict[str, int] = {}

        self.chain = Chain()
        self.gateways: dict[str, Gateway] = {}
        self.nodes: dict[str, MobileNode] = {}
        self.directory: dict[str, str] = {}  # node id -> public key
        self.stats: dict[str, int] = {
            "deliveries": 0,
            "mined_blocks": 0,
            "rejected_transactions": 0,
            "refused_sends": 0,
            "events_processed": 0,
        }

    # -- construction -------------------------------------------------------

    @classmethod
    def from_scenario(cls, scenario: dict) -> "Simulation":
        sim = cls(
            seed=scenario.get("seed", 0),
            difficulty=scenario.get("difficulty", 3),
            tx_per_block=scenario.get("tx_per_block", 1),
            mining_interval=scenario.get("mining_interval", 1),
            latency=scenario.get("latency", 0),
        )
        for entry in scenario.get("gateways", []):
            sim.add_gateway(entry["id"], entry.get("peers", []))
        sim._check_gateway_graph()
        for entry in scenario.get("nodes", []):
            sim.add_node(
                entry["id"],
                entry["gateway"],
                is_miner=entry.get("miner", False),
                connected=entry.get("connected", True),
                tx_per_block=entry.get("tx_per_block"),
                mining_interval=entry.get("mining_interval"),
            )
        for msg in scenario.get("messages", []):
            sim.schedule(
                msg.get("at", 0),
                "send",
                msg["from"],
                {"to": msg["to"], "payload": msg.get("payload", "")},
            )
        for change in scenario.get("connectivity", []):
            action = change["action"]
            if action not in ("connect", "disconnect"):
                raise MobiChainError(f"unknown connectivity action {action!r}")
            sim.schedule(change["at"], action, change["node"])
        return sim

    @classmethod
    def from_scenario_file(cls, path: str | Path) -> "Simulation":
        return cls.from_scenario(load_scenario(path))

    def add_gateway(self, gateway_id: str, peers: list[str]) -> Gateway:
        if gateway_id in self.gateways or gateway_id in self.nodes:
            raise MobiChainError(f"duplicate id {gateway_id!r}")
        gateway = Gateway(id=gateway_id, peers=tuple(peers))
        self.gateways[gateway_id] = gateway
        return gateway

    def _check_gateway_graph(self) -> None:
        for gateway in self.gateways.values():
            for peer in gateway.peers:
                if peer not in self.gateways:
                    raise MobiChainError(f"gateway {gateway.id} peers unknown {peer!r}")
        if not self.gateways:
            return
        # gateways must form one connected component
        seen: set[str] = set()
        frontier = [next(iter(self.gateways))]
        while frontier:
            current = frontier.pop()
            if current in seen:
                continue
            seen.add(current)
            gateway = self.gateways[current]
            neighbours = set(gateway.peers) | {
                g.id for g in self.gateways.values() if current in g.peers
            }
            frontier.extend(neighbours - seen)
        if seen != set(self.gateways):
            raise MobiChainError("gateway graph is not connected")

    def add_node(
        self,
        node_id: str,
        gateway_id: str,
        *,
        is_miner: bool = False,
        connected: bool = True,
        tx_per_block: int | None = None,
        mining_interval: float | None = None,
    ) -> MobileNode:
        if node_id in self.nodes or node_id in self.gateways:
            raise MobiChainError(f"duplicate id {node_id!r}")
        if gateway_id not in self.gateways:
            raise MobiChainError(f"node {node_id!r} attaches to unknown gateway")
        seed = bytes.fromhex(sha3_256(f"{self.seed}:{node_id}:account".encode()))
        account = create_account(node_id, seed=seed, now=self.virtual_timestamp())
        config = NodeConfig(
            tx_per_block=tx_per_block or self.default_tx_per_block,
            mining_interval=mining_interval or self.default_mining_interval,
            difficulty=self.default_difficulty,
            is_miner=is_miner,
        )
        node = MobileNode(node_id, account, config, self, gateway_id, connected)
        self.nodes[node_id] = node
        self.gateways[gateway_id].attached.append(node_id)
        self.directory[node_id] = account.public_key
        return node

    # -- deterministic identity/time sources --------------------------------

    def virtual_timestamp(self) -> str:
        return virtual_iso(self.time)

    def next_uuid(self, node_id: str) -> str:
        count = self._uuid_counters.get(node_id, 0)
        self._uuid_counters[node_id] = count + 1
        digest = sha3_256(f"{self.seed}:{node_id}:uuid:{count}".encode())
        return str(uuid_module.UUID(bytes=bytes.fromhex(digest)[:16]))

    # -- event machinery ----------------------------------------------------

    def schedule(self, at: float, kind: str, target: str, payload: Any = None) -> None:
        if kind not in EVENT_KINDS:
            raise MobiChainError(f"unknown event kind {kind!r}")
        self._counter += 1
        heapq.heappush(self._heap, (at, self._counter, SimEvent(at, kind, target, payload)))

    def ensure_tick(self, node: MobileNode) -> None:
        if not node.tick_pending:
            node.tick_pending = True
            self.schedule(self.time + node.config.mining_interval, "tick", node.id)

    def upload(self, node: MobileNode, doc: dict) -> None:
        """A node hands a document to its gateway for network-wide broadcast."""
        if not node.connected:
            raise UploadRefusedError(f"node {node.id} is disconnected")
        self._gateway_receive(self.gateways[node.gateway_id], doc)

    def report_problem(self, node: MobileNode, tx: Transaction, reason: str) -> None:
        """Broadcast a problem report (transient: flooded but never stored)."""
        self.stats["rejected_transactions"] += 1
        doc = {
            "type": "report",
            "reporter": node.id,
            "reason": reason,
            "tx_id": tx.id,
        }
        if node.connected:
            self._gateway_receive(self.gateways[node.gateway_id], doc)

    def _gateway_receive(self, gateway: Gateway, doc: dict) -> None:
        key = doc_key(doc)
        if key in gateway.seen:
            return
        gateway.seen.add(key)
        seq = None
        if doc.get("type") in STORABLE_TYPES:
            seq = gateway.store.put(doc)
        for node_id in gateway.attached:
            self.schedule(self.time + self.latency, "deliver", node_id, (doc, seq))
        for peer in gateway.peers:
            self.schedule(self.time + self.latency, "deliver", peer, (doc, None))

    def reconnect(self, node: MobileNode) -> int:
        """Mark connected and replay everything missed from the gateway feed.

        Returns the number of replayed documents.
        """
        node.connected = True
        gateway = self.gateways[node.gateway_id]
        replayed = 0
        for seq, doc in gateway.store.changes_since(node.last_synced_seq):
            node.on_receive(doc)
            node.last_synced_seq = max(node.last_synced_seq, seq)
            self.stats["deliveries"] += 1
            replayed += 1
        node.wake_miner()
        return replayed

    def _dispatch(self, event: SimEvent) -> None:
        if event.kind == "deliver":
            if event.target in self.gateways:
                doc, _ = event.payload
                self._gateway_receive(self.gateways[event.target], doc)
                return
            node = self.nodes[event.target]
            if not node.connected:
                return  # missed for good; reconnect replay will cover it
            doc, seq = event.payload
            node.on_receive(doc)
            if seq is not None:
                node.last_synced_seq = max(node.last_synced_seq, seq)
            self.stats["deliveries"] += 1
        elif event.kind == "tick":
            node = self.nodes[event.target]
            node.tick_pending = False
            node.on_tick()
        elif event.kind == "send":
            node = self.nodes[event.target]
            dest = event.payload["to"]
            if not node.connected:
                self.stats["refused_sends"] += 1
                logger.info("send refused: node %s is disconnected", node.id)
                return
            node.on_send(event.payload["payload"], self.directory[dest])
        elif event.kind == "connect":
            self.reconnect(self.nodes[event.target])
        elif event.kind == "disconnect":
            self.nodes[event.target].connected = False

    def run_until_quiescent(self, max_events: int = 1_000_000) -> dict:
        """Process events in time order until none remain; returns statistics."""
        while self._heap:
            if self.stats["events_processed"] >= max_events:
                raise EventCapExceededError(f"exceeded {max_events} events")
            at, _, event = heapq.heappop(self._heap)
            self.time = max(self.time, at)
            self.stats["events_processed"] += 1
            self._dispatch(event)
        summary = dict(self.stats)
        summary["chain_length"] = len(self.chain)
        summary["quiesced_at"] = self.time
        return summary

    # -- inspection ---------------------------------------------------------

    def connected_nodes(self) -> list[MobileNode]:
        return [node for node in self.nodes.values() if node.connected]

    def dump_stores(self, out_dir: str | Path) -> list[Path]:
        """Write every node's store as `<node-id>.jsonl` under out_dir."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for node in self.nodes.values():
            path = out / f"{node.id}.jsonl"
            node.store.dump(path)
            written.append(path)
        return written

"""Append-only JSON document store with a change feed.

Plays the embedded-database role on every node and gateway: documents go in,
a strictly increasing sequence number comes back, and the change feed
replays everything after a given sequence so replicas can catch up. Documents
are whatever the ledger produces (accounts, transactions, blocks); the store
only demands a `type` field and treats content as opaque JSON.
"""

from __future__ import annotations

import logging
import threading
from pathlib import Path

from .canonical import canonical_parse, canonical_serialize
from .crypto import sha3_256
from .errors import UnknownDocTypeError

logger = logging.getLogger(__name__)

__all__ = ["DocumentStore", "STORABLE_TYPES", "doc_key"]

STORABLE_TYPES = frozenset({"account", "transaction", "block"})


def doc_key(doc: dict) -> str:
    """A document's store key: its `id`, or a content hash if it has none.

    Accounts carry no `id` field, so they fall back to content addressing.
    """
    key = doc.get("id")
    if isinstance(key, str) and key:
        return key
    return sha3_256(canonical_serialize(doc))


class DocumentStore:
    """In-memory store, optionally mirrored to a JSON-lines file.

    File format: one `"<seq> <canonical-json>"` line per put, append-only, so
    the file *is* the change feed and replaying it rebuilds the store.
    """

    def __init__(self, path: str | Path | None = None):
        self._lock = threading.Lock()
        self._latest: dict[str, dict] = {}
        self._insertion: list[str] = []  # doc keys, first-put order
        self._changes: list[tuple[int, str]] = []
        self._revisions: dict[int, dict] = {}
        self._next_seq = 1
        self._path = Path(path) if path is not None else None
        if self._path is not None and self._path.exists():
            self._replay_file(self._path)

    def _replay_file(self, path: Path) -> None:
        with path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                seq_text, _, doc_text = line.partition(" ")
                self._record(int(seq_text), canonical_parse(doc_text))

    def _record(self, seq: int, doc: dict) -> None:
        key = doc_key(doc)
        if key not in self._latest:
            self._insertion.append(key)
        self._latest[key] = doc
        self._changes.append((seq, key))
        self._revisions[seq] = doc
        self._next_seq = max(self._next_seq, seq + 1)

    def __len__(self) -> int:
        with self._lock:
            return len(self._latest)

    @property
    def last_seq(self) -> int:
        with self._lock:
            return self._next_seq - 1

    def put(self, doc: dict) -> int:
        doc_type = doc.get("type")
        if doc_type not in STORABLE_TYPES:
            raise UnknownDocTypeError(f"cannot store document of type {doc_type!r}")
        with self._lock:
            seq = self._next_seq
            self._record(seq, doc)
            if self._path is not None:
                line = canonical_serialize(doc).decode("utf-8")
                with self._path.open("a", encoding="utf-8") as fh:
                    fh.write(f"{seq} {line}\n")
            return seq

    def get(self, key: str) -> dict | None:
        with self._lock:
            return self._latest.get(key)

    def __contains__(self, key: str) -> bool:
        with self._lock:
            return key in self._latest

    def query_by_type(self, doc_type: str) -> list[dict]:
        """Latest revision of every matching document, in first-put order."""
        with self._lock:
            return [
                self._latest[key]
                for key in self._insertion
                if self._latest[key].get("type") == doc_type
            ]

    def changes_since(self, seq: int) -> list[tuple[int, dict]]:
        """Every change with sequence > seq, oldest first."""
        with self._lock:
            return [(s, self._revisions[s]) for s, _ in self._changes if s > seq]

    def dump(self, path: str | Path) -> None:
        """Write the full change feed to a fresh JSON-lines file."""
        with self._lock, Path(path).open("w", encoding="utf-8") as fh:
            for seq, _ in self._changes:
                line = canonical_serialize(self._revisions[seq]).decode("utf-8")
                fh.write(f"{seq} {line}\n")

    @classmethod
    def load(cls, path: str | Path) -> "DocumentStore":
        """Rebuild an in-memory store from a feed file without binding to it."""
        store = cls()
        store._replay_file(Path(path))
        return store

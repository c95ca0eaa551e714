import pytest

from mobichain.canonical import canonical_parse, canonical_serialize
from mobichain.errors import UnknownDocTypeError
from mobichain.store import STORABLE_TYPES, DocumentStore, doc_key


def tx_doc(n, payload="p"):
    return {
        "type": "transaction",
        "id": f"{n:064x}",
        "signature": "s",
        "timestamp": "2021-01-01T00:00:00Z",
        "transaction": {"data": {"payload": payload, "uuid": "u"}, "owner": ["a", "b"]},
    }


def account_doc(name):
    return {
        "type": "account",
        "username": name,
        "private_key": "priv",
        "public_key": "pub",
        "create_date": "2021-01-01T00:00:00Z",
    }


class TestDocKey:
    def test_prefers_id(self):
        assert doc_key(tx_doc(7)) == f"{7:064x}"

    def test_account_falls_back_to_content_hash(self):
        first = doc_key(account_doc("ann"))
        assert first == doc_key(account_doc("ann"))
        assert first != doc_key(account_doc("ben"))
        assert len(first) == 64


class TestInMemory:
    def test_sequences_count_up_from_one(self):
        store = DocumentStore()
        assert [store.put(tx_doc(i)) for i in range(3)] == [1, 2, 3]
        assert store.last_seq == 3

    def test_get_and_contains(self):
        store = DocumentStore()
        doc = tx_doc(1)
        store.put(doc)
        assert doc_key(doc) in store
        assert store.get(doc_key(doc)) == doc
        assert store.get("missing") is None
        assert "missing" not in store

    def test_rejects_unknown_type(self):
        store = DocumentStore()
        with pytest.raises(UnknownDocTypeError):
            store.put({"type": "report", "x": 1})
        with pytest.raises(UnknownDocTypeError):
            store.put({"x": 1})

    def test_storable_types_are_the_ledger_documents(self):
        assert STORABLE_TYPES == {"account", "transaction", "block"}

    def test_same_key_updates_in_place(self):
        store = DocumentStore()
        store.put(tx_doc(1, payload="first"))
        store.put(tx_doc(1, payload="second"))
        assert len(store) == 1
        assert store.get(doc_key(tx_doc(1)))["transaction"]["data"]["payload"] == "second"
        assert store.last_seq == 2

    def test_query_by_type_keeps_first_put_order(self):
        store = DocumentStore()
        store.put(tx_doc(2))
        store.put(account_doc("ann"))
        store.put(tx_doc(1))
        docs = store.query_by_type("transaction")
        assert [d["id"] for d in docs] == [f"{2:064x}", f"{1:064x}"]
        assert store.query_by_type("block") == []

    def test_changes_since(self):
        store = DocumentStore()
        for i in range(4):
            store.put(tx_doc(i))
        changes = store.changes_since(2)
        assert [seq for seq, _ in changes] == [3, 4]
        assert [doc["id"] for _, doc in changes] == [f"{2:064x}", f"{3:064x}"]
        assert store.changes_since(4) == []
        assert len(store.changes_since(0)) == 4


class TestFileBacked:
    def test_line_format(self, tmp_path):
        path = tmp_path / "node.jsonl"
        store = DocumentStore(path)
        store.put(tx_doc(1))
        store.put(account_doc("ann"))
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        for expected_seq, line in enumerate(lines, start=1):
            seq_text, _, doc_text = line.partition(" ")
            assert int(seq_text) == expected_seq
            doc = canonical_parse(doc_text)
            # the stored text is the canonical form, byte for byte
            assert canonical_serialize(doc).decode() == doc_text

    def test_reopen_replays_the_feed(self, tmp_path):
        path = tmp_path / "node.jsonl"
        store = DocumentStore(path)
        for i in range(3):
            store.put(tx_doc(i))
        reopened = DocumentStore(path)
        assert len(reopened) == 3
        assert reopened.last_seq == 3
        assert reopened.changes_since(0) == store.changes_since(0)
        # appends continue the sequence rather than restarting it
        assert reopened.put(tx_doc(9)) == 4

    def test_load_is_detached_from_the_file(self, tmp_path):
        path = tmp_path / "node.jsonl"
        bound = DocumentStore(path)
        bound.put(tx_doc(1))
        size_before = path.stat().st_size
        loaded = DocumentStore.load(path)
        assert loaded.get(doc_key(tx_doc(1))) is not None
        loaded.put(tx_doc(2))
        assert path.stat().st_size == size_before

    def test_dump_then_load_round_trip(self, tmp_path):
        store = DocumentStore()
        store.put(tx_doc(1))
        store.put(tx_doc(1, payload="updated"))
        store.put(account_doc("ann"))
        out = tmp_path / "dump.jsonl"
        store.dump(out)
        clone = DocumentStore.load(out)
        assert clone.changes_since(0) == store.changes_since(0)
        assert len(clone) == len(store)

    def test_empty_lines_ignored_on_replay(self, tmp_path):
        path = tmp_path / "node.jsonl"
        store = DocumentStore(path)
        store.put(tx_doc(1))
        with path.open("a") as fh:
            fh.write("\n")
        assert len(DocumentStore(path)) == 1

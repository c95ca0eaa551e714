import dataclasses
import random

import pytest

from mobichain.bench import BenchIdentity, build_block
from mobichain.ledger import create_transaction
from mobichain.mining import MineStatus, MiningSession, mine
from mobichain.models import Backlog, Chain, Difficulty

D1 = Difficulty(1)


def tx_for(alice, bob, text):
    return create_transaction(text, alice, bob.public_key)


def loaded_backlog(alice, bob, texts):
    backlog = Backlog()
    for text in texts:
        backlog.enqueue(tx_for(alice, bob, text))
    return backlog


class TestSingleMiner:
    def test_mines_one_valid_transaction(self, alice, bob, carol):
        backlog = loaded_backlog(alice, bob, ["hi"])
        chain = Chain()
        result = mine(backlog, chain, carol, difficulty=D1)
        assert result.status is MineStatus.MINED
        assert len(chain) == 1
        assert chain.blocks[0].transactions[0].data.payload == "hi"
        assert chain.blocks[0].voters == (carol.public_key,)
        assert len(backlog) == 0

    def test_nothing_to_mine_on_empty_backlog(self, carol):
        result = mine(Backlog(), Chain(), carol, difficulty=D1)
        assert result.status is MineStatus.NOTHING_TO_MINE
        assert result.block is None

    def test_tampered_transaction_dropped_with_reason(self, alice, bob, carol):
        tx = tx_for(alice, bob, "real")
        forged = dataclasses.replace(tx, timestamp="1999-01-01T00:00:00Z")
        backlog = Backlog()
        backlog.enqueue(forged)
        chain = Chain()
        result = mine(backlog, chain, carol, difficulty=D1)
        assert result.status is MineStatus.NOTHING_TO_MINE
        assert result.dropped == ((forged, "tampered"),)
        assert len(chain) == 0

    def test_tampered_skipped_but_valid_mined(self, alice, bob, carol):
        tx = tx_for(alice, bob, "real")
        forged = dataclasses.replace(
            tx_for(alice, bob, "fake"), timestamp="1999-01-01T00:00:00Z"
        )
        backlog = Backlog()
        backlog.enqueue(forged)
        backlog.enqueue(tx)
        result = mine(backlog, Chain(), carol, difficulty=D1)
        assert result.status is MineStatus.MINED
        assert [t.data.payload for t in result.block.transactions] == ["real"]
        assert result.dropped == ((forged, "tampered"),)

    def test_already_mined_transaction_discarded(self, alice, bob, carol):
        tx = tx_for(alice, bob, "once")
        chain = Chain()
        backlog = Backlog()
        backlog.enqueue(tx)
        assert mine(backlog, chain, carol, difficulty=D1).status is MineStatus.MINED
        backlog.enqueue(tx)
        result = mine(backlog, chain, carol, difficulty=D1)
        assert result.status is MineStatus.NOTHING_TO_MINE
        assert len(chain) == 1

    def test_batching_respects_tx_per_block(self, alice, bob, carol):
        backlog = loaded_backlog(alice, bob, [f"m{i}" for i in range(5)])
        chain = Chain()
        first = mine(backlog, chain, carol, tx_per_block=3, difficulty=D1)
        second = mine(backlog, chain, carol, tx_per_block=3, difficulty=D1)
        assert first.status is second.status is MineStatus.MINED
        assert len(first.block.transactions) == 3
        assert len(second.block.transactions) == 2
        assert [t.data.payload for t in first.block.transactions] == ["m0", "m1", "m2"]

    def test_rejects_extension_of_corrupt_chain(self, alice, bob, carol):
        identity = BenchIdentity(3)
        chain = Chain()
        good = build_block(identity, 1, "0", 1, D1, 20)
        chain.append(good)
        # plant a corrupt block behind the public api, linkage kept intact
        bad = dataclasses.replace(good, version="2")
        corrupted = Chain()
        corrupted._blocks = [bad]
        corrupted._tx_ids = {t.id for t in bad.transactions}
        backlog = loaded_backlog(alice, bob, ["x"])
        result = mine(backlog, corrupted, carol, difficulty=D1)
        assert result.status is MineStatus.REJECTED
        assert result.reason == "chain-invalid"
        assert len(corrupted) == 1


class TestRacingMiners:
    def test_loser_sees_already_mined_and_requeues(self, alice, bob, carol):
        chain = Chain()
        slow_backlog = loaded_backlog(alice, bob, ["slow tx"])
        fast_backlog = loaded_backlog(alice, bob, ["fast tx"])
        slow = MiningSession(
            backlog=slow_backlog, chain=chain, miner=carol, difficulty=D1
        )
        for _ in range(4):  # steps 1-4: snapshot, head, pow, verify
            assert slow.step() is None
        fast = mine(fast_backlog, chain, alice, difficulty=D1)
        assert fast.status is MineStatus.MINED
        result = slow.step()
        assert result.status is MineStatus.ALREADY_MINED
        # the batch went back to the front, nothing was lost
        assert "slow tx" in [t.data.payload for t in slow_backlog.peek_all()]
        retry = mine(slow_backlog, chain, carol, difficulty=D1)
        assert retry.status is MineStatus.MINED
        assert len(chain) == 2

    def test_same_transaction_race_mines_it_exactly_once(self, alice, bob, carol):
        tx = tx_for(alice, bob, "contested")
        chain = Chain()
        first_backlog = Backlog()
        first_backlog.enqueue(tx)
        second_backlog = Backlog()
        second_backlog.enqueue(tx)
        slow = MiningSession(
            backlog=first_backlog, chain=chain, miner=carol, difficulty=D1
        )
        for _ in range(4):
            slow.step()
        assert mine(second_backlog, chain, alice, difficulty=D1).status is MineStatus.MINED
        result = slow.step()
        assert result.status is MineStatus.ALREADY_MINED
        # the contested transaction is in the chain, so it was not requeued
        assert len(first_backlog) == 0
        assert len(chain) == 1
        assert chain.blocks[0].transactions[0].id == tx.id

    def test_stale_snapshot_duplicate_is_discarded_in_step1(self, alice, bob, carol):
        tx = tx_for(alice, bob, "contested")
        chain = Chain()
        winner_backlog = Backlog()
        winner_backlog.enqueue(tx)
        assert mine(winner_backlog, chain, alice, difficulty=D1).status is MineStatus.MINED
        late_backlog = Backlog()
        late_backlog.enqueue(tx)
        result = mine(late_backlog, chain, carol, difficulty=D1)
        assert result.status is MineStatus.NOTHING_TO_MINE
        assert len(chain) == 1


class TestRandomizedInterleavings:
    @pytest.mark.parametrize("seed", range(5))
    def test_no_duplicates_under_step_interleaving(self, alice, bob, seed):
        rng = random.Random(seed)
        miners = [
            BenchIdentity(100 + i).miner for i in range(4)
        ]
        txs = [tx_for(alice, bob, f"tx {i}") for i in range(12)]
        chain = Chain()
        backlogs = [Backlog() for _ in miners]
        for backlog in backlogs:
            for tx in txs:
                backlog.enqueue(tx)
        sessions: list[MiningSession | None] = [None] * len(miners)
        for _ in range(100_000):
            active = [
                i
                for i in range(len(miners))
                if sessions[i] is not None or len(backlogs[i])
            ]
            if not active:
                break
            i = rng.choice(active)
            if sessions[i] is None:
                sessions[i] = MiningSession(
                    backlog=backlogs[i],
                    chain=chain,
                    miner=miners[i],
                    tx_per_block=3,
                    difficulty=D1,
                )
            sessions[i].step()
            if sessions[i].result is not None:
                sessions[i] = None
        else:
            pytest.fail("interleaved miners did not quiesce")
        mined = [t.id for block in chain.blocks for t in block.transactions]
        assert sorted(mined) == sorted(t.id for t in txs)
        assert [b.block_number for b in chain.blocks] == list(
            range(1, len(chain.blocks) + 1)
        )

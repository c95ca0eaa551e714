import dataclasses

import pytest

from mobichain.bench import build_chain
from mobichain.errors import InvalidKeyError
from mobichain.ledger import (
    TxStatus,
    create_account,
    create_transaction,
    make_vote,
    verify_block,
    verify_chain,
    verify_transaction,
    verify_vote,
)
from mobichain.models import Chain, Difficulty


@pytest.fixture(scope="module")
def chain3():
    return build_chain(3, tx_per_block=2, seed=11)


class TestAccounts:
    def test_account_creation(self):
        account = create_account("zoe", seed=b"\x09" * 32, now="2021-01-01T00:00:00Z")
        assert account.username == "zoe"
        assert account.create_date == "2021-01-01T00:00:00Z"
        assert account.to_doc()["type"] == "account"

    def test_fresh_accounts_get_distinct_keys(self):
        assert create_account("a").public_key != create_account("b").public_key


class TestTransactions:
    def test_valid_round_trip(self, alice, bob):
        tx = create_transaction("pay 5", alice, bob.public_key)
        assert verify_transaction(tx) is TxStatus.VALID
        assert tx.owner == (alice.public_key, bob.public_key)

    def test_id_is_hash_of_signing_bytes(self, alice, bob):
        from mobichain.crypto import sha3_256

        tx = create_transaction("pay 5", alice, bob.public_key)
        assert tx.id == sha3_256(tx.signing_bytes())

    def test_tampered_payload(self, alice, bob):
        tx = create_transaction("pay 5", alice, bob.public_key)
        forged = dataclasses.replace(
            tx, data=dataclasses.replace(tx.data, payload="pay 500")
        )
        assert verify_transaction(forged) is TxStatus.TAMPERED

    def test_tampered_timestamp(self, alice, bob):
        tx = create_transaction("pay 5", alice, bob.public_key)
        forged = dataclasses.replace(tx, timestamp="1999-01-01T00:00:00Z")
        assert verify_transaction(forged) is TxStatus.TAMPERED

    def test_signature_from_wrong_key(self, alice, bob, carol):
        from mobichain.crypto import sign

        tx = create_transaction("pay 5", alice, bob.public_key)
        forged = dataclasses.replace(
            tx, signature=sign(tx.signing_bytes(), carol.private_key)
        )
        assert verify_transaction(forged) is TxStatus.TAMPERED

    def test_duplicate_against_chain(self, chain3):
        mined = chain3.blocks[0].transactions[0]
        assert verify_transaction(mined, chain3) is TxStatus.DUPLICATE
        assert verify_transaction(mined, chain3.snapshot()) is TxStatus.DUPLICATE
        assert verify_transaction(mined, None) is TxStatus.VALID

    def test_tampered_beats_duplicate(self, chain3):
        mined = chain3.blocks[0].transactions[0]
        forged = dataclasses.replace(mined, timestamp="1999-01-01T00:00:00Z")
        assert verify_transaction(forged, chain3) is TxStatus.TAMPERED

    def test_bad_destination_key(self, alice):
        with pytest.raises(InvalidKeyError):
            create_transaction("x", alice, "not base58 0OIl")
        with pytest.raises(InvalidKeyError):
            create_transaction("x", alice, "abc")


class TestVotes:
    def test_round_trip(self, carol):
        vote = make_vote("00" * 32, "0", carol)
        assert verify_vote(vote)
        assert vote.is_block_valid is True

    def test_tampered_target(self, carol):
        vote = make_vote("00" * 32, "0", carol)
        forged = dataclasses.replace(vote, voting_for_block="ff" * 32)
        assert not verify_vote(forged)

    def test_tampered_previous(self, carol):
        vote = make_vote("00" * 32, "0", carol)
        forged = dataclasses.replace(vote, previous_block="ff" * 32)
        assert not verify_vote(forged)


class TestVerifyBlock:
    def test_valid_block(self, chain3):
        assert verify_block(chain3.blocks[0], "0", Difficulty(1))

    def test_wrong_predecessor(self, chain3):
        assert not verify_block(chain3.blocks[0], "ff" * 32, Difficulty(1))

    def test_insufficient_difficulty(self, chain3):
        assert not verify_block(chain3.blocks[0], "0", Difficulty(6))

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda b: dataclasses.replace(b, version="2"),
            lambda b: dataclasses.replace(b, transactions=()),
            lambda b: dataclasses.replace(b, nonce=b.nonce + 1),
            lambda b: dataclasses.replace(b, tx_hash="ab" * 32),
            lambda b: dataclasses.replace(
                b, id=b.id[:-1] + ("0" if b.id[-1] != "0" else "1")
            ),
            lambda b: dataclasses.replace(b, voters=("someone-else",)),
            lambda b: dataclasses.replace(
                b,
                votes=(
                    dataclasses.replace(b.votes[0], is_block_valid=False),
                ),
            ),
            lambda b: dataclasses.replace(
                b,
                votes=(
                    dataclasses.replace(b.votes[0], previous_block="ff" * 32),
                ),
            ),
            lambda b: dataclasses.replace(
                b, transactions=b.transactions[::-1]
            ),
        ],
    )
    def test_single_field_mutations_fail(self, chain3, mutate):
        block = chain3.blocks[1]
        assert verify_block(block, chain3.blocks[0].id, Difficulty(1))
        assert not verify_block(mutate(block), chain3.blocks[0].id, Difficulty(1))


class TestVerifyChain:
    def test_accepts_chain_view_and_sequence(self, chain3):
        assert verify_chain(chain3, difficulty=Difficulty(1))
        assert verify_chain(chain3.snapshot(), difficulty=Difficulty(1))
        assert verify_chain(chain3.blocks, difficulty=Difficulty(1))

    def test_empty_chain_is_valid(self):
        assert verify_chain(Chain(), difficulty=Difficulty(1))
        assert verify_chain([], workers=4, difficulty=Difficulty(1))

    @pytest.mark.parametrize("workers", [1, 2, 3, 8])
    def test_worker_counts_agree(self, chain3, workers):
        assert verify_chain(chain3, workers=workers, difficulty=Difficulty(1))

    def test_reordered_blocks_fail(self, chain3):
        blocks = chain3.blocks
        shuffled = (blocks[1], blocks[0], blocks[2])
        assert not verify_chain(shuffled, difficulty=Difficulty(1))

    def test_gap_in_numbering_fails(self, chain3):
        assert not verify_chain(chain3.blocks[1:], difficulty=Difficulty(1))

    def test_truncated_prefix_is_valid(self, chain3):
        assert verify_chain(chain3.blocks[:2], difficulty=Difficulty(1))

    def test_workers_must_be_positive(self, chain3):
        with pytest.raises(ValueError):
            verify_chain(chain3, workers=0, difficulty=Difficulty(1))

    def test_tampered_middle_block_fails_any_worker_count(self, chain3):
        blocks = list(chain3.blocks)
        blocks[1] = dataclasses.replace(blocks[1], nonce=blocks[1].nonce + 1)
        for workers in (1, 2, 3):
            assert not verify_chain(blocks, workers=workers, difficulty=Difficulty(1))
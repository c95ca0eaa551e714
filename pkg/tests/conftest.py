import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from mobichain.ledger import create_account

# lets test modules import the local reference implementations (ed25519_ref)
sys.path.insert(0, str(Path(__file__).parent))

# jit warm-up and process pools make per-example deadlines meaningless here
settings.register_profile(
    "mobichain",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("mobichain")


@pytest.fixture(scope="session")
def alice():
    return create_account("alice", seed=b"\x11" * 32, now="2021-05-01T00:00:00Z")


@pytest.fixture(scope="session")
def bob():
    return create_account("bob", seed=b"\x22" * 32, now="2021-05-01T00:00:00Z")


@pytest.fixture(scope="session")
def carol():
    return create_account("carol", seed=b"\x33" * 32, now="2021-05-01T00:00:00Z")


@pytest.fixture(scope="session")
def bench_chains_1000():
    """1000-block chains at difficulty 1, shared by the heavier criteria."""
    from mobichain.bench import build_chain

    return {t: build_chain(1000, tx_per_block=t, seed=0) for t in (1, 3, 6)}

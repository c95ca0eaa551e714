"""MobiChain: a proof-of-work transaction ledger for (simulated) mobile nodes.

Modules:

- ``canonical`` / ``crypto`` / ``models``: serialization, hashes, signatures,
  and the domain types (accounts, transactions, blocks, the chain).
- ``powkernel``: the nonce search with selectable numba / numpy / hashlib
  kernels (``MOBICHAIN_POW_BACKEND``).
- ``ledger`` / ``mining``: transaction and block verification, parallel chain
  verification, and the five-step mining pipeline.
- ``store``: append-only JSON document store with a change feed.
- ``node`` / ``netsim``: per-node event handlers and the discrete-event
  broadcast network they run in.
- ``bench``: memory, proof-of-work, verification, and kernel benchmarks
  behind the ``mobichain`` CLI.
"""

__version__ = "0.1.0"

"""Storage-footprint benchmark.

Grows one chain per transactions-per-block setting, measures the canonical
byte size of every block document, and fits the additive model

    block_bytes ~ base + per_tx * tx_count + per_digit * digits(block_number)

across all runs. Grouping more transactions into each block amortises the
fixed block overhead, and the summary reports that saving as a percentage
per transaction relative to the one-transaction baseline.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from ..canonical import canonical_serialize
from ..models import Chain, Difficulty
from .chains import build_chain
from .stats import fit_size_model, linear_fit

__all__ = ["MemoryRun", "MemoryBenchResult", "run_memory_bench"]

CSV_FIELDS = (
    "tx_per_block",
    "block_number",
    "number_digits",
    "block_bytes",
    "chain_bytes",
)


@dataclass
class MemoryRun:
    """Measurements for one chain grown at a fixed tx-per-block setting."""

    tx_per_block: int
    block_bytes: list[int]
    chain_bytes: list[int]
    slope: float = 0.0
    intercept: float = 0.0
    r_squared: float = 0.0

    @property
    def blocks(self) -> int:
        return len(self.block_bytes)

    @property
    def per_tx_bytes(self) -> float:
        return self.chain_bytes[-1] / (self.blocks * self.tx_per_block)


@dataclass
class MemoryBenchResult:
    max_blocks: int
    payload_chars: int
    seed: int
    runs: dict[int, MemoryRun]
    base_bytes: float = 0.0
    per_tx_bytes: float = 0.0
    per_digit_bytes: float = 0.0
    max_relative_residual: float = 0.0
    reduction_percent: dict[int, float] = field(default_factory=dict)

    def rows(self) -> list[dict]:
        out = []
        for t in sorted(self.runs):
            run = self.runs[t]
            for k in range(run.blocks):
                number = k + 1
                out.append(
                    {
                        "tx_per_block": t,
                        "block_number": number,
                        "number_digits": len(str(number)),
                        "block_bytes": run.block_bytes[k],
                        "chain_bytes": run.chain_bytes[k],
                    }
                )
        return out

    def summary(self) -> dict:
        return {
            "bench": "memory",
            "max_blocks": self.max_blocks,
            "payload_chars": self.payload_chars,
            "seed": self.seed,
            "model": {
                "base_bytes": round(self.base_bytes, 3),
                "per_tx_bytes": round(self.per_tx_bytes, 3),
                "per_digit_bytes": round(self.per_digit_bytes, 3),
                "max_relative_residual": round(self.max_relative_residual, 6),
            },
            "runs": {
                str(t): {
                    "chain_bytes": run.chain_bytes[-1],
                    "per_tx_bytes": round(run.per_tx_bytes, 3),
                    "slope": round(run.slope, 3),
                    "intercept": round(run.intercept, 3),
                    "r_squared": round(run.r_squared, 8),
                }
                for t, run in sorted(self.runs.items())
            },
            "reduction_percent": {
                str(t): round(v, 3)
                for t, v in sorted(self.reduction_percent.items())
            },
        }

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_FIELDS)
            writer.writeheader()
            writer.writerows(self.rows())


def _measure_run(
    tx_per_block: int,
    max_blocks: int,
    payload_chars: int,
    seed: int,
    difficulty: Difficulty,
    chain: Chain | None = None,
) -> MemoryRun:
    if chain is None:
        chain = build_chain(
            max_blocks,
            tx_per_block=tx_per_block,
            difficulty=difficulty,
            payload_chars=payload_chars,
            seed=seed,
        )
    blocks = chain.blocks[:max_blocks]
    if len(blocks) < max_blocks:
        raise ValueError(f"prebuilt chain is shorter than {max_blocks} blocks")
    block_bytes = [len(canonical_serialize(b.to_doc())) for b in blocks]
    # a serialized chain is "[" + doc + ("," + doc)... + "]"
    chain_bytes = []
    total = 2
    for k, size in enumerate(block_bytes):
        total += size + (1 if k else 0)
        chain_bytes.append(total)
    run = MemoryRun(tx_per_block, block_bytes, chain_bytes)
    xs = list(range(1, run.blocks + 1))
    run.slope, run.intercept, run.r_squared = linear_fit(xs, chain_bytes)
    return run


def run_memory_bench(
    max_blocks: int = 1000,
    payload_chars: int = 20,
    seed: int = 0,
    tx_counts: Sequence[int] = (1, 3, 6),
    difficulty: Difficulty = Difficulty(1),
    chains: Mapping[int, Chain] | None = None,
) -> MemoryBenchResult:
    """Measure and model chain growth; `chains` skips rebuilding test data."""
    if 1 not in tx_counts:
        raise ValueError("tx_counts needs the single-transaction baseline")
    runs = {
        t: _measure_run(
            t,
            max_blocks,
            payload_chars,
            seed,
            difficulty,
            chain=None if chains is None else chains[t],
        )
        for t in tx_counts
    }
    result = MemoryBenchResult(max_blocks, payload_chars, seed, runs)

    # The first block links to head id "0" instead of a 64-char digest, so
    # it sits far below the additive model; fit and residuals use the rest.
    tx_col: list[int] = []
    digit_col: list[int] = []
    size_col: list[int] = []
    for t, run in runs.items():
        for k, size in enumerate(run.block_bytes):
            if k == 0:
                continue
            tx_col.append(t)
            digit_col.append(len(str(k + 1)))
            size_col.append(size)
    result.base_bytes, result.per_tx_bytes, result.per_digit_bytes = (
        fit_size_model(tx_col, digit_col, size_col)
    )

    worst = 0.0
    for t, run in runs.items():
        for k, size in enumerate(run.block_bytes):
            if k == 0:
                continue
            predicted = (
                result.base_bytes
                + result.per_tx_bytes * t
                + result.per_digit_bytes * len(str(k + 1))
            )
            worst = max(worst, abs(predicted - size) / size)
    result.max_relative_residual = worst

    baseline = runs[1].per_tx_bytes
    for t, run in runs.items():
        if t == 1:
            continue
        result.reduction_percent[t] = 100.0 * (1.0 - run.per_tx_bytes / baseline)
    return result

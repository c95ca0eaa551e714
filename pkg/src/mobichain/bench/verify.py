"""Chain verification scaling benchmark.

Builds one chain per transactions-per-block setting, then times full
verification across a grid of chain lengths and worker counts. Each cell
is the median of several repetitions. The summary carries linear fits of
time against length and the worker speedup ladder.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from ..ledger import verify_chain
from ..models import Chain, Difficulty
from .chains import build_chain
from .stats import linear_fit

__all__ = ["VerifyCell", "VerifyBenchResult", "run_verify_bench"]

CSV_FIELDS = (
    "blocks",
    "tx_per_block",
    "workers",
    "median_seconds",
    "per_tx_microseconds",
)


@dataclass(frozen=True, slots=True)
class VerifyCell:
    blocks: int
    tx_per_block: int
    workers: int
    median_seconds: float

    @property
    def per_tx_microseconds(self) -> float:
        return 1e6 * self.median_seconds / (self.blocks * self.tx_per_block)


@dataclass
class VerifyBenchResult:
    seed: int
    repetitions: int
    cells: list[VerifyCell] = field(default_factory=list)

    def cell(self, blocks: int, tx_per_block: int, workers: int) -> VerifyCell:
        for c in self.cells:
            if (c.blocks, c.tx_per_block, c.workers) == (
                blocks,
                tx_per_block,
                workers,
            ):
                return c
        raise KeyError((blocks, tx_per_block, workers))

    def length_fits(self) -> dict[str, dict]:
        """R2 of median time against chain length per (tx, workers) series."""
        out: dict[str, dict] = {}
        series: dict[tuple[int, int], list[VerifyCell]] = {}
        for c in self.cells:
            series.setdefault((c.tx_per_block, c.workers), []).append(c)
        for (t, w), cells in sorted(series.items()):
            if len(cells) < 2:
                continue
            cells = sorted(cells, key=lambda c: c.blocks)
            slope, intercept, r2 = linear_fit(
                [c.blocks for c in cells], [c.median_seconds for c in cells]
            )
            out[f"tx={t},workers={w}"] = {
                "seconds_per_block": round(slope, 8),
                "intercept": round(intercept, 6),
                "r_squared": round(r2, 6),
            }
        return out

    def speedups(self) -> dict[str, float]:
        """Single-worker time over w-worker time at the largest grid cell."""
        blocks = max(c.blocks for c in self.cells)
        tx = max(c.tx_per_block for c in self.cells)
        workers = sorted({c.workers for c in self.cells})
        base = self.cell(blocks, tx, workers[0]).median_seconds
        return {
            str(w): round(base / self.cell(blocks, tx, w).median_seconds, 3)
            for w in workers
        }

    def summary(self) -> dict:
        return {
            "bench": "verify",
            "seed": self.seed,
            "repetitions": self.repetitions,
            "cells": [
                {
                    "blocks": c.blocks,
                    "tx_per_block": c.tx_per_block,
                    "workers": c.workers,
                    "median_seconds": round(c.median_seconds, 6),
                    "per_tx_microseconds": round(c.per_tx_microseconds, 3),
                }
                for c in self.cells
            ],
            "length_fits": self.length_fits(),
            "speedup_vs_min_workers": self.speedups(),
        }

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_FIELDS)
            for c in self.cells:
                writer.writerow(
                    (
                        c.blocks,
                        c.tx_per_block,
                        c.workers,
                        f"{c.median_seconds:.6f}",
                        f"{c.per_tx_microseconds:.3f}",
                    )
                )


def run_verify_bench(
    block_counts: Sequence[int] = (100, 500, 1000),
    tx_counts: Sequence[int] = (1, 3, 6),
    worker_counts: Sequence[int] = (1, 2, 4, 8),
    repetitions: int = 5,
    seed: int = 0,
    difficulty: Difficulty = Difficulty(1),
    chains: Mapping[int, Chain] | None = None,
) -> VerifyBenchResult:
    """Time the verification grid; `chains` skips rebuilding test data."""
    if repetitions < 1:
        raise ValueError("need at least one repetition")
    block_counts = sorted(set(block_counts))
    result = VerifyBenchResult(seed=seed, repetitions=repetitions)

    grid = []
    for t in sorted(set(tx_counts)):
        chain = chains[t] if chains is not None else build_chain(
            max(block_counts),
            tx_per_block=t,
            difficulty=difficulty,
            seed=seed,
        )
        if len(chain.blocks) < max(block_counts):
            raise ValueError(
                f"prebuilt chain is shorter than {max(block_counts)} blocks"
            )
        for n in block_counts:
            prefix = chain.blocks[:n]
            for w in sorted(set(worker_counts)):
                # untimed warmup absorbs first-touch and pool start-up cost
                if not verify_chain(prefix, workers=w, difficulty=difficulty):
                    raise RuntimeError(
                        f"bench chain failed verification at n={n} t={t}"
                    )
                grid.append((n, t, w, prefix, []))

    # repetitions are interleaved round-robin across the grid so a slow
    # stretch of the host dilutes into single outliers per cell instead of
    # swallowing one cell's whole median
    for _ in range(repetitions):
        for n, t, w, prefix, times in grid:
            started = time.perf_counter()
            ok = verify_chain(prefix, workers=w, difficulty=difficulty)
            times.append(time.perf_counter() - started)
            if not ok:
                raise RuntimeError(
                    f"bench chain failed verification at n={n} t={t}"
                )

    for n, t, w, _, times in grid:
        result.cells.append(VerifyCell(n, t, w, statistics.median(times)))
    return result

"""Proof-of-work latency benchmark.

Times the nonce search over many randomised block headers at a fixed
difficulty. Each candidate nonce is an independent trial with success
probability 16^-difficulty, so iteration counts should follow a geometric
distribution; the summary includes a chi-square goodness-of-fit check
against that hypothesis alongside throughput figures.
"""

from __future__ import annotations

import csv
import random
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..models import Difficulty
from ..powkernel import proof_of_work
from .stats import geometric_gof

__all__ = ["PowTrial", "PowBenchResult", "run_pow_bench"]

CSV_FIELDS = ("trial", "block_number", "nonce", "iterations", "seconds")


@dataclass(frozen=True, slots=True)
class PowTrial:
    trial: int
    block_number: int
    nonce: int
    seconds: float

    @property
    def iterations(self) -> int:
        # nonces are tried from 0, so a win at n means n + 1 candidates
        return self.nonce + 1


@dataclass
class PowBenchResult:
    difficulty: int
    seed: int
    backend: str | None
    trials: list[PowTrial] = field(default_factory=list)
    chi_square: float = 0.0
    p_value: float = 0.0

    @property
    def expected_iterations(self) -> float:
        return float(16**self.difficulty)

    @property
    def mean_iterations(self) -> float:
        return statistics.fmean(t.iterations for t in self.trials)

    @property
    def median_iterations(self) -> float:
        return statistics.median(t.iterations for t in self.trials)

    @property
    def total_seconds(self) -> float:
        return sum(t.seconds for t in self.trials)

    @property
    def hashes_per_second(self) -> float:
        return sum(t.iterations for t in self.trials) / self.total_seconds

    def histogram(self, bins: int = 30) -> list[dict]:
        counts = [t.iterations for t in self.trials]
        width = max(1, (max(counts) + bins - 1) // bins)
        buckets: dict[int, int] = {}
        for value in counts:
            buckets[(value - 1) // width] = buckets.get((value - 1) // width, 0) + 1
        return [
            {
                "from_iterations": b * width + 1,
                "to_iterations": (b + 1) * width,
                "count": buckets[b],
            }
            for b in sorted(buckets)
        ]

    def summary(self) -> dict:
        return {
            "bench": "pow",
            "difficulty": self.difficulty,
            "seed": self.seed,
            "backend": self.backend or "auto",
            "trials": len(self.trials),
            "expected_iterations": self.expected_iterations,
            "mean_iterations": round(self.mean_iterations, 3),
            "median_iterations": self.median_iterations,
            "mean_seconds": round(self.total_seconds / len(self.trials), 6),
            "hashes_per_second": round(self.hashes_per_second, 1),
            "geometric_fit": {
                "chi_square": round(self.chi_square, 3),
                "p_value": round(self.p_value, 6),
            },
            "histogram": self.histogram(),
        }

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_FIELDS)
            for t in self.trials:
                writer.writerow(
                    (t.trial, t.block_number, t.nonce, t.iterations, f"{t.seconds:.6f}")
                )


def run_pow_bench(
    trials: int = 1000,
    difficulty: int = 3,
    seed: int = 0,
    backend: str | None = None,
) -> PowBenchResult:
    """Search `trials` random headers; every trial uses a fresh header."""
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = random.Random(f"pow:{seed}")
    level = Difficulty(difficulty)
    result = PowBenchResult(difficulty=difficulty, seed=seed, backend=backend)

    # throwaway call so jit compilation never lands inside a timed trial
    proof_of_work(1, "f" * 64, "0", Difficulty(0), backend=backend)

    for index in range(trials):
        block_number = rng.randrange(1, 10**6)
        tx_hash = rng.randbytes(32).hex()
        previous = rng.randbytes(32).hex()
        started = time.perf_counter()
        _, nonce = proof_of_work(
            block_number, tx_hash, previous, level, backend=backend
        )
        elapsed = time.perf_counter() - started
        result.trials.append(PowTrial(index, block_number, nonce, elapsed))

    if difficulty > 0 and trials >= 50:
        result.chi_square, result.p_value = geometric_gof(
            [t.iterations for t in result.trials], 16.0**-difficulty
        )
    else:
        # zero difficulty is deterministic and tiny samples carry no power
        result.chi_square, result.p_value = 0.0, 1.0
    return result

"""Nonce-search backend comparison.

Runs the identical batch of proof-of-work problems through every importable
search backend and reports per-backend throughput. Also cross-checks that
all backends return the same block id and nonce for every problem, which
doubles as an end-to-end consistency audit of the jit and vectorised paths
against the plain hashlib implementation.
"""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..errors import MobiChainError
from ..models import Difficulty
from ..powkernel import available_backends, proof_of_work

__all__ = ["KernelTiming", "KernelBenchResult", "run_kernel_bench"]

CSV_FIELDS = (
    "backend",
    "trials",
    "total_iterations",
    "seconds",
    "hashes_per_second",
)


@dataclass(frozen=True, slots=True)
class KernelTiming:
    backend: str
    trials: int
    total_iterations: int
    seconds: float

    @property
    def hashes_per_second(self) -> float:
        return self.total_iterations / self.seconds


@dataclass
class KernelBenchResult:
    difficulty: int
    seed: int
    timings: list[KernelTiming] = field(default_factory=list)

    def summary(self) -> dict:
        fastest = max(self.timings, key=lambda t: t.hashes_per_second)
        return {
            "bench": "kernels",
            "difficulty": self.difficulty,
            "seed": self.seed,
            "backends": {
                t.backend: {
                    "trials": t.trials,
                    "total_iterations": t.total_iterations,
                    "seconds": round(t.seconds, 6),
                    "hashes_per_second": round(t.hashes_per_second, 1),
                }
                for t in self.timings
            },
            "fastest_backend": fastest.backend,
            "results_identical_across_backends": True,
        }

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_FIELDS)
            for t in self.timings:
                writer.writerow(
                    (
                        t.backend,
                        t.trials,
                        t.total_iterations,
                        f"{t.seconds:.6f}",
                        f"{t.hashes_per_second:.1f}",
                    )
                )


def run_kernel_bench(
    trials: int = 50,
    difficulty: int = 2,
    seed: int = 0,
    backends: Sequence[str] | None = None,
) -> KernelBenchResult:
    if trials < 1:
        raise ValueError("need at least one trial")
    names = list(backends) if backends else available_backends()
    if not names:
        raise MobiChainError("no search backends are importable")

    rng = random.Random(f"kernels:{seed}")
    problems = [
        (
            rng.randrange(1, 10**6),
            rng.randbytes(32).hex(),
            rng.randbytes(32).hex(),
        )
        for _ in range(trials)
    ]
    level = Difficulty(difficulty)
    result = KernelBenchResult(difficulty=difficulty, seed=seed)

    reference: list[tuple[str, int]] | None = None
    for name in names:
        # untimed call first so jit compilation cannot skew a backend
        proof_of_work(1, "f" * 64, "0", Difficulty(0), backend=name)
        answers: list[tuple[str, int]] = []
        total_iterations = 0
        started = time.perf_counter()
        for number, tx_hash, previous in problems:
            block_id, nonce = proof_of_work(
                number, tx_hash, previous, level, backend=name
            )
            answers.append((block_id, nonce))
            total_iterations += nonce + 1
        elapsed = time.perf_counter() - started
        if reference is None:
            reference = answers
        elif answers != reference:
            raise MobiChainError(
                f"backend {name!r} disagrees with {names[0]!r} on the same input"
            )
        result.timings.append(
            KernelTiming(name, trials, total_iterations, elapsed)
        )
    return result

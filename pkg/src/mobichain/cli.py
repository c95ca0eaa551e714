"""Command-line entry points.

Two command families:

  mobichain bench {memory,pow,verify,kernels}   benchmark runners
  mobichain sim run --scenario FILE             event-driven network runs

Benchmarks print a JSON summary to stdout; with --out they also write a
CSV of raw measurements plus summary.json into the chosen directory.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .models import Difficulty
from .netsim import Simulation

CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise click.BadParameter("expected at least one integer")
    return values


def _emit(result, out: str | None, csv_name: str) -> None:
    summary = result.summary()
    if out:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        result.write_csv(out_dir / csv_name)
        with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    click.echo(json.dumps(summary, indent=2))


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(package_name="mobichain")
def main() -> None:
    """Mobile blockchain toolkit: benchmarks and network simulation."""


@main.group()
def bench() -> None:
    """Benchmark runners; each prints a JSON summary."""


@bench.command("memory")
@click.option("--max-blocks", default=1000, show_default=True, type=click.IntRange(min=1))
@click.option("--payload-chars", default=20, show_default=True, type=click.IntRange(min=1))
@click.option("--tx", "tx_counts", default="1,3,6", show_default=True,
              help="Comma-separated transactions-per-block settings.")
@click.option("--difficulty", default=1, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", default=None, type=click.Path(file_okay=False),
              help="Directory for memory.csv and summary.json.")
def bench_memory(max_blocks, payload_chars, tx_counts, difficulty, seed, out):
    """Measure chain storage growth and fit the block-size model."""
    from .bench import run_memory_bench

    result = run_memory_bench(
        max_blocks=max_blocks,
        payload_chars=payload_chars,
        seed=seed,
        tx_counts=tuple(_int_list(tx_counts)),
        difficulty=Difficulty(difficulty),
    )
    _emit(result, out, "memory.csv")


@bench.command("pow")
@click.option("--trials", default=1000, show_default=True, type=click.IntRange(min=1))
@click.option("--difficulty", default=3, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--backend", default=None,
              type=click.Choice(["numba", "numpy", "hashlib"]),
              help="Force one search backend instead of auto-selection.")
@click.option("--out", default=None, type=click.Path(file_okay=False),
              help="Directory for pow.csv and summary.json.")
def bench_pow(trials, difficulty, seed, backend, out):
    """Time the nonce search over randomised headers."""
    from .bench import run_pow_bench

    result = run_pow_bench(
        trials=trials, difficulty=difficulty, seed=seed, backend=backend
    )
    _emit(result, out, "pow.csv")


@bench.command("verify")
@click.option("--blocks", default="100,500,1000", show_default=True,
              help="Comma-separated chain lengths.")
@click.option("--tx", "tx_counts", default="1,3,6", show_default=True,
              help="Comma-separated transactions-per-block settings.")
@click.option("--workers", default="1,2,4,8", show_default=True,
              help="Comma-separated verification worker counts.")
@click.option("--reps", default=5, show_default=True, type=click.IntRange(min=1))
@click.option("--difficulty", default=1, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", default=None, type=click.Path(file_okay=False),
              help="Directory for verify.csv and summary.json.")
def bench_verify(blocks, tx_counts, workers, reps, difficulty, seed, out):
    """Time full-chain verification across lengths and worker counts."""
    from .bench import run_verify_bench

    result = run_verify_bench(
        block_counts=tuple(_int_list(blocks)),
        tx_counts=tuple(_int_list(tx_counts)),
        worker_counts=tuple(_int_list(workers)),
        repetitions=reps,
        seed=seed,
        difficulty=Difficulty(difficulty),
    )
    _emit(result, out, "verify.csv")


@bench.command("kernels")
@click.option("--trials", default=50, show_default=True, type=click.IntRange(min=1))
@click.option("--difficulty", default=2, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", default=None, type=click.Path(file_okay=False),
              help="Directory for kernels.csv and summary.json.")
def bench_kernels(trials, difficulty, seed, out):
    """Compare every importable nonce-search backend on one workload."""
    from .bench import run_kernel_bench

    result = run_kernel_bench(trials=trials, difficulty=difficulty, seed=seed)
    _emit(result, out, "kernels.csv")


@main.group()
def sim() -> None:
    """Event-driven simulation of nodes, gateways, and miners."""


@sim.command("run")
@click.option("--scenario", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Scenario JSON describing gateways, nodes, and events.")
@click.option("--max-events", default=1_000_000, show_default=True,
              type=click.IntRange(min=1))
@click.option("--out", default=None, type=click.Path(file_okay=False),
              help="Directory for per-node stores and summary.json.")
def sim_run(scenario, max_events, out):
    """Run a scenario until no events remain and print its statistics."""
    simulation = Simulation.from_scenario_file(scenario)
    stats = simulation.run_until_quiescent(max_events=max_events)
    if out:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        simulation.dump_stores(out_dir)
        with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
            json.dump(stats, fh, indent=2)
            fh.write("\n")
    click.echo(json.dumps(stats, indent=2))


if __name__ == "__main__":
    main()

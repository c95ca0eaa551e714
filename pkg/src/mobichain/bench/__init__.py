"""Benchmark runners: storage footprint, proof-of-work latency,
verification scaling, and backend throughput comparison.

Every runner returns a result object exposing `summary()` (a JSON-ready
dict) and `write_csv(path)`; the command line wires these to files.
"""

from .chains import BenchIdentity, build_block, build_chain
from .kernels import KernelBenchResult, run_kernel_bench
from .memory import MemoryBenchResult, run_memory_bench
from .pow import PowBenchResult, run_pow_bench
from .verify import VerifyBenchResult, run_verify_bench

__all__ = [
    "BenchIdentity",
    "build_block",
    "build_chain",
    "KernelBenchResult",
    "run_kernel_bench",
    "MemoryBenchResult",
    "run_memory_bench",
    "PowBenchResult",
    "run_pow_bench",
    "VerifyBenchResult",
    "run_verify_bench",
]

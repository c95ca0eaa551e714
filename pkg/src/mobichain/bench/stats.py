"""Small numeric helpers shared by the benchmark runners."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import optimize, stats

__all__ = [
    "linear_fit",
    "r_squared",
    "fit_size_model",
    "geometric_gof",
]


def linear_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line through (x, y); returns (slope, intercept, r2)."""
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept), r_squared(ys, slope * xs + intercept)


def r_squared(actual: Sequence[float], predicted: Sequence[float]) -> float:
    actual = np.asarray(actual, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    ss_res = float(np.sum((actual - predicted) ** 2))
    ss_tot = float(np.sum((actual - actual.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def fit_size_model(
    tx_counts: Sequence[int],
    digit_counts: Sequence[int],
    sizes: Sequence[float],
) -> tuple[float, float, float]:
    """Fit size ~ base + per_tx * t + per_digit * digits, all coefficients >= 0.

    Non-negative least squares keeps the decomposition physically meaningful:
    a block cannot shrink when a transaction is added.
    """
    rows = np.column_stack(
        [
            np.ones(len(sizes)),
            np.asarray(tx_counts, dtype=np.float64),
            np.asarray(digit_counts, dtype=np.float64),
        ]
    )
    coef, _ = optimize.nnls(rows, np.asarray(sizes, dtype=np.float64))
    return float(coef[0]), float(coef[1]), float(coef[2])


def geometric_gof(
    iterations: Sequence[int], success_probability: float, bins: int = 16
) -> tuple[float, float]:
    """Chi-square goodness of fit of 1-based trial counts vs Geometric(p).

    Bins are equal-probability under the hypothesised distribution, with
    edges snapped to integers (probabilities recomputed from the exact CDF
    so the snap does not bias the test). Returns (statistic, p_value).
    """
    if not 0.0 < success_probability < 1.0:
        raise ValueError("success probability must lie in (0, 1)")
    if bins < 2:
        raise ValueError("need at least two bins")
    counts = np.asarray(iterations, dtype=np.int64)
    if counts.min() < 1:
        raise ValueError("iteration counts are 1-based")

    q = 1.0 - success_probability
    log_q = math.log(q)

    # cdf(k) = P(X <= k) = 1 - q^k for integer k >= 0
    edges = [0]
    for i in range(1, bins):
        target = i / bins
        k = math.ceil(math.log1p(-target) / log_q)
        if k > edges[-1]:
            edges.append(k)
    # bin j holds (edges[j-1], edges[j]], the last bin is open-ended
    upper = edges[1:] + [None]
    probs = []
    observed = []
    for lo, hi in zip(edges, upper):
        p_lo = 1.0 - q**lo
        p_hi = 1.0 if hi is None else 1.0 - q**hi
        probs.append(p_hi - p_lo)
        if hi is None:
            observed.append(int(np.sum(counts > lo)))
        else:
            observed.append(int(np.sum((counts > lo) & (counts <= hi))))

    probs_arr = np.asarray(probs)
    expected = probs_arr / probs_arr.sum() * counts.size
    statistic, p_value = stats.chisquare(observed, expected)
    return float(statistic), float(p_value)

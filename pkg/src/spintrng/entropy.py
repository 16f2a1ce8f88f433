"""Marginal entropy estimators for binary streams."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def binary_shannon_entropy(p: float) -> float:
    """Shannon entropy of a Bernoulli(p) bit, in bits.

    Uses the convention 0 * log2(0) = 0.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return -(p * math.log2(p) + q * math.log2(q))


def binary_min_entropy(p: float) -> float:
    """Min-entropy of a Bernoulli(p) bit: -log2 of the likelier symbol."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return -math.log2(max(p, 1.0 - p))


def _fraction_of_ones(bits) -> tuple[float, int]:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        arr = arr.ravel()
    n = arr.size
    if n < 1:
        raise ValueError("need at least one bit")
    return float(np.count_nonzero(arr)) / n, n


def shannon_entropy(bits) -> float:
    """Shannon entropy per bit of the observed 0/1 marginal."""
    p, _ = _fraction_of_ones(bits)
    return binary_shannon_entropy(p)


def min_entropy(bits) -> float:
    """Min-entropy per bit of the observed 0/1 marginal."""
    p, _ = _fraction_of_ones(bits)
    return binary_min_entropy(p)


@dataclass(frozen=True)
class EntropyReport:
    n_bits: int
    p_one: float
    shannon: float
    min_entropy: float


def entropy_report(bits) -> EntropyReport:
    p, n = _fraction_of_ones(bits)
    return EntropyReport(
        n_bits=n,
        p_one=p,
        shannon=binary_shannon_entropy(p),
        min_entropy=binary_min_entropy(p),
    )

"""Battery driver: groups, composite p-values, verdicts, reports.

The input stream is split into equal groups (default 10).  Every
module runs once per group; sub-p-values are pooled per module (the
template test contributes one per template per group, the
cumulative-sums and serial tests two per group).  A module's verdict
combines two thresholds:

* composite uniformity p-value over all pooled sub-p-values
  (10-bin chi-square) must exceed 0.0001, and
* the fraction of sub-p-values at or above 0.01 must reach 0.91.

Modules whose recommended minimum length exceeds the group size are
reported as skipped, not failed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from spintrng.nist import modules as mod

COMPOSITE_ALPHA = 1e-4
GROUP_ALPHA = 0.01
PASS_RATE_THRESHOLD = 0.91

# (name, callable, recommended minimum bits per group)
_MODULES = (
    ("frequency", mod.frequency, 100),
    ("block_frequency", mod.block_frequency, 128),
    ("cumulative_sums", mod.cumulative_sums, 100),
    ("runs", mod.runs, 100),
    ("longest_run", mod.longest_run, 128),
    ("rank", mod.rank, 38 * 1024),
    ("spectral", mod.spectral, 1000),
    ("non_overlapping_template", mod.non_overlapping_templates, 8 * 2568),
    ("overlapping_template", mod.overlapping_template, 75 * 1032),
    ("approximate_entropy", mod.approximate_entropy, 2**16),
    ("serial", mod.serial, 2**16),
    ("linear_complexity", mod.linear_complexity, 200 * 500),
)

MODULE_NAMES = tuple(name for name, _, _ in _MODULES)


@dataclass(frozen=True)
class TestResult:
    """Outcome of one module over all groups."""

    module_name: str
    p_value: float | None  # composite uniformity p-value; None when skipped
    group_p_values: tuple[float, ...]
    pass_count: int
    group_count: int
    verdict: str  # "pass" | "fail" | "skipped"

    @property
    def pass_rate(self) -> float:
        if self.group_count == 0:
            return 0.0
        return self.pass_count / self.group_count


def composite_p_value(p_values) -> float:
    """Uniformity of a set of p-values: 10-bin chi-square tail."""
    p = np.asarray(p_values, dtype=np.float64)
    if p.size == 0:
        raise ValueError("no p-values")
    counts = np.histogram(p, bins=10, range=(0.0, 1.0))[0]
    expected = p.size / 10.0
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    return float(gammaincc(4.5, chi2 / 2.0))


def run_nist_suite(bits, n_groups: int = 10) -> list[TestResult]:
    """Run every battery module over the grouped stream."""
    arr = np.asarray(bits, dtype=np.uint8).ravel()
    if n_groups < 1:
        raise ValueError(f"n_groups must be >= 1, got {n_groups}")
    if arr.size == 0 or arr.size % n_groups:
        raise ValueError(
            f"stream of {arr.size} bits does not divide into {n_groups} groups"
        )
    group_len = arr.size // n_groups
    groups = arr.reshape(n_groups, group_len)

    results = []
    for name, fn, min_bits in _MODULES:
        if group_len < min_bits:
            results.append(
                TestResult(
                    module_name=name,
                    p_value=None,
                    group_p_values=(),
                    pass_count=0,
                    group_count=0,
                    verdict="skipped",
                )
            )
            continue
        pooled: list[float] = []
        for g in range(n_groups):
            pooled.extend(fn(groups[g]))
        composite = composite_p_value(pooled)
        pass_count = sum(1 for p in pooled if p >= GROUP_ALPHA)
        rate = pass_count / len(pooled)
        verdict = (
            "pass"
            if composite > COMPOSITE_ALPHA and rate >= PASS_RATE_THRESHOLD
            else "fail"
        )
        results.append(
            TestResult(
                module_name=name,
                p_value=composite,
                group_p_values=tuple(pooled),
                pass_count=pass_count,
                group_count=len(pooled),
                verdict=verdict,
            )
        )
    return results


def all_pass(results) -> bool:
    """True when no module failed (skips do not count against)."""
    return all(r.verdict != "fail" for r in results)


def format_report(results) -> str:
    """Human-readable table mirroring the JSON fields."""
    header = f"{'module':<26} {'composite_p':>12} {'pass_rate':>10} {'verdict':>8}"
    lines = [header, "-" * len(header)]
    for r in results:
        comp = "-" if r.p_value is None else f"{r.p_value:.6f}"
        rate = "-" if r.group_count == 0 else f"{r.pass_count}/{r.group_count}"
        lines.append(f"{r.module_name:<26} {comp:>12} {rate:>10} {r.verdict:>8}")
    return "\n".join(lines)


def results_to_json(results) -> str:
    payload = [
        {
            "module": r.module_name,
            "p_value": r.p_value,
            "pass_count": r.pass_count,
            "group_count": r.group_count,
            "pass_rate": r.pass_rate,
            "verdict": r.verdict,
        }
        for r in results
    ]
    return json.dumps(payload, indent=2)

"""Statistical test modules over binary sequences.

Each function takes a 0/1 uint8 array and returns a list of p-values
(most yield one; the cumulative-sums and serial tests yield two, the
non-overlapping template test yields one per template).  Functions
enforce only hard feasibility preconditions; the suite layer applies
the recommended minimum lengths and skips modules that do not apply.

The implementations follow the standard public formulations of these
tests; the worked-example values in the test suite pin the exact
conventions (one-sided vs two-sided statistics, inclusive thresholds,
wraparound pattern counting, and so on).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc, gammaincc, ndtr

from spintrng.nist.templates import template_codes


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).ravel()
    if arr.size == 0:
        raise ValueError("empty bit sequence")
    if arr.max() > 1:
        raise ValueError("bit values must be 0 or 1")
    return arr


def _window_codes(arr: np.ndarray, m: int) -> np.ndarray:
    """Integer code of every length-m window (MSB = earliest bit)."""
    win = np.lib.stride_tricks.sliding_window_view(arr, m)
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    return win.astype(np.int64) @ weights


def frequency(bits) -> list[float]:
    """Monobit balance of the whole sequence."""
    arr = _as_bits(bits)
    n = arr.size
    s = abs(2 * int(arr.sum()) - n)
    return [float(erfc(s / math.sqrt(n) / math.sqrt(2.0)))]


def block_frequency(bits, m: int = 128) -> list[float]:
    """Per-block balance, chi-square over n//m blocks."""
    arr = _as_bits(bits)
    n_blocks = arr.size // m
    if n_blocks < 1:
        raise ValueError(f"need at least {m} bits, got {arr.size}")
    blocks = arr[: n_blocks * m].reshape(n_blocks, m)
    pi = blocks.mean(axis=1)
    chi2 = 4.0 * m * float(np.sum((pi - 0.5) ** 2))
    return [float(gammaincc(n_blocks / 2.0, chi2 / 2.0))]


def _cusum_p_value(z: int, n: int) -> float:
    # Summation bounds truncate toward zero, matching the published
    # reference computations of this statistic.
    sqn = math.sqrt(n)
    k_lo = int((-n / z + 1) / 4)
    k_hi = int((n / z - 1) / 4)
    k = np.arange(k_lo, k_hi + 1)
    total = 1.0 - float(np.sum(ndtr((4 * k + 1) * z / sqn) - ndtr((4 * k - 1) * z / sqn)))
    k_lo2 = int((-n / z - 3) / 4)
    k = np.arange(k_lo2, k_hi + 1)
    total += float(np.sum(ndtr((4 * k + 3) * z / sqn) - ndtr((4 * k + 1) * z / sqn)))
    return min(max(total, 0.0), 1.0)


def cumulative_sums(bits) -> list[float]:
    """Maximum partial-sum excursion, forward and reverse."""
    arr = _as_bits(bits)
    x = arr.astype(np.int64) * 2 - 1
    out = []
    for series in (x, x[::-1]):
        z = int(np.abs(np.cumsum(series)).max())
        out.append(_cusum_p_value(z, arr.size))
    return out


def runs(bits) -> list[float]:
    """Total number of runs versus the expectation at the observed bias."""
    arr = _as_bits(bits)
    n = arr.size
    if n < 2:
        raise ValueError("need at least 2 bits")
    pi = float(arr.mean())
    # Prerequisite monobit screen: a grossly biased sequence fails outright.
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return [0.0]
    v = 1 + int(np.count_nonzero(arr[1:] != arr[:-1]))
    num = abs(v - 2.0 * n * pi * (1.0 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi)
    return [float(erfc(num / den))]


# Longest-run-of-ones parameterizations: (block length, class lower
# bounds, class probabilities), auto-selected from the sequence length.
_LONGEST_RUN_TABLES = (
    (128, 8, (1, 2, 3, 4), (0.2148, 0.3672, 0.2305, 0.1875)),
    (6272, 128, (4, 5, 6, 7, 8, 9), (0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124)),
    (
        750000,
        10**4,
        (10, 11, 12, 13, 14, 15, 16),
        (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727),
    ),
)


def _longest_one_run(row: np.ndarray) -> int:
    if not row.any():
        return 0
    padded = np.concatenate(([0], row, [0]))
    edges = np.flatnonzero(np.diff(padded))
    return int((edges[1::2] - edges[::2]).max())


def longest_run(bits) -> list[float]:
    """Distribution of the longest run of ones per block."""
    arr = _as_bits(bits)
    n = arr.size
    table = None
    for min_n, m, classes, pi in _LONGEST_RUN_TABLES:
        if n >= min_n:
            table = (m, classes, pi)
    if table is None:
        raise ValueError(f"need at least 128 bits, got {n}")
    m, classes, pi = table
    n_blocks = n // m
    blocks = arr[: n_blocks * m].reshape(n_blocks, m)
    longest = np.array([_longest_one_run(b) for b in blocks])
    lo = classes[0]
    hi = classes[-1]
    clamped = np.clip(longest, lo, hi)
    counts = np.bincount(clamped - lo, minlength=hi - lo + 1)
    expected = n_blocks * np.asarray(pi)
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    return [float(gammaincc(len(classes) / 2.0 - 0.5, chi2 / 2.0))]


def _gf2_rank(rows: list[int], n_cols: int) -> int:
    rank = 0
    rows = [r for r in rows if r]
    for col in range(n_cols - 1, -1, -1):
        pivot = None
        mask = 1 << col
        for idx, r in enumerate(rows):
            if r & mask:
                pivot = idx
                break
        if pivot is None:
            continue
        piv = rows.pop(pivot)
        rows = [r ^ piv if r & mask else r for r in rows]
        rank += 1
    return rank


def _rank_probability(r: int, m: int, q: int) -> float:
    log2 = (r * (m + q - r) - m * q) * math.log(2.0)
    acc = math.exp(log2)
    for i in range(r):
        acc *= (1.0 - 2.0 ** (i - m)) * (1.0 - 2.0 ** (i - q))
        acc /= 1.0 - 2.0 ** (i - r)
    return acc


def rank(bits) -> list[float]:
    """Ranks of disjoint 32x32 binary matrices over GF(2)."""
    m = q = 32
    arr = _as_bits(bits)
    n_mats = arr.size // (m * q)
    if n_mats < 1:
        raise ValueError(f"need at least {m * q} bits, got {arr.size}")
    weights = 1 << np.arange(q - 1, -1, -1, dtype=np.int64)
    mats = arr[: n_mats * m * q].reshape(n_mats, m, q).astype(np.int64)
    row_ints = mats @ weights
    full, minus1, rest = 0, 0, 0
    for mat_rows in row_ints:
        r = _gf2_rank([int(v) for v in mat_rows], q)
        if r == m:
            full += 1
        elif r == m - 1:
            minus1 += 1
        else:
            rest += 1
    p_full = _rank_probability(m, m, q)
    p_minus1 = _rank_probability(m - 1, m, q)
    p_rest = 1.0 - p_full - p_minus1
    chi2 = (
        (full - n_mats * p_full) ** 2 / (n_mats * p_full)
        + (minus1 - n_mats * p_minus1) ** 2 / (n_mats * p_minus1)
        + (rest - n_mats * p_rest) ** 2 / (n_mats * p_rest)
    )
    return [float(math.exp(-chi2 / 2.0))]


def spectral(bits) -> list[float]:
    """Discrete Fourier peak count against the 95 percent threshold."""
    arr = _as_bits(bits)
    n = arr.size
    if n < 2:
        raise ValueError("need at least 2 bits")
    x = arr.astype(np.float64) * 2.0 - 1.0
    mods = np.abs(np.fft.fft(x)[: n // 2])
    threshold = math.sqrt(n * math.log(1.0 / 0.05))
    n0 = 0.95 * n / 2.0
    n1 = int(np.count_nonzero(mods < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return [float(erfc(abs(d) / math.sqrt(2.0)))]


def _count_non_overlapping(positions: np.ndarray, m: int) -> int:
    count = 0
    next_free = -1
    for pos in positions:
        if pos >= next_free:
            count += 1
            next_free = pos + m
    return count


def non_overlapping_templates(bits, m: int = 9, n_blocks: int = 8) -> list[float]:
    """Occurrence counts of every aperiodic length-m template.

    The scan jumps m positions after each hit, so hits cannot overlap.
    One p-value per template.
    """
    arr = _as_bits(bits)
    block_len = arr.size // n_blocks
    if block_len <= m:
        raise ValueError(f"blocks of {block_len} bits are too short for m={m}")
    mean = (block_len - m + 1) / 2.0**m
    var = block_len * (1.0 / 2.0**m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    codes = [
        _window_codes(arr[j * block_len : (j + 1) * block_len], m)
        for j in range(n_blocks)
    ]
    out = []
    for tpl in template_codes(m):
        chi2 = 0.0
        for block in codes:
            w = _count_non_overlapping(np.flatnonzero(block == tpl), m)
            chi2 += (w - mean) ** 2 / var
        out.append(float(gammaincc(n_blocks / 2.0, chi2 / 2.0)))
    return out


# Class probabilities for the overlapping-template statistic at
# m = 9, block length 1032 (lambda = 2).
_OVERLAP_PI = (0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865)


def overlapping_template(bits, m: int = 9, block_len: int = 1032) -> list[float]:
    """Overlapping occurrences of the all-ones length-m template."""
    arr = _as_bits(bits)
    n_blocks = arr.size // block_len
    if n_blocks < 1:
        raise ValueError(f"need at least {block_len} bits, got {arr.size}")
    if m != 9 or block_len != 1032:
        raise ValueError("class probabilities are tabulated for m=9, block_len=1032")
    target = 2**m - 1
    k = len(_OVERLAP_PI) - 1
    counts = np.zeros(k + 1, dtype=np.int64)
    for j in range(n_blocks):
        block = arr[j * block_len : (j + 1) * block_len]
        hits = int(np.count_nonzero(_window_codes(block, m) == target))
        counts[min(hits, k)] += 1
    expected = n_blocks * np.asarray(_OVERLAP_PI)
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    return [float(gammaincc(k / 2.0, chi2 / 2.0))]


def _phi(arr: np.ndarray, m: int) -> float:
    if m == 0:
        return 0.0
    ext = np.concatenate([arr, arr[: m - 1]]) if m > 1 else arr
    counts = np.bincount(_window_codes(ext, m), minlength=2**m)
    probs = counts[counts > 0] / arr.size
    return float(np.sum(probs * np.log(probs)))


def approximate_entropy(bits, m: int = 10) -> list[float]:
    """Difference of m- and (m+1)-pattern entropies (wraparound counts)."""
    arr = _as_bits(bits)
    if arr.size < m + 1:
        raise ValueError(f"need more than {m} bits, got {arr.size}")
    apen = _phi(arr, m) - _phi(arr, m + 1)
    chi2 = 2.0 * arr.size * (math.log(2.0) - apen)
    return [float(gammaincc(2.0 ** (m - 1), chi2 / 2.0))]


def _psi_sq(arr: np.ndarray, m: int) -> float:
    if m == 0:
        return 0.0
    ext = np.concatenate([arr, arr[: m - 1]]) if m > 1 else arr
    counts = np.bincount(_window_codes(ext, m), minlength=2**m).astype(np.float64)
    return float(2.0**m / arr.size * np.sum(counts**2) - arr.size)


def serial(bits, m: int = 13) -> list[float]:
    """First and second differences of the pattern-frequency statistic."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    arr = _as_bits(bits)
    if arr.size < m:
        raise ValueError(f"need at least {m} bits, got {arr.size}")
    psi_m = _psi_sq(arr, m)
    psi_m1 = _psi_sq(arr, m - 1)
    psi_m2 = _psi_sq(arr, m - 2)
    d1 = psi_m - psi_m1
    d2 = psi_m - 2.0 * psi_m1 + psi_m2
    return [
        float(gammaincc(2.0 ** (m - 2), d1 / 2.0)),
        float(gammaincc(2.0 ** (m - 3), d2 / 2.0)),
    ]


def berlekamp_massey(bits) -> int:
    """Length of the shortest LFSR generating the sequence."""
    arr = _as_bits(bits)
    c = 1  # connection polynomial, bit j = coefficient of x^j
    b = 1
    length = 0
    last_fail = -1
    history = 0  # bit j = bits[i - j] once shifted
    for i, s in enumerate(arr):
        history = (history << 1) | int(s)
        if (c & history).bit_count() & 1:
            t = c
            c ^= b << (i - last_fail)
            if 2 * length <= i:
                length = i + 1 - length
                last_fail = i
                b = t
    return length


# Class probabilities for the linear-complexity statistic T.
_LC_PI = (0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833)


def linear_complexity(bits, block_len: int = 500) -> list[float]:
    """Per-block linear complexity against the theoretical law."""
    arr = _as_bits(bits)
    m = block_len
    n_blocks = arr.size // m
    if n_blocks < 1:
        raise ValueError(f"need at least {m} bits, got {arr.size}")
    sign = -1.0 if m % 2 else 1.0
    mean = m / 2.0 + (9.0 - sign) / 36.0 - (m / 3.0 + 2.0 / 9.0) / 2.0**m
    counts = np.zeros(7, dtype=np.int64)
    for j in range(n_blocks):
        length = berlekamp_massey(arr[j * m : (j + 1) * m])
        t = sign * (length - mean) + 2.0 / 9.0
        if t <= -2.5:
            counts[0] += 1
        elif t > 2.5:
            counts[6] += 1
        else:
            counts[int(math.floor(t + 2.5)) + 1] += 1
    expected = n_blocks * np.asarray(_LC_PI)
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    return [float(gammaincc(3.0, chi2 / 2.0))]

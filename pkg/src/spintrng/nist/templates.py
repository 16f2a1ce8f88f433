"""Aperiodic template enumeration for the non-overlapping template test.

A template is usable only if it cannot overlap a shifted copy of
itself, i.e. no proper prefix equals the suffix of the same length
(borderless / bifix-free).  For length 9 there are exactly 148 such
bit patterns.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def _is_borderless(bits: tuple[int, ...]) -> bool:
    m = len(bits)
    for k in range(1, m):
        if bits[:k] == bits[m - k :]:
            return False
    return True


@lru_cache(maxsize=None)
def aperiodic_templates(m: int) -> np.ndarray:
    """All borderless templates of length m, ascending numeric order.

    Rows are bit vectors, most significant bit first, matching how the
    template's integer code is formed from a sliding window.
    """
    if m < 2:
        raise ValueError(f"template length must be >= 2, got {m}")
    rows = []
    for value in range(2**m):
        bits = tuple((value >> (m - 1 - k)) & 1 for k in range(m))
        if _is_borderless(bits):
            rows.append(bits)
    out = np.array(rows, dtype=np.uint8)
    out.setflags(write=False)
    return out


def template_codes(m: int) -> np.ndarray:
    """Integer codes of the length-m templates (MSB-first packing)."""
    tpl = aperiodic_templates(m)
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    return tpl.astype(np.int64) @ weights

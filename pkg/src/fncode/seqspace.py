"""Radix arithmetic over fixed-length symbol sequences.

Sequences of n symbols from an alphabet {0..base-1} are identified with
integers in [0, base**n) using the most-significant-first convention:
value = seq[0]*base**(n-1) + ... + seq[n-1].
"""

from __future__ import annotations

import numpy as np

RADIX_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def sequence_count(base: int, n: int) -> int:
    return base**n


def radix_encode(seq, base: int) -> int:
    value = 0
    for s in seq:
        value = value * base + int(s)
    return value


def radix_decode(value: int, base: int, n: int) -> np.ndarray:
    digits = np.empty(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        digits[i] = value % base
        value //= base
    return digits


def digit_matrix(base: int, n: int) -> np.ndarray:
    """All base**n sequences as a (base**n, n) digit matrix in radix order."""
    count = base**n
    values = np.arange(count, dtype=np.int64)
    out = np.empty((count, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[:, i] = values % base
        values //= base
    return out


def position_sums(tables) -> np.ndarray:
    """Sum per-position lookup tables over every sequence in radix order.

    `tables` is a list of n 1-D arrays; entry r of the result is
    sum_i tables[i][digit_i(r)].  Built by repeated broadcasting, so the
    result has prod(len(t)) entries.
    """
    acc = np.zeros(1)
    for t in tables:
        acc = (acc[:, None] + np.asarray(t, dtype=float)[None, :]).ravel()
    return acc


def repeated_position_sums(table, n: int) -> np.ndarray:
    """position_sums for the same per-symbol table at every position."""
    return position_sums([table] * n)


def radix_string(value: int, base: int, n: int) -> str:
    if base > len(RADIX_CHARS):
        raise ValueError(f"alphabet size {base} exceeds radix-string limit")
    digits = radix_decode(value, base, n)
    return "".join(RADIX_CHARS[d] for d in digits)

"""Exact base-2 entropy computation for finite pmfs.

Sums use math.fsum, so each entropy is the correctly rounded value of the
real sum.  That makes results independent of summation order: tables whose
nonzero entries are the same multiset produce bitwise-identical entropies,
which downstream region comparisons rely on.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DocumentError
from .source import FunctionSpec, JointSource, induced_z_pmf


def entropy(p) -> float:
    """-sum p log2 p in bits, with 0 log 0 = 0.

    Accumulated pmfs can carry entries a few ulp above 1, which would turn
    a degenerate entropy slightly negative; clamp at zero.
    """
    arr = np.asarray(p, dtype=float).ravel()
    return max(0.0, -math.fsum(v * math.log2(v) for v in arr if v > 0.0))


def _column_marginal(joint: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(joint[:, v]) for v in range(joint.shape[1])])


def conditional_entropy(joint) -> float:
    """H(U|V) for a joint table with U on rows and V on columns.

    Computed as H(U,V) - H(V); the per-column expansion
    sum_v p(v) H(U|V=v) is kept out of the main path and used only as a
    test oracle.
    """
    arr = np.asarray(joint, dtype=float)
    if arr.ndim != 2:
        raise DocumentError(f"joint table must be 2-D, got shape {arr.shape}")
    return entropy(arr) - entropy(_column_marginal(arr))


@dataclass(frozen=True)
class EntropyReport:
    """All entropies (bits) needed to build the rate regions."""

    h_x: float
    h_y: float
    h_xy: float
    h_x_given_y: float
    h_y_given_x: float
    h_z: float
    h_z_given_x: float
    h_z_given_y: float

    def as_dict(self) -> dict:
        return asdict(self)


def output_joint_tables(
    src: JointSource, fspec: FunctionSpec
) -> tuple[np.ndarray, np.ndarray]:
    """Joint tables of (Z, X) and (Z, Y), rows indexed by the output symbol."""
    if fspec.table.shape != src.pmf.shape:
        raise DocumentError(
            f"function table shape {fspec.table.shape} does not match "
            f"pmf shape {src.pmf.shape}"
        )
    zx = np.zeros((fspec.z_size, src.x_size))
    zy = np.zeros((fspec.z_size, src.y_size))
    for x in range(src.x_size):
        for y in range(src.y_size):
            z = fspec.table[x, y]
            zx[z, x] += src.pmf[x, y]
            zy[z, y] += src.pmf[x, y]
    return zx, zy


def full_report(src: JointSource, fspec: FunctionSpec) -> EntropyReport:
    """Entropies of the sources, the pair, and the function output."""
    pmf = src.pmf
    zx, zy = output_joint_tables(src, fspec)
    h_x = entropy(_column_marginal(pmf.T))
    h_y = entropy(_column_marginal(pmf))
    h_xy = entropy(pmf)
    return EntropyReport(
        h_x=h_x,
        h_y=h_y,
        h_xy=h_xy,
        h_x_given_y=conditional_entropy(pmf),
        h_y_given_x=conditional_entropy(pmf.T),
        h_z=entropy(induced_z_pmf(src, fspec)),
        h_z_given_x=conditional_entropy(zx),
        h_z_given_y=conditional_entropy(zy),
    )

"""Weak (entropy) typicality: membership tests and exhaustive enumeration.

A length-n sequence is epsilon-typical for pmf p when its per-symbol
log-probability is strictly within epsilon bits of the entropy:
|-(1/n) log2 p(seq) - H(p)| < epsilon.  A tuple of sequences is jointly
typical when this holds simultaneously for every non-empty subset of its
coordinates against the corresponding marginal pmf (3 conditions for a
pair, 7 for a triple).  Sequences touching a zero-probability cell are
never typical.

Comparisons use no extra tolerance; supported experiments keep epsilon
well above float rounding (>= 1e-3 bits).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BudgetError
from .measures import entropy
from .seqspace import position_sums, radix_string, repeated_position_sums

DEFAULT_BUDGET = 1 << 24
LISTING_CAP = 10_000


@dataclass(frozen=True)
class TypicalityParams:
    epsilon: float
    n: int

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.n < 1:
            raise ValueError("block length n must be at least 1")


@dataclass(frozen=True)
class TypicalSetSummary:
    cardinality: int
    probability_mass: float
    upper_bound: float
    listing: tuple[str, ...] | None = None

    def as_dict(self) -> dict:
        return {
            "cardinality": self.cardinality,
            "probability_mass": self.probability_mass,
            "upper_bound": self.upper_bound,
        }


def cardinality_bound(h_bits: float, params: TypicalityParams,
                      slack: float = 1.0) -> float:
    """2**(n (H + slack*epsilon)); slack 1 for plain sets, 2 for conditional."""
    return 2.0 ** (params.n * (h_bits + slack * params.epsilon))


def _log2_table(p: np.ndarray) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    out = np.full(arr.shape, -np.inf)
    positive = arr > 0
    out[positive] = np.log2(arr[positive])
    return out


def _window(h: float, params: TypicalityParams) -> tuple[float, float]:
    # log2 p(seq) must fall strictly inside (-n(H+eps), -n(H-eps))
    return -params.n * (h + params.epsilon), -params.n * (h - params.epsilon)


def is_typical(seq, p, params: TypicalityParams) -> bool:
    """Single-sequence membership against pmf p."""
    seq = np.asarray(seq, dtype=np.int64)
    if len(seq) != params.n:
        raise ValueError(f"sequence length {len(seq)} != n={params.n}")
    probs = np.asarray(p, dtype=float)[seq]
    if np.any(probs <= 0):
        return False
    value = float(np.mean(-np.log2(probs)))
    return abs(value - entropy(p)) < params.epsilon


def is_jointly_typical(seqs, joint, params: TypicalityParams) -> bool:
    """Joint membership of aligned sequences against a k-dimensional pmf.

    Every non-empty coordinate subset must pass against its marginal.
    """
    joint = np.asarray(joint, dtype=float)
    k = joint.ndim
    if len(seqs) != k:
        raise ValueError(f"{len(seqs)} sequences for a {k}-dimensional pmf")
    seqs = [np.asarray(s, dtype=np.int64) for s in seqs]
    for s in seqs:
        if len(s) != params.n:
            raise ValueError(f"sequence length {len(s)} != n={params.n}")
    for size in range(1, k + 1):
        for axes in combinations(range(k), size):
            drop = tuple(i for i in range(k) if i not in axes)
            marginal = joint.sum(axis=drop) if drop else joint
            probs = marginal[tuple(seqs[i] for i in axes)]
            if np.any(probs <= 0):
                return False
            value = float(np.mean(-np.log2(probs)))
            if abs(value - entropy(marginal)) >= params.epsilon:
                return False
    return True


def _split_sums(logp: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # meet-in-the-middle split keeps peak memory near the larger half
    m = len(logp)
    a = 0
    while a < n // 2 and m ** (a + 1) <= 4096:
        a += 1
    return repeated_position_sums(logp, a), repeated_position_sums(logp, n - a)


def enumerate_typical(p, params: TypicalityParams, budget: int = DEFAULT_BUDGET,
                      max_listing: int = 0) -> TypicalSetSummary:
    """Exact cardinality and probability mass by full radix enumeration.

    Refuses to enumerate more than `budget` sequences.  With max_listing > 0
    the first sequences (radix order) are returned as radix strings, capped
    at LISTING_CAP.
    """
    arr = np.asarray(p, dtype=float).ravel()
    m = len(arr)
    n = params.n
    total = m**n
    if total > budget:
        raise BudgetError(total, budget, "typical-set enumeration")
    h = entropy(arr)
    lo, hi = _window(h, params)
    head, tail = _split_sums(_log2_table(arr), n)
    tail_count = len(tail)
    want = min(max_listing, LISTING_CAP) if max_listing > 0 else 0
    cardinality = 0
    mass = 0.0
    listing: list[str] = []
    for ia, base in enumerate(head):
        sums = base + tail
        mask = (sums > lo) & (sums < hi)
        hits = int(np.count_nonzero(mask))
        if not hits:
            continue
        cardinality += hits
        mass += float(np.exp2(sums[mask]).sum())
        if len(listing) < want:
            offset = ia * tail_count
            for ib in np.nonzero(mask)[0][: want - len(listing)]:
                listing.append(radix_string(offset + int(ib), m, n))
    return TypicalSetSummary(
        cardinality=cardinality,
        probability_mass=mass,
        upper_bound=cardinality_bound(h, params),
        listing=tuple(listing) if want else None,
    )


def conditional_typical_count(y, joint_zy, params: TypicalityParams,
                              budget: int = DEFAULT_BUDGET) -> int:
    """Exact count of z-sequences jointly typical with a fixed y-sequence.

    `joint_zy` has the candidate variable on rows and the conditioning
    variable on columns.  Counts satisfy the slack-2 cardinality bound
    2**(n (H(Z|Y) + 2 epsilon)).
    """
    joint = np.asarray(joint_zy, dtype=float)
    if joint.ndim != 2:
        raise ValueError(f"joint table must be 2-D, got shape {joint.shape}")
    y = np.asarray(y, dtype=np.int64)
    n = params.n
    if len(y) != n:
        raise ValueError(f"sequence length {len(y)} != n={n}")
    z_size = joint.shape[0]
    total = z_size**n
    if total > budget:
        raise BudgetError(total, budget, "conditional typical-set enumeration")

    pz = joint.sum(axis=1)
    py = joint.sum(axis=0)
    y_probs = py[y]
    if np.any(y_probs <= 0):
        return 0
    y_value = float(np.mean(-np.log2(y_probs)))
    if abs(y_value - entropy(py)) >= params.epsilon:
        return 0

    z_sums = repeated_position_sums(_log2_table(pz), n)
    log_joint = _log2_table(joint)
    pair_sums = position_sums([log_joint[:, yi] for yi in y])
    z_lo, z_hi = _window(entropy(pz), params)
    j_lo, j_hi = _window(entropy(joint), params)
    mask = (z_sums > z_lo) & (z_sums < z_hi) & (pair_sums > j_lo) & (pair_sums < j_hi)
    return int(np.count_nonzero(mask))

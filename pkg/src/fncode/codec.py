"""Random-binning encoders and the unique-typical-output decoder.

Each encoder assigns every source sequence a 64-bit uniform label derived
deterministically from (master_seed, encoder id, sequence radix value); the
bin index is the top k bits of the label.  Truncating the same label keeps
the partitions nested: the bins at depth k+1 refine the bins at depth k,
which makes rate monotonicity an exact, testable property when codes share
a master seed.

The decoder scans every pair of sequences consistent with the received bin
indices and outputs the unique function-output sequence that is jointly
typical with at least one such pair.  Zero or several distinct typical
outputs, or a unique but wrong one, are decoding errors, classified by
which kind of spurious pair produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

import numpy as np

from .errors import BudgetError
from .measures import entropy, output_joint_tables
from .seqspace import (
    position_sums,
    radix_decode,
    radix_encode,
    repeated_position_sums,
)
from .source import (
    FunctionSpec,
    JointSource,
    SequencePair,
    apply_function,
    induced_z_pmf,
    marginals,
)
from .typicality import DEFAULT_BUDGET, TypicalityParams, _log2_table, _window

MAX_BIN_BITS = 62

SUCCESS = "success"
ERROR = "error"
NO_ERROR = "none"
E0_NO_CANDIDATE = "E0_no_candidate"
E1_X_CONFUSION = "E1_x_confusion"
E2_Y_CONFUSION = "E2_y_confusion"
E12_JOINT_CONFUSION = "E12_joint_confusion"

_U64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_X_SALT = 0xD1B54A32D192ED03
_Y_SALT = 0x8CB92BA72F3D8DD7

_POP16 = None


def _mix64(v: int) -> int:
    v &= _U64
    v = ((v ^ (v >> 30)) * _MIX1) & _U64
    v = ((v ^ (v >> 27)) * _MIX2) & _U64
    return v ^ (v >> 31)


def _mix64_array(v: np.ndarray) -> np.ndarray:
    v = v.astype(np.uint64, copy=True)
    v ^= v >> np.uint64(30)
    v *= np.uint64(_MIX1)
    v ^= v >> np.uint64(27)
    v *= np.uint64(_MIX2)
    v ^= v >> np.uint64(31)
    return v


def _encoder_base(master_seed: int, salt: int) -> int:
    return _mix64((master_seed & _U64) ^ salt)


def _label(base: int, radix: int) -> int:
    return _mix64((base + (int(radix) + 1) * _GAMMA) & _U64)


def _labels_upto(base: int, count: int) -> np.ndarray:
    steps = np.arange(1, count + 1, dtype=np.uint64) * np.uint64(_GAMMA)
    return _mix64_array(np.uint64(base) + steps)


def _bin_of(label: int, k: int) -> int:
    return label >> (64 - k) if k else 0


def _popcount(values: np.ndarray) -> np.ndarray:
    global _POP16
    if _POP16 is None:
        _POP16 = np.array([bin(i).count("1") for i in range(1 << 16)],
                          dtype=np.int64)
    v = values.astype(np.int64)
    return (
        _POP16[v & 0xFFFF]
        + _POP16[(v >> 16) & 0xFFFF]
        + _POP16[(v >> 32) & 0xFFFF]
        + _POP16[(v >> 48) & 0xFFFF]
    )


@dataclass(frozen=True)
class BinningCode:
    """A realized encoder pair: block length, bin depths, label seed."""

    n: int
    k1: int
    k2: int
    r1_nominal: float
    r2_nominal: float
    master_seed: int
    x_size: int
    y_size: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def r1_effective(self) -> float:
        return self.k1 / self.n

    @property
    def r2_effective(self) -> float:
        return self.k2 / self.n

    def x_label(self, radix: int) -> int:
        return _label(_encoder_base(self.master_seed, _X_SALT), radix)

    def y_label(self, radix: int) -> int:
        return _label(_encoder_base(self.master_seed, _Y_SALT), radix)


def build_code(n: int, r1: float, r2: float, master_seed: int,
               x_size: int, y_size: int) -> BinningCode:
    """Pick bin depths k = ceil(n*r) and fix the label derivation.

    The small negative nudge before ceil keeps products like 10*0.1 from
    rounding up through float representation error.  Effective rates k/n
    are reported alongside the nominal ones.
    """
    if n < 1:
        raise ValueError("block length n must be at least 1")
    if r1 < 0 or r2 < 0:
        raise ValueError("rates must be nonnegative")
    if x_size < 1 or y_size < 1:
        raise ValueError("alphabet sizes must be at least 1")
    k1 = max(0, int(np.ceil(n * r1 - 1e-9)))
    k2 = max(0, int(np.ceil(n * r2 - 1e-9)))
    if k1 > MAX_BIN_BITS or k2 > MAX_BIN_BITS:
        raise ValueError(
            f"bin depth ({k1}, {k2}) exceeds the {MAX_BIN_BITS}-bit cap"
        )
    return BinningCode(
        n=int(n), k1=k1, k2=k2, r1_nominal=float(r1), r2_nominal=float(r2),
        master_seed=int(master_seed), x_size=int(x_size), y_size=int(y_size),
    )


@dataclass(frozen=True)
class EncodedMessage:
    i0: int
    j0: int


def encode(code: BinningCode, pair: SequencePair) -> EncodedMessage:
    """Bin indices of the two sequences."""
    if pair.n != code.n:
        raise ValueError(f"pair length {pair.n} != code block length {code.n}")
    if np.any(pair.xs >= code.x_size) or np.any(pair.ys >= code.y_size):
        raise ValueError("sequence symbols outside the code's alphabets")
    i0 = _bin_of(code.x_label(radix_encode(pair.xs, code.x_size)), code.k1)
    j0 = _bin_of(code.y_label(radix_encode(pair.ys, code.y_size)), code.k2)
    return EncodedMessage(i0=i0, j0=j0)


class _BinIndex:
    """Sorted-by-bin view of all sequence labels for one encoder."""

    def __init__(self, labels: np.ndarray, k: int):
        bins = (labels >> np.uint64(64 - k)).astype(np.int64) if k else \
            np.zeros(len(labels), dtype=np.int64)
        order = np.argsort(bins, kind="stable")  # radix order within a bin
        self.sorted_bins = bins[order]
        self.order = order

    def members(self, b: int) -> np.ndarray:
        lo = np.searchsorted(self.sorted_bins, b, side="left")
        hi = np.searchsorted(self.sorted_bins, b, side="right")
        return self.order[lo:hi]


def _code_tables(code: BinningCode, budget: int):
    cached = code._cache.get("tables")
    if cached is not None:
        return cached
    x_total = code.x_size**code.n
    y_total = code.y_size**code.n
    if x_total * y_total > budget:
        raise BudgetError(x_total * y_total, budget, "decode pair scan")
    x_index = _BinIndex(
        _labels_upto(_encoder_base(code.master_seed, _X_SALT), x_total), code.k1
    )
    y_index = _BinIndex(
        _labels_upto(_encoder_base(code.master_seed, _Y_SALT), y_total), code.k2
    )
    tables = (x_index, y_index)
    code._cache["tables"] = tables
    return tables


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one decode, judged against the true source realization.

    verdict is "success" iff the decoder output exists, is unique, and
    equals the true function output.  The four event booleans record,
    independently of the priority classification, whether each confusion
    kind occurred: no typical candidate at all (e0); a spurious typical
    output produced with the true y-sequence (e1) or the true x-sequence
    (e2); or with any in-bin pair (e12).  truth_typical records whether
    the true (output, x, y) triple was itself jointly typical.
    """

    verdict: str
    error_class: str
    decoded_z: np.ndarray | None
    candidate_count: int
    e0: bool
    e1: bool
    e2: bool
    e12: bool
    truth_typical: bool


def classify_error(e0: bool, e1: bool, e2: bool, e12: bool) -> str:
    """Priority attribution of an error to a single class (e0 first)."""
    if e0:
        return E0_NO_CANDIDATE
    if e1:
        return E1_X_CONFUSION
    if e2:
        return E2_Y_CONFUSION
    if e12:
        return E12_JOINT_CONFUSION
    raise ValueError("no error event to classify")


_TABLE_SERIAL = count()


class DecoderTables:
    """Typicality machinery shared by every decode against one model.

    For a deterministic output function the triple (z, x, y) with
    z = F(x, y) componentwise has per-position probability equal to the
    pair probability, so the triple condition coincides with the pair
    condition and four per-pair statistics suffice: pair, output,
    (output, x) and (output, y) log-probabilities.
    """

    def __init__(self, src: JointSource, fspec: FunctionSpec,
                 params: TypicalityParams):
        self.serial = next(_TABLE_SERIAL)  # scan-cache key, never reused
        if fspec.table.shape != src.pmf.shape:
            raise ValueError(
                f"function table shape {fspec.table.shape} does not match "
                f"pmf shape {src.pmf.shape}"
            )
        n = params.n
        if src.x_size**n >= 1 << 62 or src.y_size**n >= 1 << 62 \
                or fspec.z_size**n >= 1 << 62:
            raise ValueError("sequence space too large for radix indexing")
        self.params = params
        self.x_size = src.x_size
        self.y_size = src.y_size
        self.z_size = fspec.z_size
        self.table = fspec.table
        pmf = src.pmf
        px, py = marginals(src)
        pz = induced_z_pmf(src, fspec)
        zx, zy = output_joint_tables(src, fspec)
        self.pz, self.zx, self.zy = pz, zx, zy

        xg, yg = np.meshgrid(np.arange(src.x_size), np.arange(src.y_size),
                             indexing="ij")
        self.w = np.stack([
            _log2_table(pmf),
            _log2_table(pz)[fspec.table],
            _log2_table(zx)[fspec.table, xg],
            _log2_table(zy)[fspec.table, yg],
        ])
        self.windows = [
            _window(entropy(pmf), params),
            _window(entropy(pz), params),
            _window(entropy(zx), params),
            _window(entropy(zy), params),
        ]
        self.typx = self._typical_mask(px, n, params)
        self.typy = self._typical_mask(py, n, params)
        self.binary_fast = (
            src.x_size == 2 and src.y_size == 2 and bool(np.all(pmf > 0))
        )

    @staticmethod
    def _typical_mask(p: np.ndarray, n: int,
                      params: TypicalityParams) -> np.ndarray:
        sums = repeated_position_sums(_log2_table(p), n)
        lo, hi = _window(entropy(p), params)
        return (sums > lo) & (sums < hi)

    def pair_stats(self, rx: np.ndarray, ry: np.ndarray) -> np.ndarray:
        """Per-pair log-probability sums, shape (4, len(rx), len(ry))."""
        n = self.params.n
        if self.binary_fast:
            cx = _popcount(rx)
            cy = _popcount(ry)
            c11 = _popcount(np.bitwise_and.outer(rx, ry))
            return np.stack([self._binary_stat(k, cx, cy, c11)
                             for k in range(4)])
        xd = self._digits(rx, self.x_size)
        yd = self._digits(ry, self.y_size)
        out = np.zeros((4, len(rx), len(ry)))
        for i in range(n):
            out += self.w[:, xd[:, i][:, None], yd[None, :, i]]
        return out

    def _binary_stat(self, k: int, cx: np.ndarray, cy: np.ndarray,
                     c11: np.ndarray) -> np.ndarray:
        # counts (ones in x, ones in y, aligned ones) determine the joint
        # composition when both alphabets are binary and the pmf is positive
        w = self.w[k]
        base = self.params.n * w[0, 0]
        dx = w[1, 0] - w[0, 0]
        dy = w[0, 1] - w[0, 0]
        dxy = w[1, 1] - w[1, 0] - w[0, 1] + w[0, 0]
        return base + dx * cx[:, None] + dy * cy[None, :] + dxy * c11

    def _digits(self, radices: np.ndarray, base: int) -> np.ndarray:
        n = self.params.n
        powers = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
        return (radices[:, None] // powers) % base

    def z_radices(self, rx: np.ndarray, ry: np.ndarray) -> np.ndarray:
        """Radix values of the componentwise function output per pair."""
        n = self.params.n
        out = np.zeros(len(rx), dtype=np.int64)
        for i in range(n):
            place_x = self.x_size ** (n - 1 - i)
            place_y = self.y_size ** (n - 1 - i)
            xd = (rx // place_x) % self.x_size
            yd = (ry // place_y) % self.y_size
            out = out * self.z_size + self.table[xd, yd]
        return out


def decoder_tables(src: JointSource, fspec: FunctionSpec,
                   params: TypicalityParams) -> DecoderTables:
    """Precompute decode machinery once; pass to decode in hot loops."""
    return DecoderTables(src, fspec, params)


def _passing_pairs(tables: DecoderTables, rx: np.ndarray, ry: np.ndarray):
    """Pairs whose (output, x, y) triple is jointly typical."""
    empty = np.empty(0, dtype=np.int64)
    if len(rx) == 0 or len(ry) == 0:
        return empty, empty
    if tables.binary_fast:
        cx = _popcount(rx)
        cy = _popcount(ry)
        c11 = _popcount(np.bitwise_and.outer(rx, ry))
        mask = np.ones((len(rx), len(ry)), dtype=bool)
        for k, (lo, hi) in enumerate(tables.windows):
            stat = tables._binary_stat(k, cx, cy, c11)
            mask &= (stat > lo) & (stat < hi)
            if not mask.any():
                return empty, empty
    else:
        stats = tables.pair_stats(rx, ry)
        mask = np.ones(stats.shape[1:], dtype=bool)
        for k, (lo, hi) in enumerate(tables.windows):
            mask &= (stats[k] > lo) & (stats[k] < hi)
    ia, ib = np.nonzero(mask)
    return rx[ia], ry[ib]


def _full_z_candidates(tables: DecoderTables, rx: np.ndarray, ry: np.ndarray,
                       src: JointSource, fspec: FunctionSpec,
                       budget: int) -> np.ndarray:
    """Candidate outputs with the output sequence ranging over everything.

    Checks all seven subset conditions per (z, x, y) triple.  Exponentially
    heavier than the default scan and equivalent to it for deterministic
    functions (any triple with z != F(x, y) somewhere hits a zero cell of
    the triple pmf); kept for verifying that equivalence.
    """
    params = tables.params
    n = params.n
    z_total = tables.z_size**n
    if len(rx) * len(ry) * z_total > budget:
        raise BudgetError(len(rx) * len(ry) * z_total, budget, "full-output scan")
    triple = np.zeros((tables.z_size, src.x_size, src.y_size))
    for a in range(src.x_size):
        for b in range(src.y_size):
            triple[fspec.table[a, b], a, b] = src.pmf[a, b]
    lg_triple = _log2_table(triple)
    lg_zx = _log2_table(tables.zx)
    lg_zy = _log2_table(tables.zy)
    z_sums = repeated_position_sums(_log2_table(tables.pz), n)
    z_lo, z_hi = _window(entropy(tables.pz), params)
    z_ok = (z_sums > z_lo) & (z_sums < z_hi)
    zx_win = _window(entropy(tables.zx), params)
    zy_win = _window(entropy(tables.zy), params)
    tr_win = _window(entropy(triple), params)
    xy_lo, xy_hi = tables.windows[0]

    found = set()
    xd_all = tables._digits(rx, tables.x_size)
    yd_all = tables._digits(ry, tables.y_size)
    pair_xy = tables.pair_stats(rx, ry)[0]
    for a in range(len(rx)):
        for b in range(len(ry)):
            if not (xy_lo < pair_xy[a, b] < xy_hi):
                continue
            xd, yd = xd_all[a], yd_all[b]
            s_zx = position_sums([lg_zx[:, xd[i]] for i in range(n)])
            s_zy = position_sums([lg_zy[:, yd[i]] for i in range(n)])
            s_tr = position_sums([lg_triple[:, xd[i], yd[i]] for i in range(n)])
            mask = (
                z_ok
                & (s_zx > zx_win[0]) & (s_zx < zx_win[1])
                & (s_zy > zy_win[0]) & (s_zy < zy_win[1])
                & (s_tr > tr_win[0]) & (s_tr < tr_win[1])
            )
            found.update(np.nonzero(mask)[0].tolist())
    return np.array(sorted(found), dtype=np.int64)


def decode(code: BinningCode, msg: EncodedMessage, src: JointSource,
           fspec: FunctionSpec, params: TypicalityParams, *,
           true_pair: SequencePair, budget: int = DEFAULT_BUDGET,
           full_z: bool = False,
           tables: DecoderTables | None = None) -> DecodeOutcome:
    """Scan the received bins and judge the decoder output.

    `true_pair` is the realization that produced `msg`; it is required to
    evaluate the outcome (success means the unique candidate equals the
    true output) and to attribute confusion events.  With full_z=True the
    candidate output ranges over the whole output sequence space instead
    of only componentwise function outputs of in-bin pairs.
    """
    if params.n != code.n:
        raise ValueError(f"params block length {params.n} != code length {code.n}")
    if true_pair.n != code.n:
        raise ValueError(f"pair length {true_pair.n} != code length {code.n}")
    if not (0 <= msg.i0 < (1 << code.k1)) or not (0 <= msg.j0 < (1 << code.k2)):
        raise ValueError("message bin indices out of range")
    if encode(code, true_pair) != msg:
        raise ValueError("message does not encode the supplied true pair")
    if tables is None:
        tables = DecoderTables(src, fspec, params)
    if (tables.x_size, tables.y_size) != (code.x_size, code.y_size):
        raise ValueError("decoder tables built for different alphabets")

    x_index, y_index = _code_tables(code, budget)

    def in_bin_typical():
        xs_cand = x_index.members(msg.i0)
        ys_cand = y_index.members(msg.j0)
        return xs_cand[tables.typx[xs_cand]], ys_cand[tables.typy[ys_cand]]

    candidates = None
    if full_z:
        xs_ok, ys_ok = in_bin_typical()
        rx_pass, ry_pass = _passing_pairs(tables, xs_ok, ys_ok)
        z_pass = tables.z_radices(rx_pass, ry_pass)
        candidates = _full_z_candidates(tables, xs_ok, ys_ok, src, fspec, budget)
    else:
        # the scan depends only on (code, message, model), not the trial;
        # reuse it across trials while the message space stays small
        key = ("scan", tables.serial, msg.i0, msg.j0)
        cacheable = code.k1 + code.k2 <= 12
        scan = code._cache.get(key) if cacheable else None
        if scan is None:
            xs_ok, ys_ok = in_bin_typical()
            rx_pass, ry_pass = _passing_pairs(tables, xs_ok, ys_ok)
            z_pass = tables.z_radices(rx_pass, ry_pass)
            scan = (rx_pass, ry_pass, z_pass)
            if cacheable and len(rx_pass) <= 65536:
                code._cache[key] = scan
        rx_pass, ry_pass, z_pass = scan

    true_z = apply_function(fspec, true_pair)
    true_z_radix = radix_encode(true_z, tables.z_size)
    rx_true = radix_encode(true_pair.xs, code.x_size)
    ry_true = radix_encode(true_pair.ys, code.y_size)

    spurious = z_pass != true_z_radix
    e1 = bool(np.any(spurious & (ry_pass == ry_true)))
    e2 = bool(np.any(spurious & (rx_pass == rx_true)))
    e12 = bool(np.any(spurious))
    truth_typical = bool(np.any((rx_pass == rx_true) & (ry_pass == ry_true)))

    if candidates is None:
        candidates = np.unique(z_pass)
    e0 = len(candidates) == 0

    decoded_z = None
    if len(candidates) == 1:
        decoded_z = radix_decode(int(candidates[0]), tables.z_size, code.n)
    if decoded_z is not None and int(candidates[0]) == true_z_radix:
        return DecodeOutcome(
            verdict=SUCCESS, error_class=NO_ERROR, decoded_z=decoded_z,
            candidate_count=1, e0=False, e1=e1, e2=e2, e12=e12,
            truth_typical=truth_typical,
        )
    return DecodeOutcome(
        verdict=ERROR,
        error_class=classify_error(e0, e1, e2, e12),
        decoded_z=decoded_z,
        candidate_count=int(len(candidates)),
        e0=e0, e1=e1, e2=e2, e12=e12,
        truth_typical=truth_typical,
    )

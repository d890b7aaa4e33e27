"""Model of a pair of correlated finite-alphabet sources and a target function.

Symbols are dense integer indices 0..k-1 everywhere; alphabet names from the
input document are kept as display metadata only.  All objects are immutable
after construction and safe to share between threads.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DocumentError

PMF_TOLERANCE = 1e-9


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class JointSource:
    """Joint pmf of a pair of finite-alphabet random variables.

    `pmf[x, y]` is the probability of the pair (x, y); rows index the first
    source.  Entries must be nonnegative and sum to 1 within PMF_TOLERANCE.
    A pmf that fails this is rejected, never renormalized.
    """

    pmf: np.ndarray
    x_names: tuple[str, ...] | None = None
    y_names: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = _frozen_array(self.pmf, float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DocumentError(f"pmf must be a 2-D table, got shape {arr.shape}")
        if np.any(arr < 0):
            raise DocumentError("pmf has negative entries")
        total = float(arr.sum())
        if abs(total - 1.0) > PMF_TOLERANCE:
            raise DocumentError(f"pmf not normalized: sum is {total!r}")
        object.__setattr__(self, "pmf", arr)

    @property
    def x_size(self) -> int:
        return self.pmf.shape[0]

    @property
    def y_size(self) -> int:
        return self.pmf.shape[1]


@dataclass(frozen=True)
class FunctionSpec:
    """Total map from symbol pairs to output symbols.

    `table[x, y]` is the output index in [0, z_size).  Output symbols that
    never appear in the table are allowed; `unused_symbols` reports them.
    """

    table: np.ndarray
    z_size: int
    z_names: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = _frozen_array(self.table, np.int64)
        if arr.ndim != 2:
            raise DocumentError(f"function table must be 2-D, got shape {arr.shape}")
        if self.z_size < 1:
            raise DocumentError("output alphabet must have at least one symbol")
        if np.any(arr < 0) or np.any(arr >= self.z_size):
            raise DocumentError(
                f"function table entries must lie in [0, {self.z_size})"
            )
        object.__setattr__(self, "table", arr)

    def unused_symbols(self) -> tuple[int, ...]:
        used = np.unique(self.table)
        return tuple(z for z in range(self.z_size) if z not in used)


@dataclass(frozen=True)
class SequencePair:
    """Aligned length-n realizations of the two sources."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = _frozen_array(self.xs, np.int64)
        ys = _frozen_array(self.ys, np.int64)
        if xs.ndim != 1 or ys.ndim != 1 or len(xs) != len(ys):
            raise ValueError("xs and ys must be 1-D and the same length")
        if np.any(xs < 0) or np.any(ys < 0):
            # negative values would alias other symbols through wraparound
            raise ValueError("symbol indices must be nonnegative")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return len(self.xs)


def _require(condition: bool, message: str):
    if not condition:
        raise DocumentError(message)


def load_source(document: dict) -> tuple[JointSource, FunctionSpec]:
    """Validate a parsed source/function document.

    Expected shape:
        {"x_alphabet": [...], "y_alphabet": [...], "pmf": [[row per x]],
         "function": {"z_alphabet": [...], "table": [[entry per (x, y)]]}}

    Table entries may be output indices or output symbol names; names are
    resolved against z_alphabet.  Unused output symbols are accepted with a
    warning.
    """
    _require(isinstance(document, dict), "document must be a JSON object")
    for key in ("x_alphabet", "y_alphabet", "pmf", "function"):
        _require(key in document, f"document is missing {key!r}")
    x_names = document["x_alphabet"]
    y_names = document["y_alphabet"]
    _require(
        isinstance(x_names, list) and len(x_names) >= 1,
        "x_alphabet must be a non-empty list",
    )
    _require(
        isinstance(y_names, list) and len(y_names) >= 1,
        "y_alphabet must be a non-empty list",
    )
    rows = document["pmf"]
    _require(isinstance(rows, list) and len(rows) == len(x_names),
             "pmf must have one row per x symbol")
    for row in rows:
        _require(isinstance(row, list) and len(row) == len(y_names),
                 "pmf rows must all have one entry per y symbol")
    src = JointSource(
        pmf=rows,
        x_names=tuple(str(s) for s in x_names),
        y_names=tuple(str(s) for s in y_names),
    )

    fdoc = document["function"]
    _require(isinstance(fdoc, dict), "function must be an object")
    for key in ("z_alphabet", "table"):
        _require(key in fdoc, f"function is missing {key!r}")
    z_names = fdoc["z_alphabet"]
    _require(isinstance(z_names, list) and len(z_names) >= 1,
             "z_alphabet must be a non-empty list")
    table = fdoc["table"]
    _require(isinstance(table, list) and len(table) == len(x_names),
             "function table must have one row per x symbol")
    name_to_index = {str(name): i for i, name in enumerate(z_names)}
    resolved = []
    for row in table:
        _require(isinstance(row, list) and len(row) == len(y_names),
                 "function table rows must all have one entry per y symbol")
        out_row = []
        for entry in row:
            if isinstance(entry, bool):
                raise DocumentError(f"function table entry {entry!r} is not a symbol")
            if isinstance(entry, int):
                out_row.append(entry)
            elif isinstance(entry, str):
                _require(entry in name_to_index,
                         f"function table entry {entry!r} is not in z_alphabet")
                out_row.append(name_to_index[entry])
            else:
                raise DocumentError(f"function table entry {entry!r} is not a symbol")
        resolved.append(out_row)
    fspec = FunctionSpec(
        table=resolved,
        z_size=len(z_names),
        z_names=tuple(str(s) for s in z_names),
    )
    unused = fspec.unused_symbols()
    if unused:
        names = ", ".join(str(fspec.z_names[z]) for z in unused)
        warnings.warn(f"output symbols never produced by the function: {names}")
    return src, fspec


def load_source_path(path) -> tuple[JointSource, FunctionSpec]:
    """load_source on a JSON file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read source document {path}: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"source document {path} is not valid JSON: {exc}") from exc
    return load_source(document)


def marginals(src: JointSource) -> tuple[np.ndarray, np.ndarray]:
    """Per-source marginal pmfs (px, py)."""
    return src.pmf.sum(axis=1), src.pmf.sum(axis=0)


def induced_z_pmf(src: JointSource, fspec: FunctionSpec) -> np.ndarray:
    """Distribution of the function output under the joint pmf."""
    if fspec.table.shape != src.pmf.shape:
        raise DocumentError(
            f"function table shape {fspec.table.shape} does not match "
            f"pmf shape {src.pmf.shape}"
        )
    pz = np.zeros(fspec.z_size)
    np.add.at(pz, fspec.table.ravel(), src.pmf.ravel())
    return pz


def sample(src: JointSource, n: int, rng: np.random.Generator) -> SequencePair:
    """Draw n i.i.d. pairs by inverse CDF over the flattened joint table.

    Deterministic given the generator state; callers own the stream.
    """
    if n < 1:
        raise ValueError("block length n must be at least 1")
    cdf = np.cumsum(src.pmf.ravel())
    cdf[-1] = 1.0  # close the top against rounding in the running sum
    flat = np.searchsorted(cdf, rng.random(n), side="right")
    xs, ys = np.divmod(flat, src.y_size)
    return SequencePair(xs=xs, ys=ys)


def apply_function(fspec: FunctionSpec, pair: SequencePair) -> np.ndarray:
    """Componentwise function output for a sequence pair."""
    return fspec.table[pair.xs, pair.ys]

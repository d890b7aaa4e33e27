"""Monte Carlo experiment driver: cells, sweeps, persistence, diagnostics.

Reproducibility contract: the stream for trial t at block length n is
derived from (master_seed, n, t) through numpy's SeedSequence, so it does
not depend on the rate grid or on scheduling.  Cells that share a master
seed therefore replay identical source realizations, which turns rate
monotonicity of the nested binning into an exact per-trial property, and
sweeps produce byte-identical outputs at any worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .codec import (
    E0_NO_CANDIDATE,
    E1_X_CONFUSION,
    E2_Y_CONFUSION,
    E12_JOINT_CONFUSION,
    ERROR,
    build_code,
    decode,
    decoder_tables,
    encode,
)
from .errors import BudgetError, DocumentError
from .measures import EntropyReport, full_report
from .region import FUNCTION, SLEPIAN_WOLF, contains, corner_points, region_of
from .seqspace import digit_matrix
from .source import (
    FunctionSpec,
    JointSource,
    SequencePair,
    load_source,
    load_source_path,
    sample,
)
from .typicality import DEFAULT_BUDGET, TypicalityParams

CSV_COLUMNS = (
    "n", "r1_nominal", "r2_nominal", "k1", "k2", "r1_eff", "r2_eff", "eps",
    "trials", "errors", "pe_hat", "ci_lo", "ci_hi", "e0", "e1", "e2", "e12",
    "in_region_eff", "in_sw_region_eff", "seed",
)

WILSON_Z = 1.959963984540054  # two-sided 95%

DEFAULT_SEED = 20260811


def wilson_interval(errors: int, trials: int) -> tuple[float, float]:
    """Wilson score interval; stays sane at rates near 0 and 1."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 <= errors <= trials:
        raise ValueError("errors must be between 0 and trials")
    p = errors / trials
    z2 = WILSON_Z * WILSON_Z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = WILSON_Z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    lo = max(0.0, center - half)
    hi = min(1.0, center + half)
    # the interval contains the point estimate even at the 0/1 rounding edges
    return min(lo, p), max(hi, p)


def trial_rng(master_seed: int, n: int, trial: int) -> np.random.Generator:
    """Fixed splitting function for per-trial substreams (rate-independent)."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((master_seed, n, trial)))
    )


@dataclass(frozen=True)
class ExperimentPlan:
    """A sweep: one source document, a grid of (n, r1, r2) cells."""

    source: str
    n_values: tuple[int, ...] = (2, 4, 6, 8, 10)
    r1_values: tuple[float, ...] = (0.5, 1.0)
    r2_values: tuple[float, ...] = (0.5, 1.0)
    epsilon: float = 0.15
    trials: int = 2000
    master_seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    full_z: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise DocumentError("trials must be at least 1")
        if self.epsilon <= 0:
            raise DocumentError("epsilon must be positive")
        if not self.n_values or not self.r1_values or not self.r2_values:
            raise DocumentError("plan grid must be non-empty")
        if any(n < 1 for n in self.n_values):
            raise DocumentError("all block lengths must be at least 1")
        if any(r < 0 for r in self.r1_values + self.r2_values):
            raise DocumentError("all rates must be nonnegative")

    def cells(self) -> list[tuple[int, float, float]]:
        return [
            (n, r1, r2)
            for n in self.n_values
            for r1 in self.r1_values
            for r2 in self.r2_values
        ]

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "n": list(self.n_values),
            "r1": list(self.r1_values),
            "r2": list(self.r2_values),
            "epsilon": self.epsilon,
            "trials": self.trials,
            "seed": self.master_seed,
            "budget": self.budget,
            "full_z": self.full_z,
        }


def load_plan(path) -> ExperimentPlan:
    """Read a plan JSON file; the source path resolves against the plan dir."""
    path = Path(path)
    try:
        document = json.loads(path.read_text())
    except OSError as exc:
        raise DocumentError(f"cannot read plan {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"plan {path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "source" not in document:
        raise DocumentError("plan must be an object with a 'source' entry")
    source = Path(document["source"])
    if not source.is_absolute():
        source = path.parent / source
    kwargs = {}
    for plan_key, json_key in [
        ("n_values", "n"), ("r1_values", "r1"), ("r2_values", "r2"),
    ]:
        if json_key in document:
            values = document[json_key]
            if not isinstance(values, list):
                raise DocumentError(f"plan entry {json_key!r} must be a list")
            kwargs[plan_key] = tuple(values)
    for plan_key, json_key in [
        ("epsilon", "epsilon"), ("trials", "trials"), ("master_seed", "seed"),
        ("budget", "budget"), ("full_z", "full_z"), ("out", "out"),
    ]:
        if json_key in document:
            kwargs[plan_key] = document[json_key]
    try:
        return ExperimentPlan(source=str(source), **kwargs)
    except TypeError as exc:
        raise DocumentError(f"bad plan entry: {exc}") from exc


@dataclass(frozen=True)
class CellReport:
    """Aggregates for one (n, r1, r2) cell.

    e0..e12 are priority-attributed error counts (each error counted once).
    event_nibbles keeps the raw per-trial event booleans, one hex digit per
    trial with bits (e0, e1, e2, e12); truth_typical_bits marks the trials
    whose true triple was jointly typical.  A trial succeeded iff its
    nibble is 0.
    """

    n: int
    r1_nominal: float
    r2_nominal: float
    k1: int
    k2: int
    r1_eff: float
    r2_eff: float
    eps: float
    trials: int
    errors: int
    pe_hat: float
    ci_lo: float
    ci_hi: float
    e0: int
    e1: int
    e2: int
    e12: int
    in_region_eff: bool
    in_sw_region_eff: bool
    seed: int
    event_nibbles: str = field(repr=False)
    truth_typical_bits: str = field(repr=False)
    raw_e0: int
    raw_e1: int
    raw_e2: int
    raw_e12: int

    def csv_row(self) -> list[str]:
        values = {
            "n": self.n, "r1_nominal": self.r1_nominal,
            "r2_nominal": self.r2_nominal, "k1": self.k1, "k2": self.k2,
            "r1_eff": self.r1_eff, "r2_eff": self.r2_eff, "eps": self.eps,
            "trials": self.trials, "errors": self.errors, "pe_hat": self.pe_hat,
            "ci_lo": self.ci_lo, "ci_hi": self.ci_hi, "e0": self.e0,
            "e1": self.e1, "e2": self.e2, "e12": self.e12,
            "in_region_eff": int(self.in_region_eff),
            "in_sw_region_eff": int(self.in_sw_region_eff), "seed": self.seed,
        }
        return [repr(float(values[c])) if isinstance(values[c], float)
                else str(values[c]) for c in CSV_COLUMNS]

    def json_dict(self) -> dict:
        out = {c: getattr(self, c) for c in CSV_COLUMNS
               if c not in ("in_region_eff", "in_sw_region_eff")}
        out["in_region_eff"] = bool(self.in_region_eff)
        out["in_sw_region_eff"] = bool(self.in_sw_region_eff)
        out["event_nibbles"] = self.event_nibbles
        out["truth_typical_bits"] = self.truth_typical_bits
        out["raw_event_counts"] = {
            "e0": self.raw_e0, "e1": self.raw_e1,
            "e2": self.raw_e2, "e12": self.raw_e12,
        }
        return out


def run_cell(src: JointSource, fspec: FunctionSpec, *, n: int, r1: float,
             r2: float, epsilon: float, trials: int, master_seed: int,
             budget: int = DEFAULT_BUDGET, full_z: bool = False,
             tables=None, report: EntropyReport | None = None) -> CellReport:
    """Simulate one cell: build the code, run seeded trials, aggregate."""
    n, r1, r2 = int(n), float(r1), float(r2)
    epsilon, trials, master_seed = float(epsilon), int(trials), int(master_seed)
    params = TypicalityParams(epsilon=epsilon, n=n)
    code = build_code(n, r1, r2, master_seed, src.x_size, src.y_size)
    if tables is None:
        tables = decoder_tables(src, fspec, params)
    if report is None:
        report = full_report(src, fspec)

    errors = 0
    class_counts = {E0_NO_CANDIDATE: 0, E1_X_CONFUSION: 0,
                    E2_Y_CONFUSION: 0, E12_JOINT_CONFUSION: 0}
    raw = [0, 0, 0, 0]
    nibbles = []
    tt_bits = []
    for t in range(trials):
        pair = sample(src, n, trial_rng(master_seed, n, t))
        msg = encode(code, pair)
        out = decode(code, msg, src, fspec, params, true_pair=pair,
                     budget=budget, full_z=full_z, tables=tables)
        if out.verdict == ERROR:
            errors += 1
            class_counts[out.error_class] += 1
        flags = (out.e0, out.e1, out.e2, out.e12)
        for i, f in enumerate(flags):
            raw[i] += int(f)
        nibbles.append(format(sum(int(f) << i for i, f in enumerate(flags)), "x"))
        tt_bits.append("1" if out.truth_typical else "0")

    pe_hat = errors / trials
    ci_lo, ci_hi = wilson_interval(errors, trials)
    fn_region = region_of(report, FUNCTION)
    sw_region = region_of(report, SLEPIAN_WOLF)
    return CellReport(
        n=n, r1_nominal=r1, r2_nominal=r2, k1=code.k1, k2=code.k2,
        r1_eff=code.r1_effective, r2_eff=code.r2_effective, eps=epsilon,
        trials=trials, errors=errors, pe_hat=pe_hat, ci_lo=ci_lo, ci_hi=ci_hi,
        e0=class_counts[E0_NO_CANDIDATE], e1=class_counts[E1_X_CONFUSION],
        e2=class_counts[E2_Y_CONFUSION], e12=class_counts[E12_JOINT_CONFUSION],
        in_region_eff=contains(fn_region, code.r1_effective, code.r2_effective),
        in_sw_region_eff=contains(sw_region, code.r1_effective, code.r2_effective),
        seed=master_seed,
        event_nibbles="".join(nibbles),
        truth_typical_bits="".join(tt_bits),
        raw_e0=raw[0], raw_e1=raw[1], raw_e2=raw[2], raw_e12=raw[3],
    )


def _sweep_cell(task):
    src, fspec, plan, cell = task
    n, r1, r2 = cell
    try:
        return cell, run_cell(
            src, fspec, n=n, r1=r1, r2=r2, epsilon=plan.epsilon,
            trials=plan.trials, master_seed=plan.master_seed,
            budget=plan.budget, full_z=plan.full_z,
        ), None
    except (BudgetError, ValueError) as exc:
        return cell, None, f"cell (n={n}, r1={r1}, r2={r2}): {exc}"


@dataclass(frozen=True)
class SweepResult:
    plan: ExperimentPlan
    rows: tuple[CellReport, ...]
    failures: tuple[str, ...]

    def csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        lines.extend(",".join(row.csv_row()) for row in self.rows)
        return "\n".join(lines) + "\n"

    def json_text(self) -> str:
        payload = {
            "plan": self.plan.as_dict(),
            "rows": [row.json_dict() for row in self.rows],
            "failures": list(self.failures),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write(self, csv_path, json_path) -> None:
        Path(csv_path).write_text(self.csv_text())
        Path(json_path).write_text(self.json_text())


def run_sweep(plan: ExperimentPlan, workers: int = 1,
              src: JointSource | None = None,
              fspec: FunctionSpec | None = None) -> SweepResult:
    """Evaluate every cell; rows come back in (n, r1, r2) order.

    Cell failures are collected and reported; the sweep only raises if no
    cell succeeds.  Results are independent of the worker count.
    """
    if src is None or fspec is None:
        src, fspec = load_source_path(plan.source)
    cells = plan.cells()
    tasks = [(src, fspec, plan, cell) for cell in cells]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, tasks))
    else:
        results = [_sweep_cell(task) for task in tasks]
    rows = [row for _, row, _ in results if row is not None]
    failures = [err for _, _, err in results if err is not None]
    if not rows:
        summary = f"sweep failed in every cell; first failure: {failures[0]}"
        if "budget" in failures[0]:
            raise BudgetError(0, plan.budget, summary)
        raise DocumentError(summary)
    rows.sort(key=lambda r: (r.n, r.r1_nominal, r.r2_nominal))
    return SweepResult(plan=plan, rows=tuple(rows), failures=tuple(failures))


@dataclass(frozen=True)
class FanoDiagnostic:
    """Converse-style slack: delta = pe*log2(|Z|) + 1/n.

    The 1/n term keeps the full inequality rather than its asymptotic
    simplification, so delta_n >= 1/n even at zero observed error.  The
    implied lower bounds never exceed the exact thresholds.
    """

    delta_n: float
    r1_lower: float
    r2_lower: float
    rsum_lower: float

    def as_dict(self) -> dict:
        return {
            "delta_n": self.delta_n,
            "r1_lower": self.r1_lower,
            "r2_lower": self.r2_lower,
            "rsum_lower": self.rsum_lower,
            "delta_convention": "pe_hat*log2(z_size) + 1/n",
        }


def fano(pe_hat: float, n: int, z_size: int,
         report: EntropyReport) -> FanoDiagnostic:
    if not 0 <= pe_hat <= 1:
        raise ValueError("pe_hat must be in [0, 1]")
    if n < 1 or z_size < 1:
        raise ValueError("n and z_size must be at least 1")
    delta = pe_hat * math.log2(z_size) + 1.0 / n
    return FanoDiagnostic(
        delta_n=delta,
        r1_lower=report.h_z_given_y - delta,
        r2_lower=report.h_z_given_x - delta,
        rsum_lower=report.h_z - delta,
    )


def report_regions(document: dict) -> dict:
    """Entropies, both regions and their corners for a source document."""
    src, fspec = load_source(document)
    report = full_report(src, fspec)
    fn_region = region_of(report, FUNCTION)
    sw_region = region_of(report, SLEPIAN_WOLF)
    return {
        "entropy": report.as_dict(),
        "function_region": fn_region.as_dict(),
        "slepian_wolf_region": sw_region.as_dict(),
        "function_corners": [list(c) for c in corner_points(fn_region)],
        "slepian_wolf_corners": [list(c) for c in corner_points(sw_region)],
    }


def exact_error_probability(code, src: JointSource, fspec: FunctionSpec,
                            params: TypicalityParams,
                            budget: int = DEFAULT_BUDGET,
                            full_z: bool = False, tables=None) -> float:
    """P(decode error) by weighted enumeration of every source outcome.

    Exact for a fixed code; usable only while (|X||Y|)**n stays within
    budget.  Independent check for Monte Carlo estimates.
    """
    n = params.n
    total = (src.x_size * src.y_size) ** n
    if total > budget:
        raise BudgetError(total, budget, "outcome enumeration")
    if tables is None:
        tables = decoder_tables(src, fspec, params)
    x_digits = digit_matrix(src.x_size, n)
    y_digits = digit_matrix(src.y_size, n)
    err_probs = []
    for xs in x_digits:
        for ys in y_digits:
            prob = float(np.prod(src.pmf[xs, ys]))
            if prob == 0.0:
                continue
            pair = SequencePair(xs=xs, ys=ys)
            msg = encode(code, pair)
            out = decode(code, msg, src, fspec, params, true_pair=pair,
                         budget=budget, full_z=full_z, tables=tables)
            if out.verdict == ERROR:
                err_probs.append(prob)
    # outcome probabilities themselves carry rounding; never exceed 1
    return min(1.0, math.fsum(err_probs))

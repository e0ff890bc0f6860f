"""Monte Carlo comparison of the GMI and Pearson tests on sparse 11x11-style tables.

Row and column marginals are ``{1-p, p/(I-1), ..., p/(I-1)}``.  Under H0
the joint table is their outer product; under Ha the mass of the
lower-right (I-1)x(I-1) block is moved onto its diagonal, which keeps
both marginals and creates dependence.
"""

from __future__ import annotations

import enum
import io
import json
import logging
import math
import os
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVariance, DomainError, InsufficientSupport
from .gmi import two_sided_p_value, z_statistics
from .pearson import pearson_statistic
from .results import ALL_METHODS, Method
from .special import chisq_sf
from .tables import ProbTable, as_counts, sample_multinomial

log = logging.getLogger(__name__)

DEFAULT_P_VALUES = (0.5, 0.4, 0.3, 0.2, 0.1)
DEFAULT_SIZES = (30, 100, 500, 1000, 1500, 2000)
TABLE1_METHODS = (Method.ZAB, Method.PEARSON_OBSERVED, Method.PEARSON_THEORETICAL)

REJECT, ACCEPT, ABORTED = 1, 0, -1


class Hypothesis(str, enum.Enum):
    H0 = "h0"
    HA = "ha"


def _marginal(size: int, p: float) -> np.ndarray:
    return np.array([1.0 - p] + [p / (size - 1)] * (size - 1))


def _check_p(p):
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")


def build_h0_distribution(I: int, J: int, p: float) -> ProbTable:
    """Product of the marginals {1-p, p/(K-1), ...} for K = I and K = J."""
    if I < 2 or J < 2:
        raise DomainError(f"need I, J >= 2, got {I}x{J}")
    _check_p(p)
    return ProbTable(np.outer(_marginal(I, p), _marginal(J, p)))


def build_ha_distribution(I: int, p: float) -> ProbTable:
    """H0 table with the lower-right block's mass p**2 spread over its diagonal."""
    if I < 2:
        raise DomainError(f"need I >= 2, got {I}")
    _check_p(p)
    table = np.outer(_marginal(I, p), _marginal(I, p))
    block = np.zeros((I - 1, I - 1))
    np.fill_diagonal(block, p * p / (I - 1))
    table[1:, 1:] = block
    return ProbTable(table)


@dataclass(frozen=True)
class ScenarioSpec:
    """One row family of the simulation table.

    ``p`` is the tail mass of each marginal; reports label rows by ``1 - p``.
    """

    dims: tuple[int, int] = (11, 11)
    p: float = 0.5
    lam: float = 2.0
    alpha: float = 0.01
    sample_sizes: tuple[int, ...] = DEFAULT_SIZES
    replicates: int = 10_000
    base_seed: int = 0
    hypothesis: Hypothesis = Hypothesis.H0

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "hypothesis", Hypothesis(self.hypothesis))
        I, J = self.dims
        if I < 2 or J < 2:
            raise DomainError(f"need I, J >= 2, got {I}x{J}")
        _check_p(self.p)
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.replicates < 1:
            raise DomainError("replicates must be >= 1")
        if not self.sample_sizes or min(self.sample_sizes) < 1:
            raise DomainError("sample sizes must be positive")
        if self.hypothesis is Hypothesis.HA and I != J:
            raise DomainError("the Ha construction needs a square table")

    @property
    def one_minus_p(self) -> float:
        return round(1.0 - self.p, 12)

    def distribution(self) -> ProbTable:
        if self.hypothesis is Hypothesis.H0:
            return build_h0_distribution(*self.dims, self.p)
        return build_ha_distribution(self.dims[0], self.p)

    def seed_key(self) -> tuple[int, ...]:
        """Content-derived scenario identifier used for seeding."""
        hyp = 0 if self.hypothesis is Hypothesis.H0 else 1
        return (self.dims[0], self.dims[1], hyp, int(round(self.p * 1e9)))

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "p": self.p,
            "one_minus_p": self.one_minus_p,
            "lambda": self.lam,
            "alpha": self.alpha,
            "sample_sizes": list(self.sample_sizes),
            "replicates": self.replicates,
            "base_seed": self.base_seed,
            "hypothesis": self.hypothesis.value,
        }


def replicate_seed(base_seed: int, key: tuple[int, ...], n: int, rep: int) -> int:
    """64-bit seed mixed from the base seed, scenario key, sample size and replicate index."""
    ss = np.random.SeedSequence(int(base_seed) % 2**64, spawn_key=(*key, int(n), int(rep)))
    return int(ss.generate_state(1, np.uint64)[0])


def evaluate_replicate(counts, lam: float, alpha: float, nominal_dims) -> tuple[int, ...]:
    """Outcome per method in ALL_METHODS order: REJECT, ACCEPT or ABORTED."""
    out = {}
    try:
        zs = z_statistics(counts, lam)
    except (DegenerateVariance, InsufficientSupport):
        for m in (Method.ZAB, Method.ZA, Method.ZB):
            out[m] = ABORTED
    else:
        for m, z in ((Method.ZAB, zs.z_ab), (Method.ZA, zs.z_a), (Method.ZB, zs.z_b)):
            out[m] = REJECT if two_sided_p_value(z) < alpha else ACCEPT

    try:
        stat = pearson_statistic(counts)
    except InsufficientSupport:
        out[Method.PEARSON_OBSERVED] = out[Method.PEARSON_THEORETICAL] = ABORTED
    else:
        c = as_counts(counts).counts
        i_hat = int(np.count_nonzero(c.sum(axis=1)))
        j_hat = int(np.count_nonzero(c.sum(axis=0)))
        for m, df in (
            (Method.PEARSON_OBSERVED, (i_hat - 1) * (j_hat - 1)),
            (Method.PEARSON_THEORETICAL, (nominal_dims[0] - 1) * (nominal_dims[1] - 1)),
        ):
            if df < 1:
                out[m] = ABORTED
                continue
            out[m] = REJECT if chisq_sf(stat, df) < alpha else ACCEPT
    return tuple(out[m] for m in ALL_METHODS)


def _run_chunk(args) -> np.ndarray:
    probs, base_seed, key, n, start, stop, lam, alpha = args
    dist = ProbTable(probs)
    rows = []
    for rep in range(start, stop):
        counts = sample_multinomial(dist, n, replicate_seed(base_seed, key, n, rep))
        rows.append(evaluate_replicate(counts, lam, alpha, dist.shape))
    return np.array(rows, dtype=np.int8).reshape(-1, len(ALL_METHODS))


@dataclass(frozen=True)
class ScenarioResult:
    spec: ScenarioSpec
    rejections: dict  # (Method, n) -> int
    aborted: dict  # (Method, n) -> int
    elapsed: float = field(default=0.0, compare=False)

    def valid(self, method: Method, n: int) -> int:
        return self.spec.replicates - self.aborted[(method, n)]

    def rate(self, method: Method, n: int) -> float:
        """Rejection fraction among the replicates where the test was defined."""
        valid = self.valid(method, n)
        return self.rejections[(method, n)] / valid if valid else math.nan

    def rate_aborted_as_reject(self, method: Method, n: int) -> float:
        """Alternative accounting in which undefined statistics count as rejections."""
        return (self.rejections[(method, n)] + self.aborted[(method, n)]) / self.spec.replicates

    @property
    def rejection_rates(self) -> dict:
        return {key: self.rate(*key) for key in self.rejections}

    @property
    def degenerate_counts(self) -> dict:
        totals = {m: 0 for m in ALL_METHODS}
        for (m, _), k in self.aborted.items():
            totals[m] += k
        return totals


def _resolve_workers(workers) -> int:
    if workers is None:
        workers = int(os.environ.get("GMI_THREADS", "1") or 1)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def run_scenario(spec: ScenarioSpec, workers: int | None = 1, executor: Executor | None = None) -> ScenarioResult:
    """Draw ``spec.replicates`` tables per sample size and tally rejections.

    Each replicate is seeded independently, and chunks are reassembled in
    replicate order, so the counts do not depend on ``workers``.
    """
    t0 = time.perf_counter()
    dist = spec.distribution()
    key = spec.seed_key()
    rejections, aborted = {}, {}
    n_workers = 1 if executor is not None else _resolve_workers(workers)
    own = None
    if executor is None and n_workers > 1:
        executor = own = ProcessPoolExecutor(max_workers=n_workers)
    try:
        for n in spec.sample_sizes:
            chunk = max(1, math.ceil(spec.replicates / (4 * max(n_workers, 1))))
            if executor is not None:
                chunk = min(chunk, 500)
            jobs = [
                (dist.probs, spec.base_seed, key, n, s, min(s + chunk, spec.replicates), spec.lam, spec.alpha)
                for s in range(0, spec.replicates, chunk)
            ]
            parts = list(executor.map(_run_chunk, jobs)) if executor else [_run_chunk(j) for j in jobs]
            outcomes = np.concatenate(parts, axis=0)
            for col, m in enumerate(ALL_METHODS):
                rejections[(m, n)] = int(np.count_nonzero(outcomes[:, col] == REJECT))
                aborted[(m, n)] = int(np.count_nonzero(outcomes[:, col] == ABORTED))
    finally:
        if own is not None:
            own.shutdown()
    elapsed = time.perf_counter() - t0
    log.info(
        "scenario 1-p=%g %s sizes=%s replicates=%d done in %.1fs",
        spec.one_minus_p, spec.hypothesis.value, spec.sample_sizes, spec.replicates, elapsed,
    )
    return ScenarioResult(spec, rejections, aborted, elapsed)


def run_table1(
    p_values=DEFAULT_P_VALUES,
    sizes=DEFAULT_SIZES,
    replicates: int = 10_000,
    base_seed: int = 0,
    lam: float = 2.0,
    alpha: float = 0.01,
    dims=(11, 11),
    hypotheses=(Hypothesis.H0, Hypothesis.HA),
    workers: int | None = 1,
) -> list[ScenarioResult]:
    """Run every (p, hypothesis) scenario of the simulation grid."""
    n_workers = _resolve_workers(workers)
    executor = ProcessPoolExecutor(max_workers=n_workers) if n_workers > 1 else None
    try:
        return [
            run_scenario(
                ScenarioSpec(dims, p, lam, alpha, tuple(sizes), replicates, base_seed, Hypothesis(h)),
                executor=executor,
            )
            for p in p_values
            for h in hypotheses
        ]
    finally:
        if executor is not None:
            executor.shutdown()


# ---------------------------------------------------------------- reports

TSV_COLUMNS = ("one_minus_p", "n", "method", "hypothesis", "rate", "aborted")


def _fmt_rate(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.6f}"


def format_tsv(results, methods=ALL_METHODS) -> str:
    """Long-format report, one line per (1-p, n, method, hypothesis)."""
    buf = io.StringIO()
    buf.write("\t".join(TSV_COLUMNS) + "\n")
    for res in results:
        s = res.spec
        for n in s.sample_sizes:
            for m in methods:
                buf.write(
                    f"{s.one_minus_p:g}\t{n}\t{m.value}\t{s.hypothesis.value}\t"
                    f"{_fmt_rate(res.rate(m, n))}\t{res.aborted[(m, n)]}\n"
                )
    return buf.getvalue()


def format_json(results, methods=ALL_METHODS) -> str:
    doc = {"scenarios": []}
    for res in results:
        cells = []
        for n in res.spec.sample_sizes:
            for m in methods:
                rate = res.rate(m, n)
                cells.append({
                    "n": n,
                    "method": m.value,
                    "rate": None if math.isnan(rate) else rate,
                    "rejections": res.rejections[(m, n)],
                    "valid": res.valid(m, n),
                    "aborted": res.aborted[(m, n)],
                    "rate_aborted_as_reject": res.rate_aborted_as_reject(m, n),
                })
        notes = []
        if any(res.aborted[(m, n)] for m in methods for n in res.spec.sample_sizes):
            notes.append(
                "some replicates had an undefined statistic (one occupied row/column or "
                "zero variance); they are excluded from the rate denominator"
            )
        doc["scenarios"].append({
            "spec": res.spec.to_dict(),
            "cells": cells,
            "degenerate_counts": {m.value: k for m, k in res.degenerate_counts.items() if m in methods},
            "notes": notes,
        })
    return json.dumps(doc, indent=2) + "\n"


def format_table1(results) -> str:
    """Wide layout: one row per (1-p, n), H0/Ha rates for Z_AB and both Pearson variants."""
    by_key = {(r.spec.one_minus_p, r.spec.hypothesis): r for r in results}
    header = ["one_minus_p", "n"] + [
        f"{m.value}_{h.value}" for m in TABLE1_METHODS for h in Hypothesis
    ]
    lines = ["\t".join(header)]
    seen = []
    for r in results:
        if r.spec.one_minus_p not in seen:
            seen.append(r.spec.one_minus_p)
    flagged = False
    for omp in seen:
        sizes = next(r.spec.sample_sizes for r in results if r.spec.one_minus_p == omp)
        for n in sizes:
            row = [f"{omp:g}", str(n)]
            for m in TABLE1_METHODS:
                for h in Hypothesis:
                    res = by_key.get((omp, h))
                    if res is None:
                        row.append("")
                        continue
                    cell = _fmt_rate(res.rate(m, n))
                    if res.aborted[(m, n)]:
                        cell += "*"
                        flagged = True
                    row.append(cell)
            lines.append("\t".join(row))
    if flagged:
        lines.append("# * rate excludes replicates whose statistic was undefined; see aborted counts")
    return "\n".join(lines) + "\n"


def table1_report(
    p_values=DEFAULT_P_VALUES,
    sizes=DEFAULT_SIZES,
    replicates: int = 10_000,
    base_seed: int = 0,
    fmt: str = "table",
    **kwargs,
) -> str:
    results = run_table1(p_values, sizes, replicates, base_seed, **kwargs)
    return {"table": format_table1, "tsv": format_tsv, "json": format_json}[fmt](results)

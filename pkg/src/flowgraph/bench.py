"""Timing harness and statistics: per-seed build/solve timing, median
speedups against a reference approach, and two-sample t-tests.

The t-distribution tail probability is computed from an authored
regularized incomplete beta function (continued fraction), so the
statistics need no external dependency and can themselves be
cross-checked against scipy in the tests.
"""

from __future__ import annotations

import csv
import json
import math
import os
import random
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

from .cases import CaseSpec, hybrid_fixture, scale_horizon, tri_area_case
from .errors import (
    DegenerateVariance,
    EmptySample,
    InvariantViolation,
    IoFailure,
    ObjectiveMismatch,
    SolverFailure,
)
from .formulation import Approach, build_model
from .lp import LpInstance, SolveResult
from .solver import (
    ExternalSolverSpec,
    SimplexOptions,
    solve_external,
    solve_reference,
)


@dataclass(frozen=True)
class BenchConfig:
    """What to time: approaches x instances (or horizons) x seeds."""

    approaches: tuple[Approach, ...]
    instances: tuple[int, ...] = (1,)
    horizons: Optional[tuple[int, ...]] = None  # overrides instances at desk scale
    n_seeds: int = 30
    reference: Approach = Approach.TWO_BB_2F
    solver: Union[str, ExternalSolverSpec] = "reference"
    alpha: float = 0.05
    case: str = "tri-area"

    def __post_init__(self):
        if self.reference not in self.approaches:
            raise InvariantViolation("reference approach must be benchmarked too")
        if self.n_seeds < 2:
            raise InvariantViolation("need at least two seeds")
        if not 0 < self.alpha < 1:
            raise InvariantViolation("alpha must lie in (0, 1)")

    @classmethod
    def from_json(cls, path: str) -> "BenchConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        solver = raw.get("solver", {"kind": "reference"})
        if isinstance(solver, dict) and solver.get("kind") == "external":
            solver = ExternalSolverSpec.from_json(solver["spec"])
        else:
            solver = "reference"
        return cls(
            approaches=tuple(Approach.from_label(a) for a in raw["approaches"]),
            instances=tuple(raw.get("instances", (1,))),
            horizons=tuple(raw["horizons"]) if "horizons" in raw else None,
            n_seeds=raw.get("n_seeds", 30),
            reference=Approach.from_label(raw.get("reference", "2BB-2F")),
            solver=solver,
            alpha=raw.get("alpha", 0.05),
            case=raw.get("case", "tri-area"),
        )

    def labels(self) -> tuple[tuple[str, object], ...]:
        if self.horizons is not None:
            return tuple((f"T{t}", t) for t in self.horizons)
        return tuple((f"i{i}", i) for i in self.instances)


@dataclass(frozen=True)
class TimingSample:
    approach: Approach
    instance: str
    seed: int
    build_time_s: float
    solve_time_s: float
    objective: float

    def __post_init__(self):
        if self.build_time_s < 0 or self.solve_time_s < 0:
            raise InvariantViolation("times must be nonnegative")


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    p_value: float
    df: int
    reject_null: bool


@dataclass
class BenchReport:
    config: BenchConfig
    samples: list[TimingSample] = field(default_factory=list)
    speedups: list[tuple[str, str, float, float]] = field(default_factory=list)
    ttests: list[tuple[str, str, TTestResult]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


def _beta_cont_frac(a: float, b: float, x: float) -> float:
    """Continued fraction for the regularized incomplete beta (Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-14:
            return h
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise InvariantViolation("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cont_frac(a, b, x) / a
    return 1.0 - front * _beta_cont_frac(b, a, 1.0 - x) / b


def _t_sf_two_sided(t: float, df: int) -> float:
    """Two-sided tail probability of Student's t."""
    if df <= 0:
        raise InvariantViolation("degrees of freedom must be positive")
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def two_sample_t_test(
    a: Sequence[float], b: Sequence[float], alpha: float = 0.05
) -> TTestResult:
    """Pooled-variance two-sample Student t-test, two-sided."""
    if len(a) < 2 or len(b) < 2:
        raise EmptySample("need at least two observations per sample")
    na, nb = len(a), len(b)
    ma, mb = statistics.fmean(a), statistics.fmean(b)
    va = statistics.variance(a)
    vb = statistics.variance(b)
    df = na + nb - 2
    pooled = ((na - 1) * va + (nb - 1) * vb) / df
    if pooled == 0.0:
        if ma == mb:
            return TTestResult(0.0, 1.0, df, False)
        raise DegenerateVariance("zero variance with different means")
    t = (ma - mb) / math.sqrt(pooled * (1.0 / na + 1.0 / nb))
    p = _t_sf_two_sided(t, df)
    return TTestResult(t, p, df, p < alpha)


def median_speedup(
    reference_samples: Sequence[float], candidate_samples: Sequence[float]
) -> float:
    """median(reference) / median(candidate); robust to outliers."""
    if not reference_samples or not candidate_samples:
        raise EmptySample("speedup needs samples on both sides")
    return statistics.median(reference_samples) / statistics.median(candidate_samples)


# ---------------------------------------------------------------------------
# Timing
# ---------------------------------------------------------------------------


def _shuffled(instance: LpInstance, seed: int) -> LpInstance:
    """Copy with variables reordered by a seeded shuffle.

    Simulates per-seed solution-path variability for the deterministic
    reference solver without touching the model's meaning.
    """
    order = list(range(len(instance.variables)))
    random.Random(seed).shuffle(order)
    remap = {old: new for new, old in enumerate(order)}
    out = LpInstance(name=f"{instance.name}:s{seed}")
    out.variables = [instance.variables[j] for j in order]
    out.objective = sorted((remap[j], c) for j, c in instance.objective)
    for row in instance.rows:
        out.rows.append(
            replace(row, terms=sorted((remap[j], c) for j, c in row.terms))
        )
    return out


def _solve(instance: LpInstance, config: BenchConfig, seed: int) -> SolveResult:
    if isinstance(config.solver, ExternalSolverSpec):
        return solve_external(instance, config.solver, seed=seed)
    return solve_reference(_shuffled(instance, seed), SimplexOptions())


def _system_for(config: BenchConfig, label_value) -> object:
    if config.case == "hybrid":
        base = hybrid_fixture()
        return scale_horizon(base, label_value) if config.horizons else base
    if config.horizons is not None:
        return scale_horizon(tri_area_case(CaseSpec(instance=1)), label_value)
    return tri_area_case(CaseSpec(instance=label_value))


def run_benchmark(config: BenchConfig) -> BenchReport:
    """Time builds and solves per (approach, instance, seed).

    One warm-up build per (approach, instance) is discarded; objectives
    across approaches must agree per (instance, seed) to 1e-6 relative or
    the run aborts — the harness never reports a speedup for a wrong
    answer.
    """
    report = BenchReport(config=config)
    objectives: dict[tuple[str, int], float] = {}
    for label, label_value in config.labels():
        system = _system_for(config, label_value)
        for approach in config.approaches:
            build_model(system, approach)  # warm-up, discarded
            for seed in range(config.n_seeds):
                t0 = time.perf_counter()
                instance = build_model(system, approach)
                build_time = time.perf_counter() - t0
                t0 = time.perf_counter()
                result = _solve(instance, config, seed)
                solve_time = time.perf_counter() - t0
                if not result.is_optimal:
                    raise SolverFailure(
                        f"{approach.value} on {label}, seed {seed}: {result.status}"
                    )
                key = (label, seed)
                baseline = objectives.setdefault(key, result.objective)
                scale = max(1.0, abs(baseline))
                if abs(result.objective - baseline) / scale > 1e-6:
                    raise ObjectiveMismatch(
                        f"{approach.value} on {label}, seed {seed}: "
                        f"{result.objective} vs {baseline}"
                    )
                report.samples.append(
                    TimingSample(
                        approach=approach,
                        instance=label,
                        seed=seed,
                        build_time_s=build_time,
                        solve_time_s=result.wall_time_s or solve_time,
                        objective=result.objective,
                    )
                )

    def times(approach, label, attr):
        return [
            getattr(s, attr)
            for s in report.samples
            if s.approach is approach and s.instance == label
        ]

    for label, _ in config.labels():
        ref_build = times(config.reference, label, "build_time_s")
        ref_solve = times(config.reference, label, "solve_time_s")
        for approach in config.approaches:
            if approach is config.reference:
                continue
            build = times(approach, label, "build_time_s")
            solve = times(approach, label, "solve_time_s")
            report.speedups.append(
                (
                    approach.value,
                    label,
                    median_speedup(ref_build, build),
                    median_speedup(ref_solve, solve),
                )
            )
            report.ttests.append(
                (approach.value, label, two_sample_t_test(ref_solve, solve, config.alpha))
            )
    return report


def write_report(report: BenchReport, destination: str) -> list[str]:
    """Write samples.csv, speedups.csv and ttests.csv under ``destination``."""
    if not report.samples:
        raise EmptySample("nothing to report")
    try:
        os.makedirs(destination, exist_ok=True)
        paths = []
        path = os.path.join(destination, "samples.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["approach", "instance", "seed", "build_time_s", "solve_time_s", "objective"]
            )
            for s in report.samples:
                writer.writerow(
                    [s.approach.value, s.instance, s.seed,
                     repr(s.build_time_s), repr(s.solve_time_s), repr(s.objective)]
                )
        paths.append(path)
        path = os.path.join(destination, "speedups.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["approach", "instance", "median_build_speedup", "median_solve_speedup"]
            )
            for approach, label, build, solve in report.speedups:
                writer.writerow([approach, label, repr(build), repr(solve)])
        paths.append(path)
        path = os.path.join(destination, "ttests.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["approach", "instance", "t", "p", "reject_null"])
            for approach, label, tt in report.ttests:
                writer.writerow(
                    [approach, label, repr(tt.t_statistic), repr(tt.p_value),
                     str(tt.reject_null).lower()]
                )
        paths.append(path)
    except OSError as exc:
        raise IoFailure(str(exc))
    return paths

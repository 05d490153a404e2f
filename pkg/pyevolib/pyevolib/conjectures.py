#
# Copyright 2026 evolib developers
#
# Licensed to the Apache Software Foundation (ASF) under one
# or more contributor license agreements.  See the NOTICE file
# distributed with this work for additional information
# regarding copyright ownership.  The ASF licenses this file
# to you under the Apache License, Version 2.0 (the
# "License"); you may not use this file except in compliance
# with the License.  You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing,
# software distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, either express or implied.  See the License for the
# specific language governing permissions and limitations
# under the License.
#

import enum
import logging
import os
import time
from dataclasses import dataclass, field
from functools import partial
from multiprocessing.pool import ThreadPool
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg

from .algebra import (
    DEFAULT_TOLERANCE,
    BasisChange,
    EvolutionAlgebra,
    Tolerance,
    apply_basis_change,
    direct_sum,
    es,
)
from .condition_p import (
    CanonicalForm,
    Verdict,
    Witness,
    decide_p_nilpotent,
    polish_idempotent,
    verify_witness,
)
from .fixedpoint import (
    DEFAULT_CONFIG,
    FixedPointConfig,
    FixedPointSystem,
    full_support_solution,
    idempotent_system_of,
    solve_numeric,
    solve_small,
)
from .linalg import kernel, magnitude, normalize_leading, rank
from .natural_basis import DEFAULT_TRIALS
from .nilpotency import is_nilpotent


def _gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def _real(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 0j


def _disk(rng: np.random.Generator, n: int) -> np.ndarray:
    radius = np.sqrt(rng.random((n, n)))
    return radius * np.exp(2j * np.pi * rng.random((n, n)))


DISTRIBUTIONS: Dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {
    "gaussian": _gaussian,
    "real": _real,
    "disk": _disk,
}


def draw_matrix(rng: np.random.Generator, n: int, dist: str = "gaussian", max_draws: int = 100) -> np.ndarray:
    """Invertible matrix from `dist`; numerically singular draws are redrawn"""
    draw = DISTRIBUTIONS[dist]
    for _ in range(max_draws):
        M = draw(rng, n)
        if np.linalg.cond(M) < 1e12:
            return M
    raise RuntimeError(f"no invertible {n}x{n} matrix in {max_draws} draws from {dist}")


@dataclass(frozen=True)
class SampleFailure:
    index: int
    matrix: Tuple[Tuple[complex, ...], ...]


@dataclass(frozen=True)
class CampaignReport:
    n: int
    samples: int
    seed: int
    dist: str
    success_count: int
    root_counts: Tuple[int, ...]
    path_failures: int
    closed_form_mismatches: int
    failures: Tuple[SampleFailure, ...]
    elapsed: float = field(default=0.0, compare=False)

    @property
    def success_fraction(self) -> float:
        return self.success_count / self.samples

    @property
    def full_count_fraction(self) -> float:
        return sum(count == 2**self.n for count in self.root_counts) / self.samples


@dataclass(frozen=True)
class _SampleOutcome:
    found: bool
    root_count: int
    path_failures: int
    mismatch: bool
    matrix: Tuple[Tuple[complex, ...], ...]


def _same_roots(a, b, tol: float) -> bool:
    if len(a) != len(b):
        return False
    return all(any(np.abs(x - y).max() <= tol for y in b) for x in a)


def _run_sample(n: int, seed: int, dist: str, cfg: FixedPointConfig, index: int) -> _SampleOutcome:
    rng = np.random.default_rng([seed, index])
    M = draw_matrix(rng, n, dist)
    system = FixedPointSystem(M)
    solutions = solve_numeric(system, cfg, rng)
    mismatch = False
    if n <= 2:
        mismatch = not _same_roots(solutions.roots, solve_small(system, cfg).roots, 1e-8)
    return _SampleOutcome(
        found=bool(solutions.full_support),
        root_count=len(solutions),
        path_failures=solutions.path_failures,
        mismatch=mismatch,
        matrix=tuple(tuple(complex(v) for v in row) for row in M),
    )


def campaign_threads() -> int:
    value = os.environ.get("EVOLIB_THREADS")
    if value:
        try:
            return max(int(value), 1)
        except ValueError:
            logging.warning("ignoring invalid EVOLIB_THREADS=%r", value)
    return os.cpu_count() or 1


def sample_campaign(
    n: int,
    samples: int,
    seed: int = 0,
    dist: str = "gaussian",
    cfg: FixedPointConfig = DEFAULT_CONFIG,
    threads: Optional[int] = None,
) -> CampaignReport:
    """
    Look for full-support roots of x∘x = Mx over random invertible M. Every
    sample draws from its own stream seeded by (seed, index), so the report
    does not depend on the thread count.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if dist not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {dist!r}, expected one of {', '.join(DISTRIBUTIONS)}")

    threads = threads or campaign_threads()
    logging.info("campaign n=%d samples=%d seed=%d dist=%s on %d thread(s)", n, samples, seed, dist, threads)
    start = time.perf_counter()
    run = partial(_run_sample, n, seed, dist, cfg)
    if threads == 1:
        outcomes = [run(i) for i in range(samples)]
    else:
        with ThreadPool(threads) as pool:
            outcomes = pool.map(run, range(samples))
    elapsed = time.perf_counter() - start

    failures = tuple(SampleFailure(i, o.matrix) for i, o in enumerate(outcomes) if not o.found)
    for failure in failures:
        logging.warning("sample %d has no full-support root", failure.index)
    report = CampaignReport(
        n=n,
        samples=samples,
        seed=seed,
        dist=dist,
        success_count=sum(o.found for o in outcomes),
        root_counts=tuple(o.root_count for o in outcomes),
        path_failures=sum(o.path_failures for o in outcomes),
        closed_form_mismatches=sum(o.mismatch for o in outcomes),
        failures=failures,
        elapsed=elapsed,
    )
    logging.info("campaign done in %.2fs: %d/%d with full support", elapsed, report.success_count, samples)
    return report


def replay_failure(report: CampaignReport, failure: SampleFailure, cfg: FixedPointConfig = DEFAULT_CONFIG) -> bool:
    """True when the recorded sample still has no full-support root"""
    return not _run_sample(report.n, report.seed, report.dist, cfg, failure.index).found


@dataclass(frozen=True, eq=False)
class Reduction:
    algebra: EvolutionAlgebra
    change: BasisChange
    k: int


def _nonzero_squares(E: EvolutionAlgebra, tol: Tolerance) -> List[int]:
    threshold = tol.threshold(E.scale)
    return [i for i in range(E.dim) if magnitude(E.matrix[i]) > threshold]


def order_by_nonzero_squares(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> Reduction:
    """Basis reordered so that e_1..e_k are the vectors with a nonzero square"""
    nonzero = _nonzero_squares(E, tol)
    order = nonzero + [i for i in range(E.dim) if i not in nonzero]
    change = BasisChange.permutation(order)
    return Reduction(apply_basis_change(E, change, tol), change, len(nonzero))


def reduce_iteration1(
    E: EvolutionAlgebra, k: Optional[int] = None, tol: Tolerance = DEFAULT_TOLERANCE
) -> Optional[Reduction]:
    """
    With e_1..e_k the nonzero squares, find e_i' = e_i + Σ_{j>k} β_ij e_j
    making E = E' ⊕ C^(n-k). None when the leading k×k minor is singular.

    k defaults to the number of nonzero squares, which must then come first
    (see order_by_nonzero_squares).
    """
    n = E.dim
    if k is None:
        nonzero = _nonzero_squares(E, tol)
        k = len(nonzero)
        if nonzero != list(range(k)):
            raise ValueError("the nonzero squares must come first, reorder with order_by_nonzero_squares()")
    lead = E.matrix[:k, :k]
    if k == 0 or rank(lead, tol.eps, max(E.scale, 1.0)) < k:
        return None
    if k == n:
        return Reduction(E, BasisChange.identity(n), k)
    beta = scipy.linalg.solve(lead, E.matrix[:k, k:])
    rows = np.eye(n, dtype=complex)
    rows[:k, k:] = beta
    change = BasisChange(rows, natural=True)
    reduced = apply_basis_change(E, change, tol)
    snapped = reduced.matrix.copy()
    snapped[:k, k:][np.abs(snapped[:k, k:]) <= tol.threshold(E.scale)] = 0
    return Reduction(EvolutionAlgebra(snapped, name=E.name), change, k)


# fmt: off
class PipelineOutcome(enum.Enum):
    SATISFIES              = "satisfies"
    FAILS                  = "fails"
    CONJECTURAL_SATISFIES  = "conjectural-satisfies"
    UNKNOWN                = "unknown"
# fmt: on


@dataclass(frozen=True)
class LevelStep:
    level: int
    zero_rows: Tuple[int, ...]
    action: str


@dataclass(frozen=True, eq=False)
class PipelineReport:
    outcome: PipelineOutcome
    change: BasisChange
    trace: Tuple[LevelStep, ...] = ()
    witness: Optional[Witness] = None
    presentation: Optional[EvolutionAlgebra] = None
    certificate: Optional[FixedPointSystem] = None
    canonical: Optional[CanonicalForm] = None


class _Walk:
    """Mutable state of the level walk: the current presentation and its change"""

    def __init__(self, E: EvolutionAlgebra, change: BasisChange, trials: int, seed: int, tol: Tolerance):
        self.E = E
        self.change = change
        self.current = apply_basis_change(E, change, tol)
        self.trace: List[LevelStep] = []
        self.trials = trials
        self.seed = seed
        self.tol = tol

    def step(self, step: BasisChange):
        self.change = self.change.then(step)
        self.current = apply_basis_change(self.current, step, self.tol)

    def log(self, level: int, zero_rows, action: str):
        logging.debug("level %d, zero rows %s: %s", level, list(zero_rows), action)
        self.trace.append(LevelStep(level, tuple(int(s) for s in zero_rows), action))

    def witness(self, generators) -> Optional[Witness]:
        # candidates are written in the current basis
        generators = np.asarray(generators, dtype=complex).reshape(-1, self.E.dim) @ self.change.matrix
        return verify_witness(self.E, generators, self.trials, self.seed, self.tol)

    def report(self, outcome: PipelineOutcome, **kwargs) -> PipelineReport:
        return PipelineReport(outcome, self.change, tuple(self.trace), **kwargs)


def _full_idempotent(walk: _Walk, level: int, leading: np.ndarray) -> Optional[np.ndarray]:
    """Extend an idempotent of the leading block to the whole algebra"""
    A = walk.current.matrix
    x = np.zeros(walk.E.dim, dtype=complex)
    x[:level] = leading
    # rows past the level only reach later columns
    for j in range(level, walk.E.dim):
        x[j] = (x[:j] * x[:j]) @ A[:j, j]
    x = polish_idempotent(walk.current, x)
    if x is None or magnitude((x * x) @ A - x) > walk.tol.threshold(walk.current.scale * max(magnitude(x), 1.0) ** 2):
        return None
    return x


def _terminal(walk: _Walk) -> PipelineReport:
    A = walk.current.matrix
    n = walk.E.dim
    tol = walk.tol

    if abs(A[0, 0]) <= tol.threshold(walk.current.scale):
        logging.warning("degenerate leading entry after the level walk")
        return walk.report(PipelineOutcome.UNKNOWN)

    # the leading block is now upper triangular with a single nonzero diagonal entry
    x = np.zeros(n, dtype=complex)
    x[0] = 1 / A[0, 0]
    for j in range(1, n):
        x[j] = (x[:j] * x[:j]) @ A[:j, j]
    if magnitude(x[1:]) > tol.threshold(magnitude(x)):
        walk.log(1, (), "idempotent with support beyond e_1")
        witness = walk.witness(x)
        if witness is not None:
            return walk.report(PipelineOutcome.FAILS, witness=witness)
        return walk.report(PipelineOutcome.UNKNOWN)

    if n == 1:
        walk.step(BasisChange.scaling(x))
        return walk.report(PipelineOutcome.SATISFIES, presentation=es(1))

    rest = EvolutionAlgebra(A[1:, 1:], name=walk.E.name)
    decision = decide_p_nilpotent(rest, walk.trials, walk.seed, tol)
    if decision.verdict == Verdict.FAILS:
        walk.log(1, (), "nilpotent complement fails")
        lifted = np.hstack((np.zeros((len(decision.witness.generators), 1)), decision.witness.generators))
        witness = walk.witness(lifted)
        if witness is not None:
            return walk.report(PipelineOutcome.FAILS, witness=witness)
        return walk.report(PipelineOutcome.UNKNOWN)
    if decision.verdict == Verdict.UNKNOWN:
        return walk.report(PipelineOutcome.UNKNOWN)

    walk.log(1, (), "split off ES_1, canonical nilpotent complement")
    block = BasisChange(scipy.linalg.block_diag([[x[0]]], decision.canonical.change.matrix), natural=True)
    walk.step(block)
    presentation = direct_sum(es(1), decision.canonical.matrix)
    canonical = CanonicalForm(decision.canonical.k, presentation, walk.change)
    return walk.report(PipelineOutcome.CONJECTURAL_SATISFIES, presentation=presentation, canonical=canonical)


def reduce_pipeline(
    E: EvolutionAlgebra,
    cfg: FixedPointConfig = DEFAULT_CONFIG,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> PipelineReport:
    """
    Walk the leading blocks of E from the largest down, looking at the rows
    x_(s,t) = (a_s1, ..., a_st). Two zero rows or dependent rows give a
    counterexample candidate, a level without zero rows gives a fixed-point
    certificate, a single zero row is moved last and the walk goes on.
    Candidates only count once their classification is proved.
    """
    nilpotent, _ = is_nilpotent(E, tol)
    if nilpotent:
        decision = decide_p_nilpotent(E, trials, seed, tol)
        outcome = {
            Verdict.SATISFIES: PipelineOutcome.SATISFIES,
            Verdict.FAILS: PipelineOutcome.FAILS,
            Verdict.UNKNOWN: PipelineOutcome.UNKNOWN,
        }[decision.verdict]
        change = decision.canonical.change if decision.canonical else BasisChange.identity(E.dim)
        return PipelineReport(
            outcome,
            change,
            witness=decision.witness,
            presentation=decision.canonical.matrix if decision.canonical else None,
            canonical=decision.canonical,
        )

    ordered = order_by_nonzero_squares(E, tol)
    walk = _Walk(E, ordered.change, trials, seed, tol)
    k = ordered.k
    n = E.dim
    split = reduce_iteration1(walk.current, k, tol) if k < n else None
    if split is not None:
        walk.step(split.change)
        walk.log(k, (), "split off the zero-square part")

    identity = np.eye(n, dtype=complex)
    for level in range(k, 1, -1):
        A = walk.current.matrix
        rows = A[:level, :level]
        threshold = tol.threshold(walk.current.scale)
        zero_rows = [s for s in range(level) if magnitude(rows[s]) <= threshold]

        if len(zero_rows) >= 2:
            s1, s2 = zero_rows[:2]
            walk.log(level, zero_rows, "two zero rows")
            generators = [identity[s1] + identity[s2]] + [identity[j] for j in range(level, n)]
            witness = walk.witness(generators) or walk.witness(identity[s1] + identity[s2])
            if witness is not None:
                return walk.report(PipelineOutcome.FAILS, witness=witness)
            return walk.report(PipelineOutcome.UNKNOWN)

        if not zero_rows:
            if rank(rows, tol.eps, max(walk.current.scale, 1.0)) < level:
                walk.log(level, zero_rows, "dependent rows")
                alpha = normalize_leading(kernel(rows.T, tol.eps)[0], tol.eps) + 0j
                x = np.zeros(n, dtype=complex)
                x[:level] = np.sqrt(alpha)
                witness = walk.witness([x] + [identity[j] for j in range(level, n)]) or walk.witness(x)
                if witness is not None:
                    return walk.report(PipelineOutcome.FAILS, witness=witness)
                return walk.report(PipelineOutcome.UNKNOWN)

            walk.log(level, zero_rows, "fixed-point certificate")
            system = idempotent_system_of(EvolutionAlgebra(rows))
            leading = full_support_solution(system, cfg, np.random.default_rng(seed))
            if leading is None:
                logging.warning("no full-support root at level %d", level)
                return walk.report(PipelineOutcome.UNKNOWN, certificate=system)
            x = _full_idempotent(walk, level, leading)
            witness = walk.witness(x) if x is not None else None
            if witness is not None:
                return walk.report(PipelineOutcome.FAILS, witness=witness, certificate=system)
            return walk.report(PipelineOutcome.UNKNOWN, certificate=system)

        s = zero_rows[0]
        if s != level - 1:
            order = list(range(n))
            order[s], order[level - 1] = order[level - 1], order[s]
            walk.step(BasisChange.permutation(order))
        walk.log(level, zero_rows, f"move zero row to position {level}")

    return _terminal(walk)

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

"""
Condition P: every subalgebra is an evolution subalgebra whose natural basis
extends to a natural basis of the whole algebra.

The decision is exact for dimension at most 2, for nilpotent algebras and for
algebras of permutation type; anywhere else a counterexample search can only
conclude Fails or Unknown. A Fails verdict always carries a witness subspace
whose classification is re-checked before it is reported.
"""

import cmath
import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .algebra import (
    DEFAULT_TOLERANCE,
    BasisChange,
    Element,
    EvolutionAlgebra,
    Subspace,
    Tolerance,
    apply_basis_change,
    multiply,
)
from .errors import DimensionError, NotNilpotentError
from .linalg import clean_zeros, kernel, magnitude, normalize_leading, rank
from .natural_basis import DEFAULT_TRIALS, SubspaceClass, classify_subspace
from .nilpotency import ProductDigraph, is_nilpotent, is_zn_form
from .permutation import DecompositionReport, decompose, spec_from_matrix

DEFAULT_BUDGET = 64
SUPPORT_EPS = 1e-6
_DEDUP_TOL = 1e-6

_OMEGA = cmath.exp(2j * cmath.pi / 3)


# fmt: off
class Dim2Tag(enum.Enum):
    ABELIAN = "abelian"
    E1      = "E1"
    E2      = "E2"
    E3      = "E3"
    E4      = "E4"
    E5      = "E5"
    E6      = "E6"
# fmt: on

_SATISFYING_DIM2 = {Dim2Tag.ABELIAN, Dim2Tag.E1, Dim2Tag.E4}


class Verdict(enum.Enum):
    SATISFIES = "satisfies"
    FAILS = "fails"
    UNKNOWN = "unknown"


class Route(enum.Enum):
    DIM2 = "dim2"
    NILPOTENT = "nilpotent"
    PERMUTATION = "permutation"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class Dim2Class:
    tag: Dim2Tag
    params: Tuple[complex, ...] = ()


@dataclass(frozen=True, eq=False)
class Witness:
    generators: np.ndarray
    classification: SubspaceClass

    @property
    def subspace(self) -> Subspace:
        return self.classification.subspace


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    k: int  # size of the ZN block
    matrix: EvolutionAlgebra
    change: BasisChange


@dataclass(frozen=True, eq=False)
class PDecision:
    verdict: Verdict
    route: Route
    witness: Optional[Witness] = None
    canonical: Optional[CanonicalForm] = None
    dim2: Optional[Dim2Class] = None
    decomposition: Optional[DecompositionReport] = None

    @property
    def exact(self) -> bool:
        return self.route != Route.HEURISTIC


def _key(z: complex) -> Tuple[float, float]:
    return round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0


def _row_threshold(E: EvolutionAlgebra, tol: Tolerance) -> float:
    return tol.threshold(E.scale)


def _nonzero_rows(E: EvolutionAlgebra, tol: Tolerance) -> List[int]:
    threshold = _row_threshold(E, tol)
    return [i for i in range(E.dim) if magnitude(E.matrix[i]) > threshold]


def classify_dim2(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> Dim2Class:
    if E.dim != 2:
        raise DimensionError(f"expected a 2-dimensional algebra, got dimension {E.dim}")
    A = E.matrix
    square_rank = rank(A, tol.eps)

    if square_rank == 0:
        return Dim2Class(Dim2Tag.ABELIAN)

    if square_rank == 1:
        # E·E = span{w}; w·w is either 0 or a nonzero multiple of w
        w = A[int(np.argmax(np.abs(A).max(axis=1)))]
        w = w / magnitude(w)
        null = tol.is_zero(multiply(E, w, w), E.scale)
        if len(_nonzero_rows(E, tol)) == 1:
            return Dim2Class(Dim2Tag.E4 if null else Dim2Tag.E1)
        return Dim2Class(Dim2Tag.E3 if null else Dim2Tag.E2)

    threshold = _row_threshold(E, tol)
    own0, own1 = abs(A[0, 0]) > threshold, abs(A[1, 1]) > threshold
    if own0 and own1:
        a2 = A[0, 1] * A[1, 1] / A[0, 0] ** 2
        a3 = A[1, 0] * A[0, 0] / A[1, 1] ** 2
        params = min((a2, a3), (a3, a2), key=lambda p: (_key(p[0]), _key(p[1])))
        return Dim2Class(Dim2Tag.E5, (complex(params[0]), complex(params[1])))

    if own0:
        A = A[::-1, ::-1]
    a12, a21, a22 = A[0, 1], A[1, 0], A[1, 1]
    lam = (1 / (a12**2 * a21)) ** (1 / 3)
    a4 = lam**2 * a12 * a22
    a4 = min((a4, a4 * _OMEGA, a4 * _OMEGA**2), key=_key)
    return Dim2Class(Dim2Tag.E6, (complex(a4),))


def find_null_square(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> Optional[Element]:
    """
    Nonzero x with x·x = 0. Since x·x = Σ x_i² (row i), such x exists iff
    the nonzero rows are linearly dependent or some row vanishes.
    """
    rows = _nonzero_rows(E, tol)
    x = _null_square_from_rows(E, rows, tol)
    if x is not None:
        return x
    zero_rows = [i for i in range(E.dim) if i not in rows]
    if zero_rows:
        return E.basis_vector(zero_rows[0])
    return None


def _null_square_from_rows(E: EvolutionAlgebra, rows: Sequence[int], tol: Tolerance) -> Optional[Element]:
    if not rows:
        return None
    block = E.matrix[list(rows)]
    null = kernel(block.T, tol.eps)
    if not null.shape[0]:
        return None
    alpha = clean_zeros(normalize_leading(null[0], tol.eps))
    x = np.zeros(E.dim, dtype=complex)
    x[list(rows)] = np.sqrt(alpha)
    if not tol.is_zero(multiply(E, x, x), E.scale * magnitude(x) ** 2):
        logging.warning("null-square candidate failed re-verification")
        return None
    return x


def _idempotent_residual(E: EvolutionAlgebra, x: Element) -> float:
    return magnitude(multiply(E, x, x) - x)


def polish_idempotent(E: EvolutionAlgebra, x: Element, iterations: int = 60) -> Optional[Element]:
    A = E.matrix
    identity = np.eye(E.dim)
    for _ in range(iterations):
        residual = (x * x) @ A - x
        jacobian = 2 * A.T * x[None, :] - identity
        try:
            step = np.linalg.solve(jacobian, residual)
        except np.linalg.LinAlgError:
            break
        x = x - step
        if not np.isfinite(x).all():
            return None
        if magnitude(step) <= 1e-15 * max(magnitude(x), 1.0):
            break
    return x


def _dedup(points: Iterable[Element], tol: float = _DEDUP_TOL) -> List[Element]:
    unique: List[Element] = []
    for p in points:
        if all(magnitude(p - q) > tol * max(magnitude(q), 1.0) for q in unique):
            unique.append(p)
    return unique


def _dim2_idempotent_candidates(A: np.ndarray, threshold: float) -> List[Tuple[complex, complex]]:
    a11, a12, a21, a22 = A[0, 0], A[0, 1], A[1, 0], A[1, 1]

    def eliminate(a11, a12, a21, a22):
        # x2² = (x1 - a11 x1²)/a21 and x2 = c2 x1² + c1 x1 give x1·cubic(x1) = 0
        c2 = a12 - a22 * a11 / a21
        c1 = a22 / a21
        cubic = [a21 * c2**2, 2 * a21 * c1 * c2, a21 * c1**2 + a11, -1.0]
        return [(0j, 0j)] + [(t, c2 * t**2 + c1 * t) for t in np.roots(cubic)]

    if abs(a21) > threshold:
        return eliminate(a11, a12, a21, a22)
    if abs(a12) > threshold:
        return [(x1, x2) for x2, x1 in eliminate(a22, a21, a12, a11)]
    firsts = [0j] + ([1 / a11] if abs(a11) > threshold else [])
    seconds = [0j] + ([1 / a22] if abs(a22) > threshold else [])
    return [(x1, x2) for x1 in firsts for x2 in seconds]


def find_idempotents(
    E: EvolutionAlgebra, budget: int = DEFAULT_BUDGET, seed: int = 0, tol: Tolerance = DEFAULT_TOLERANCE
) -> List[Element]:
    """
    Idempotents x·x = x, the zero element first. Dimension 1 and 2 use the
    closed forms, higher dimensions a seeded multi-start Newton iteration on
    x_k = Σ_i a_ik x_i².
    """
    n = E.dim
    threshold = _row_threshold(E, tol)
    if n == 1:
        a = E.matrix[0, 0]
        candidates = [np.zeros(1, dtype=complex)] + ([np.array([1 / a])] if abs(a) > threshold else [])
    elif n == 2:
        candidates = [np.array(c, dtype=complex) for c in _dim2_idempotent_candidates(E.matrix, threshold)]
    else:
        rng = np.random.default_rng(seed)
        spread = 1.0 / max(E.scale, 1e-12)
        candidates = [np.zeros(n, dtype=complex)]
        for _ in range(budget):
            start = spread * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
            candidates.append(start)

    found = []
    for x in candidates:
        if magnitude(x) > 0:
            x = polish_idempotent(E, x)
            if x is None:
                continue
        x = clean_zeros(np.where(np.abs(x) <= tol.eps * max(magnitude(x), 1.0), 0, x))
        if _idempotent_residual(E, x) <= tol.threshold(E.scale * max(magnitude(x), 1.0) ** 2):
            found.append(x)
    return _dedup(found)


def full_support(x: Element, support_eps: float = SUPPORT_EPS) -> bool:
    return x.size > 0 and float(np.abs(x).min()) > support_eps * max(magnitude(x), 1.0)


def verify_witness(
    E: EvolutionAlgebra, generators, trials: int = DEFAULT_TRIALS, seed: int = 0, tol: Tolerance = DEFAULT_TOLERANCE
) -> Optional[Witness]:
    generators = np.asarray(generators, dtype=complex).reshape(-1, E.dim)
    classification = classify_subspace(E, Subspace.span(generators, E.dim, tol), trials, seed, tol)
    if classification.proved_non_extendable_subalgebra:
        return Witness(generators, classification)
    logging.info(
        "candidate witness discarded: %s (%s)", classification.kind.value, classification.certainty.value
    )
    return None


def _first_witness(
    E: EvolutionAlgebra, candidates: Iterable[Optional[np.ndarray]], trials: int, seed: int, tol: Tolerance
) -> Optional[Witness]:
    for generators in candidates:
        if generators is None:
            continue
        witness = verify_witness(E, generators, trials, seed, tol)
        if witness is not None:
            return witness
    return None


def _fails_or_unknown(route: Route, witness: Optional[Witness], **kwargs) -> PDecision:
    if witness is None:
        logging.warning("no verified witness on the %s route, verdict left unknown", route.value)
        return PDecision(Verdict.UNKNOWN, route, **kwargs)
    return PDecision(Verdict.FAILS, route, witness=witness, **kwargs)


def decide_p_dim2(
    E: EvolutionAlgebra, trials: int = DEFAULT_TRIALS, seed: int = 0, tol: Tolerance = DEFAULT_TOLERANCE
) -> PDecision:
    dim2 = classify_dim2(E, tol)
    if dim2.tag in _SATISFYING_DIM2:
        return PDecision(Verdict.SATISFIES, Route.DIM2, dim2=dim2)
    if dim2.tag in (Dim2Tag.E2, Dim2Tag.E3):
        candidates = [find_null_square(E, tol)]
    else:
        candidates = [x for x in find_idempotents(E, seed=seed, tol=tol) if full_support(x)]
    return _fails_or_unknown(Route.DIM2, _first_witness(E, candidates, trials, seed, tol), dim2=dim2)


def _chain_canonical_form(E: EvolutionAlgebra, order: Sequence[int], k: int, tol: Tolerance) -> CanonicalForm:
    """
    Bring a nilpotent algebra whose basis `order` puts the k nonzero-square
    rows first, in a chain with nonzero superdiagonal, to ZN^(k+1) ⊕ C^(n-k-1).
    """
    n = E.dim
    change = BasisChange.permutation(order)
    current = apply_basis_change(E, change, tol)

    # the last square becomes a basis vector of its own
    tail = current.matrix[k - 1]
    replaced = k + int(np.argmax(np.abs(tail[k:])))
    identity = np.eye(n, dtype=complex)
    rows = [identity[i] for i in range(k)] + [tail] + [identity[j] for j in range(k, n) if j != replaced]
    step = BasisChange(np.array(rows), natural=True)
    change, current = change.then(step), apply_basis_change(current, step, tol)

    # unit superdiagonal
    scalings = np.ones(n, dtype=complex)
    for i in range(k - 2, -1, -1):
        scalings[i] = np.sqrt(scalings[i + 1] / current.matrix[i, i + 1])
    step = BasisChange.scaling(scalings)
    change, current = change.then(step), apply_basis_change(current, step, tol)

    # clear columns k.. of rows 0..k-2 by adding square-zero vectors to e_1..e_k
    if k >= 2:
        mat = current.matrix
        shifts = scipy.linalg.solve_triangular(mat[: k - 1, 1:k], mat[: k - 1, k:], lower=False)
        rows = np.eye(n, dtype=complex)
        rows[1:k, k:] = shifts
        step = BasisChange(rows, natural=True)
        change, current = change.then(step), apply_basis_change(current, step, tol)

    snapped = np.where(np.abs(current.matrix) <= tol.threshold(current.scale), 0, current.matrix)
    snapped[np.arange(k), np.arange(1, k + 1)] = 1.0
    return CanonicalForm(k + 1, EvolutionAlgebra(snapped, name=E.name), change)


def is_canonical_zn(form: CanonicalForm, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    k = form.k
    mat = form.matrix.matrix
    if k and not is_zn_form(EvolutionAlgebra(mat[:k, :k]), tol):
        return False
    rest = mat.copy()
    rest[:k, :k] = 0
    return tol.is_zero(rest, form.matrix.scale)


def _broken_chain_candidates(
    E: EvolutionAlgebra, order: Sequence[int], positions: Iterable[int]
) -> Iterator[np.ndarray]:
    """span{e_t + e_(t+1), e_(t+2), ..} in `order`, for each link t with e_t² free of e_(t+1)"""
    identity = np.eye(E.dim, dtype=complex)
    for t in positions:
        yield np.array([identity[order[t]] + identity[order[t + 1]]] + [identity[j] for j in order[t + 2 :]])


def decide_p_nilpotent(
    E: EvolutionAlgebra, trials: int = DEFAULT_TRIALS, seed: int = 0, tol: Tolerance = DEFAULT_TOLERANCE
) -> PDecision:
    nilpotent, _ = is_nilpotent(E, tol)
    if not nilpotent:
        raise NotNilpotentError(f"{E!r} is not nilpotent")

    rows = _nonzero_rows(E, tol)
    k = len(rows)
    if k == 0:
        form = CanonicalForm(0, E, BasisChange.identity(E.dim))
        return PDecision(Verdict.SATISFIES, Route.NILPOTENT, canonical=form)

    lead_order = ProductDigraph.of(E, tol).restricted(rows).topological_order()
    lead = [rows[i] for i in lead_order]
    order = lead + [i for i in range(E.dim) if i not in rows]
    threshold = _row_threshold(E, tol)
    broken = [t for t in range(k - 1) if abs(E.matrix[lead[t], lead[t + 1]]) <= threshold]

    if rank(E.matrix, tol.eps) < k:
        candidates = itertools.chain(
            [_null_square_from_rows(E, rows, tol)], _broken_chain_candidates(E, order, reversed(broken))
        )
        return _fails_or_unknown(Route.NILPOTENT, _first_witness(E, candidates, trials, seed, tol))

    # independent nonzero rows: the chain ordering exists iff their digraph has a Hamiltonian path
    if broken:
        candidates = _broken_chain_candidates(E, order, reversed(broken))
        return _fails_or_unknown(Route.NILPOTENT, _first_witness(E, candidates, trials, seed, tol))

    form = _chain_canonical_form(E, order, k, tol)
    if not is_canonical_zn(form, tol):
        logging.warning("canonical form of %r failed the ZN shape check", E)
        return PDecision(Verdict.UNKNOWN, Route.NILPOTENT)
    return PDecision(Verdict.SATISFIES, Route.NILPOTENT, canonical=form)


def _permutation_candidates(report: DecompositionReport) -> List[np.ndarray]:
    T = report.witness.matrix
    rows = {}
    start = 0
    for index, block in enumerate(report.blocks):
        rows[index] = T[start : start + block.size]
        start += block.size

    candidates = []
    es1 = [rows[i] for i, b in enumerate(report.blocks) if b.kind == "ES" and b.size == 1]
    for i, block in enumerate(report.blocks):
        if block.kind == "ES" and block.size >= 2:
            # the sum of a cycle's vectors is idempotent
            candidates.append(rows[i].sum(axis=0))
    if len(es1) >= 2:
        candidates.append(es1[0][0] + es1[1][0])
    chains = [rows[i] for i, b in enumerate(report.blocks) if b.kind == "EN" and b.size >= 2]
    if len(chains) >= 2:
        f, g = chains[0], chains[1]
        offset = len(f) - len(g)
        candidates.append(np.array([f[offset + i] + g[i] for i in range(len(g))]))
    return candidates


def _decide_permutation(
    E: EvolutionAlgebra, report: DecompositionReport, trials: int, seed: int, tol: Tolerance
) -> PDecision:
    long_chains = [c for c in report.chains if c >= 2]
    if all(p == 1 for p in report.cycles) and len(report.cycles) <= 1 and len(long_chains) <= 1:
        return PDecision(Verdict.SATISFIES, Route.PERMUTATION, decomposition=report)
    witness = _first_witness(E, _permutation_candidates(report), trials, seed, tol)
    return _fails_or_unknown(Route.PERMUTATION, witness, decomposition=report)


def decide_p(
    E: EvolutionAlgebra,
    budget: int = DEFAULT_BUDGET,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> PDecision:
    if E.dim == 1:
        return PDecision(Verdict.SATISFIES, Route.DIM2)
    if E.dim == 2:
        return decide_p_dim2(E, trials, seed, tol)

    nilpotent, _ = is_nilpotent(E, tol)
    spec = spec_from_matrix(E, tol)
    if spec is not None:
        decision = _decide_permutation(E, decompose(spec, tol), trials, seed, tol)
        if decision.verdict == Verdict.SATISFIES and nilpotent:
            canonical = decide_p_nilpotent(E, trials, seed, tol).canonical
            decision = PDecision(
                decision.verdict, decision.route, canonical=canonical, decomposition=decision.decomposition
            )
        return decision
    if nilpotent:
        return decide_p_nilpotent(E, trials, seed, tol)

    logging.info("no exact route for %r, searching for a counterexample", E)
    candidates = [x for x in find_idempotents(E, budget, seed, tol) if magnitude(x) > 0]
    candidates.append(find_null_square(E, tol))
    witness = _first_witness(E, candidates, trials, seed, tol)
    if witness is None:
        return PDecision(Verdict.UNKNOWN, Route.HEURISTIC)
    return PDecision(Verdict.FAILS, Route.HEURISTIC, witness=witness)

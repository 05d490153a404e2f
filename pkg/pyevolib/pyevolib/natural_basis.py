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
Subspace analysis: which of the subalgebra conceptions a subspace satisfies.

A basis u_1..u_m of a subspace is natural when u_p·u_q = 0 for p != q. In
coordinates this asks for a basis diagonalizing, by congruence, the family of
symmetric forms B^(k)_pq = (u_p·u_q)_k at once.

The search reduces the family modulo its common radical (vectors whose
product with the whole subspace vanishes); on the remaining part a
diagonalizable family always has an invertible combination C, and the
eigenvectors of C^-1 D for a second combination D give the only candidate
basis up to the eigenspaces shared by every form, where any C-orthogonal basis
fits. Candidates are always re-verified.

A failed search only counts as proved when an exact test rules every basis
out: up to a reduced dimension of 3, an invertible combination is found
deterministically (or shown not to exist) and the commutation and
diagonalizability of the C^-1 D operators are checked directly.
"""

import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .algebra import DEFAULT_TOLERANCE, EvolutionAlgebra, Subspace, Tolerance, is_subalgebra, pairwise_products
from .errors import DimensionError
from .linalg import kernel, magnitude, rank, row_echelon

DEFAULT_TRIALS = 64

# Largest reduced dimension on which a failed search is settled by an exact test
EXACT_MAX_DIM = 3

_CLUSTER_TOL = 1e-6


class Certainty(enum.Enum):
    PROVED = "proved"
    HEURISTIC_ONLY = "heuristic-only"


class SubspaceKind(enum.Enum):
    NOT_SUBALGEBRA = "not-subalgebra"
    SUBALGEBRA_NO_NATURAL_BASIS = "subalgebra-no-natural-basis"
    EVOLUTION_SUBALGEBRA_NOT_EXTENDABLE = "evolution-subalgebra-not-extendable"
    EXTENDABLE_EVOLUTION_SUBALGEBRA = "extendable-evolution-subalgebra"


@dataclass(frozen=True, eq=False)
class Search:
    """
    Outcome of a basis search: `vectors` (one per row) when found. A missing
    result with PROVED certainty means no such basis exists, with
    HEURISTIC_ONLY it means the search was inconclusive.
    """

    vectors: Optional[np.ndarray]
    certainty: Certainty

    @property
    def found(self) -> bool:
        return self.vectors is not None

    @property
    def proved_none(self) -> bool:
        return self.vectors is None and self.certainty == Certainty.PROVED


@dataclass(frozen=True, eq=False)
class BilinearFamily:
    forms: np.ndarray  # (n, m, m)
    basis: np.ndarray  # (m, n), the vectors the forms are expressed on

    @property
    def m(self) -> int:
        return self.forms.shape[1]

    @property
    def n(self) -> int:
        return self.forms.shape[0]


@dataclass(frozen=True, eq=False)
class SubspaceClass:
    kind: SubspaceKind
    certainty: Certainty
    subspace: Subspace
    natural_basis: Optional[np.ndarray] = None
    extension: Optional[np.ndarray] = None

    @property
    def extendable(self) -> bool:
        return self.kind == SubspaceKind.EXTENDABLE_EVOLUTION_SUBALGEBRA

    @property
    def proved_non_extendable_subalgebra(self) -> bool:
        """A subalgebra shown not to be an evolution subalgebra in the extendable sense"""
        return self.certainty == Certainty.PROVED and self.kind in (
            SubspaceKind.SUBALGEBRA_NO_NATURAL_BASIS,
            SubspaceKind.EVOLUTION_SUBALGEBRA_NOT_EXTENDABLE,
        )


def _family_from_vectors(E: EvolutionAlgebra, vectors: np.ndarray) -> BilinearFamily:
    vectors = np.asarray(vectors, dtype=complex).reshape(-1, E.dim)
    m, n = vectors.shape
    forms = pairwise_products(E, vectors, vectors).reshape(m, m, n).transpose(2, 0, 1)
    forms = (forms + forms.transpose(0, 2, 1)) / 2
    return BilinearFamily(forms, vectors)


def restrict_product(E: EvolutionAlgebra, S: Subspace) -> BilinearFamily:
    if S.ambient_dim != E.dim:
        raise DimensionError(f"subspace lives in dimension {S.ambient_dim}, algebra has {E.dim}")
    return _family_from_vectors(E, S.basis)


def _unit_rows(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1)
    norms[norms == 0] = 1.0
    return rows / norms[:, None]


def _diagonalizes(forms: np.ndarray, rows: np.ndarray, eps: float) -> bool:
    if rows.shape[0] and rank(rows, eps) < rows.shape[0]:
        return False
    transformed = np.einsum("pi,kij,qj->kpq", rows, forms, rows)
    count = rows.shape[0]
    transformed[:, np.arange(count), np.arange(count)] = 0.0
    return magnitude(transformed) <= eps * max(magnitude(forms), 1.0)


def _symmetric_congruence(gram: np.ndarray, eps: float) -> np.ndarray:
    """Invertible P such that P^T·gram·P is diagonal (gram complex symmetric)"""
    size = gram.shape[0]
    g = gram.astype(complex).copy()
    P = np.eye(size, dtype=complex)
    threshold = eps * max(magnitude(gram), 1.0)

    def transform(step):
        nonlocal g, P
        g = step.T @ g @ step
        P = P @ step

    for k in range(size):
        block = g[k:, k:]
        if magnitude(block) <= threshold:
            break
        diag = np.abs(np.diag(block))
        if diag.max() <= threshold:
            # isotropic diagonal: v_i + v_j has square 2 g_ij
            off = np.abs(block) - np.diag(diag)
            i, j = np.unravel_index(int(np.argmax(off)), off.shape)
            step = np.eye(size, dtype=complex)
            step[k + j, k + i] = 1.0
            transform(step)
            diag = np.abs(np.diag(g[k:, k:]))
        pivot = k + int(np.argmax(diag))
        if pivot != k:
            step = np.eye(size, dtype=complex)[:, [pivot if c == k else k if c == pivot else c for c in range(size)]]
            transform(step)
        step = np.eye(size, dtype=complex)
        step[k, k + 1 :] = -g[k, k + 1 :] / g[k, k]
        transform(step)
    return P


def _pencil_candidate(C: np.ndarray, D: np.ndarray, eps: float) -> Optional[np.ndarray]:
    values, vectors = scipy.linalg.eig(scipy.linalg.solve(C, D))
    size = len(values)
    spread = max(magnitude(values), 1.0)
    unassigned = list(range(size))
    rows = []
    while unassigned:
        first = unassigned[0]
        group = [j for j in unassigned if abs(values[j] - values[first]) <= _CLUSTER_TOL * spread]
        unassigned = [j for j in unassigned if j not in group]
        block = vectors[:, group]
        if len(group) == 1:
            rows.append(block[:, 0])
            continue
        if rank(block.T, eps) < len(group):
            return None
        q, _ = np.linalg.qr(block)
        P = _symmetric_congruence(q.T @ C @ q, eps)
        rows.extend((q @ P).T)
    return _unit_rows(np.array(rows))


def _split_radical(forms: np.ndarray, eps: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Forms restricted to a complement of the common radical, that complement and the radical"""
    nb_forms, m, _ = forms.shape
    identity = np.eye(m, dtype=complex)
    radical = kernel(forms.reshape(nb_forms * m, m), eps, 1.0)
    if radical.shape[0]:
        radical, pivots = row_echelon(radical, eps)
    else:
        pivots = ()
    complement = identity[[i for i in range(m) if i not in pivots]]
    reduced = np.einsum("pi,kij,qj->kpq", complement, forms, complement)
    return reduced, complement, radical


def _congruence_basis(forms: np.ndarray, rng: np.random.Generator, trials: int, eps: float) -> Optional[np.ndarray]:
    """Rows forming a basis that diagonalizes every form, or None"""
    nb_forms, m, _ = forms.shape
    identity = np.eye(m, dtype=complex)
    if m == 0 or _diagonalizes(forms, identity, eps):
        return identity
    forms = forms / max(magnitude(forms), 1.0)
    reduced, complement, radical = _split_radical(forms, eps)
    size = complement.shape[0]

    singular_draws = 0
    for _ in range(trials):
        gamma = rng.standard_normal(nb_forms) + 1j * rng.standard_normal(nb_forms)
        delta = rng.standard_normal(nb_forms) + 1j * rng.standard_normal(nb_forms)
        C = np.tensordot(gamma, reduced, axes=1)
        D = np.tensordot(delta, reduced, axes=1)
        if rank(C, eps) < size:
            singular_draws += 1
            continue
        candidate = _pencil_candidate(C, D, eps)
        if candidate is not None and _diagonalizes(reduced, candidate, eps):
            return _unit_rows(np.vstack((candidate @ complement, radical)))

    if singular_draws == trials:
        logging.debug("degenerate pencil: every combination of the %d forms is singular", nb_forms)
    return None


def _invertible_combination(span: np.ndarray, eps: float) -> Optional[np.ndarray]:
    """
    Best conditioned combination of `span` with small integer coefficients,
    or None when every combination is singular.

    det(Σ c_k S_k) has degree at most `size` in each c_k, so unless it
    vanishes identically it is nonzero somewhere on the grid {0..size}^d.
    """
    size = span.shape[1]
    coeffs = np.array(list(itertools.product(range(size + 1), repeat=span.shape[0])), dtype=float)
    combinations = np.einsum("gk,kij->gij", coeffs, span)
    singular_values = np.linalg.svd(combinations, compute_uv=False)
    top = singular_values[:, 0]
    ratio = np.divide(singular_values[:, -1], top, out=np.zeros_like(top), where=top > 0)
    best = int(np.argmax(ratio))
    if ratio[best] <= eps:
        return None
    return combinations[best]


def _diagonalizable(X: np.ndarray) -> bool:
    values = scipy.linalg.eigvals(X)
    size = len(values)
    spread = max(magnitude(values), 1.0)
    unassigned = list(range(size))
    while unassigned:
        first = unassigned[0]
        group = [j for j in unassigned if abs(values[j] - values[first]) <= _CLUSTER_TOL * spread]
        unassigned = [j for j in unassigned if j not in group]
        center = values[group].mean()
        if size - rank(X - center * np.eye(size), _CLUSTER_TOL, spread) < len(group):
            return False
    return True


def _no_diagonal_basis(forms: np.ndarray, eps: float) -> bool:
    """
    Exact negative answer, for a reduced dimension of at most EXACT_MAX_DIM:
    True only when no basis diagonalizes every form.

    Modulo the common radical, a diagonalizable family has an invertible
    combination C (otherwise some basis vector would lie in the radical) and
    the operators C^-1 D are then diagonalizable and commute pairwise.
    """
    forms = forms / max(magnitude(forms), 1.0)
    reduced, complement, _ = _split_radical(forms, eps)
    size = complement.shape[0]
    if not 0 < size <= EXACT_MAX_DIM:
        return False
    nb_forms = reduced.shape[0]
    span = row_echelon(reduced.reshape(nb_forms, size * size), eps)[0].reshape(-1, size, size)
    C = _invertible_combination(span, eps)
    if C is None:
        return True

    operators = [scipy.linalg.solve(C, D) for D in span]
    for i, X in enumerate(operators):
        if not _diagonalizable(X):
            return True
        for Y in operators[i + 1 :]:
            if magnitude(X @ Y - Y @ X) > _CLUSTER_TOL * max(magnitude(X) * magnitude(Y), 1.0):
                return True
    return False


def find_diagonal_family(
    fam: BilinearFamily,
    count: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> Search:
    """
    Look for `count` independent vectors (coordinates on `fam.basis`) whose
    pairwise forms all vanish.
    """
    if not 0 <= count <= fam.m:
        raise ValueError(f"cannot find {count} vectors in a {fam.m}-dimensional subspace")
    if count == 0:
        return Search(np.zeros((0, fam.m), dtype=complex), Certainty.PROVED)

    rng = np.random.default_rng(seed)
    basis = _congruence_basis(fam.forms, rng, trials, tol.eps)
    if basis is None:
        exact = count == fam.m and _no_diagonal_basis(fam.forms, tol.eps)
        if not exact:
            logging.info("no pairwise-null basis found after %d trials (dimension %d)", trials, fam.m)
        return Search(None, Certainty.PROVED if exact else Certainty.HEURISTIC_ONLY)
    return Search(basis[:count], Certainty.PROVED)


def pairwise_null(E: EvolutionAlgebra, vectors: np.ndarray, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    vectors = np.asarray(vectors, dtype=complex).reshape(-1, E.dim)
    count = vectors.shape[0]
    products = pairwise_products(E, vectors, vectors).reshape(count, count, E.dim)
    products[np.arange(count), np.arange(count)] = 0.0
    return magnitude(products) <= tol.threshold(E.scale * magnitude(vectors) ** 2)


def find_natural_basis(
    E: EvolutionAlgebra,
    S: Subspace,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> Search:
    fam = restrict_product(E, S)
    result = find_diagonal_family(fam, fam.m, trials, seed, tol)
    if not result.found:
        return result
    vectors = result.vectors @ S.basis
    if not pairwise_null(E, vectors, tol):
        logging.warning("natural basis candidate failed re-verification, discarding it")
        return Search(None, Certainty.HEURISTIC_ONLY)
    return Search(vectors, Certainty.PROVED)


def annihilator(E: EvolutionAlgebra, vectors, tol: Tolerance = DEFAULT_TOLERANCE) -> Subspace:
    """{z : f·z = 0 for every given f}"""
    n = E.dim
    vectors = np.asarray(vectors, dtype=complex).reshape(-1, n)
    if vectors.shape[0] == 0:
        return Subspace.full(n)
    # f·z = z @ (diag(f) A)
    conditions = np.vstack([(f[:, None] * E.matrix).T for f in vectors])
    return Subspace.span(kernel(conditions, tol.eps, max(magnitude(conditions), 1.0)), n, tol)


def _complement_within(outer: Subspace, inner: Subspace, tol: Tolerance) -> np.ndarray:
    current = inner
    rows = []
    for row in outer.basis:
        if not current.contains(row, tol):
            rows.append(row)
            current = Subspace.span(np.vstack((current.basis, row)), outer.ambient_dim, tol)
    return np.array(rows, dtype=complex).reshape(-1, outer.ambient_dim)


def extend_to_natural_basis(
    E: EvolutionAlgebra,
    S: Subspace,
    F,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> Search:
    """
    Complete the natural basis F of S into a natural basis of E. The returned
    vectors are the n - m added ones.
    """
    n = E.dim
    F = np.asarray(F, dtype=complex).reshape(-1, n)
    m = S.rank
    if F.shape[0] != m or not S.contains_all(F, tol) or rank(F, tol.eps) < m:
        raise ValueError("F must be a basis of S")
    if not pairwise_null(E, F, tol):
        raise ValueError("F is not pairwise null")
    if m == n:
        return Search(np.zeros((0, n), dtype=complex), Certainty.PROVED)

    # W and W/(W ∩ S) only depend on S; products of W descend to the quotient
    W = annihilator(E, F, tol)
    common = W.intersection(S, tol)
    quotient_dim = W.rank - common.rank
    if quotient_dim < n - m:
        return Search(None, Certainty.PROVED)

    complement = _complement_within(W, common, tol)
    result = find_diagonal_family(_family_from_vectors(E, complement), quotient_dim, trials, seed, tol)
    if not result.found:
        return result
    extension = result.vectors @ complement
    full = np.vstack((F, extension))
    if rank(full, tol.eps) < n or not pairwise_null(E, full, tol):
        logging.warning("extension candidate failed re-verification, discarding it")
        return Search(None, Certainty.HEURISTIC_ONLY)
    return Search(extension, Certainty.PROVED)


def classify_subspace(
    E: EvolutionAlgebra,
    S: Subspace,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> SubspaceClass:
    if not is_subalgebra(E, S, tol):
        return SubspaceClass(SubspaceKind.NOT_SUBALGEBRA, Certainty.PROVED, S)

    natural = find_natural_basis(E, S, trials, seed, tol)
    if not natural.found:
        return SubspaceClass(SubspaceKind.SUBALGEBRA_NO_NATURAL_BASIS, natural.certainty, S)

    extension = extend_to_natural_basis(E, S, natural.vectors, trials, seed, tol)
    if extension.found:
        return SubspaceClass(
            SubspaceKind.EXTENDABLE_EVOLUTION_SUBALGEBRA,
            Certainty.PROVED,
            S,
            natural_basis=natural.vectors,
            extension=extension.vectors,
        )
    return SubspaceClass(
        SubspaceKind.EVOLUTION_SUBALGEBRA_NOT_EXTENDABLE,
        extension.certainty,
        S,
        natural_basis=natural.vectors,
    )


def classify_span(E: EvolutionAlgebra, vectors, **kwargs) -> SubspaceClass:
    tol = kwargs.get("tol", DEFAULT_TOLERANCE)
    return classify_subspace(E, Subspace.span(vectors, E.dim, tol), **kwargs)

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
Algebras E_{n,π}(a_1..a_n) with e_i·e_i = a_i e_{π(i)} and their splitting
into cyclic chains ES_p and terminating chains EN_k.
"""

import cmath
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    DEFAULT_TOLERANCE,
    BasisChange,
    EvolutionAlgebra,
    Tolerance,
    apply_basis_change,
    direct_sum,
    en,
    es,
)
from .errors import InvalidPermutationError
from .linalg import magnitude


@dataclass(frozen=True, eq=False)
class PermutationSpec:
    pi: Tuple[int, ...]  # 0-based images
    a: np.ndarray

    def __post_init__(self):
        pi = tuple(int(i) for i in self.pi)
        if sorted(pi) != list(range(len(pi))):
            raise InvalidPermutationError(f"{pi} is not a permutation of 0..{len(pi) - 1}")
        a = np.array(self.a, dtype=complex).reshape(-1)
        if a.shape[0] != len(pi):
            raise InvalidPermutationError(f"{a.shape[0]} coefficients for a permutation of {len(pi)} elements")
        if not np.isfinite(a).all():
            raise InvalidPermutationError("coefficients must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return len(self.pi)

    def cycles(self) -> List[List[int]]:
        seen = [False] * self.n
        cycles = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = []
            v = start
            while not seen[v]:
                seen[v] = True
                cycle.append(v)
                v = self.pi[v]
            cycles.append(cycle)
        return cycles


@dataclass(frozen=True)
class Block:
    kind: str  # "ES" or "EN"
    vertices: Tuple[int, ...]  # in chain order, e_{v_j}·e_{v_j} ∝ e_{v_{j+1}}

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    cycles: Tuple[int, ...]
    chains: Tuple[int, ...]
    blocks: Tuple[Block, ...]  # canonical order
    witness: BasisChange

    @property
    def n(self) -> int:
        return sum(self.cycles) + sum(self.chains)


def build(spec: PermutationSpec) -> EvolutionAlgebra:
    mat = np.zeros((spec.n, spec.n), dtype=complex)
    mat[np.arange(spec.n), list(spec.pi)] = spec.a
    return EvolutionAlgebra(mat)


def _active(spec: PermutationSpec, tol: Tolerance) -> List[bool]:
    threshold = tol.threshold(magnitude(spec.a))
    return [abs(c) > threshold for c in spec.a]


def _blocks(spec: PermutationSpec, tol: Tolerance) -> List[Block]:
    active = _active(spec, tol)
    blocks = []
    for cycle in spec.cycles():
        if all(active[v] for v in cycle):
            blocks.append(Block("ES", tuple(cycle)))
            continue
        # start right after an inactive vertex, cut after every inactive one
        last_inactive = max(j for j, v in enumerate(cycle) if not active[v])
        rotated = cycle[last_inactive + 1 :] + cycle[: last_inactive + 1]
        chain = []
        for v in rotated:
            chain.append(v)
            if not active[v]:
                blocks.append(Block("EN", tuple(chain)))
                chain = []
    # ES descending then EN descending, ties by smallest vertex
    return sorted(blocks, key=lambda b: (b.kind != "ES", -b.size, min(b.vertices)))


def _cycle_scalings(coeffs: Sequence[complex]) -> List[complex]:
    # λ_{j+1} = λ_j² a_j around the cycle forces λ_0^(2^p - 1) = Π a_j^-(2^(p-1-j))
    p = len(coeffs)
    log_product = sum(2 ** (p - 1 - j) * cmath.log(c) for j, c in enumerate(coeffs))
    scalings = [cmath.exp(-log_product / (2**p - 1))]
    for j in range(p - 1):
        scalings.append(scalings[j] ** 2 * coeffs[j])
    return scalings


def _chain_scalings(coeffs: Sequence[complex]) -> List[complex]:
    scalings = [1.0 + 0j]
    for c in coeffs[:-1]:
        scalings.append(scalings[-1] ** 2 * c)
    return scalings


def canonical_algebra(blocks: Sequence[Block]) -> EvolutionAlgebra:
    return direct_sum(*(es(b.size) if b.kind == "ES" else en(b.size) for b in blocks))


def realize_isomorphism(spec: PermutationSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> BasisChange:
    """
    Diagonal-times-permutation natural change taking build(spec) to the
    canonical direct sum of its ES/EN blocks with unit coefficients.
    """
    return _realize(spec, _blocks(spec, tol))


def _realize(spec: PermutationSpec, blocks: Sequence[Block]) -> BasisChange:
    mat = np.zeros((spec.n, spec.n), dtype=complex)
    row = 0
    for block in blocks:
        coeffs = [spec.a[v] for v in block.vertices]
        scalings = _cycle_scalings(coeffs) if block.kind == "ES" else _chain_scalings(coeffs)
        for v, scale in zip(block.vertices, scalings):
            mat[row, v] = scale
            row += 1
    return BasisChange(mat, natural=True)


def decompose(spec: PermutationSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> DecompositionReport:
    blocks = _blocks(spec, tol)
    witness = _realize(spec, blocks)
    return DecompositionReport(
        cycles=tuple(b.size for b in blocks if b.kind == "ES"),
        chains=tuple(b.size for b in blocks if b.kind == "EN"),
        blocks=tuple(blocks),
        witness=witness,
    )


def verification_error(spec: PermutationSpec, report: DecompositionReport, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Largest entrywise gap between the transformed algebra and the canonical sum"""
    transformed = apply_basis_change(build(spec), report.witness, tol)
    return magnitude(transformed.matrix - canonical_algebra(report.blocks).matrix)


def is_permutation_type(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    return spec_from_matrix(E, tol) is not None


def spec_from_matrix(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> Optional[PermutationSpec]:
    """
    Read E as some E_{n,π}: at most one non-negligible entry per row, the
    targets of the nonzero rows pairwise distinct. Zero rows get the unused
    targets with a zero coefficient.
    """
    n = E.dim
    support = np.abs(E.matrix) > tol.threshold(E.scale)
    pi: List[Optional[int]] = [None] * n
    a = np.zeros(n, dtype=complex)
    used = set()
    for i in range(n):
        cols = np.flatnonzero(support[i])
        if len(cols) > 1:
            return None
        if len(cols) == 1:
            target = int(cols[0])
            if target in used:
                return None
            used.add(target)
            pi[i] = target
            a[i] = E.matrix[i, target]
    # prefer fixed points for zero rows so that isolated vertices stay EN_1
    free = [k for k in range(n) if k not in used]
    for i in range(n):
        if pi[i] is None and i in free:
            pi[i] = i
            free.remove(i)
    for i in range(n):
        if pi[i] is None:
            pi[i] = free.pop(0)
    return PermutationSpec(tuple(pi), a)

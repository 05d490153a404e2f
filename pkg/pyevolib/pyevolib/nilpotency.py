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
import heapq
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import DEFAULT_TOLERANCE, EvolutionAlgebra, Subspace, Tolerance, pairwise_products
from .errors import CapExceededError


@dataclass(frozen=True)
class ProductDigraph:
    """Edge i -> k whenever e_i·e_i has a non-negligible e_k coordinate"""

    n: int
    successors: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> "ProductDigraph":
        support = np.abs(E.matrix) > tol.threshold(E.scale)
        return cls(E.dim, tuple(tuple(int(k) for k in np.flatnonzero(row)) for row in support))

    def restricted(self, vertices: Sequence[int]) -> "ProductDigraph":
        """Sub-digraph induced on `vertices`, relabeled 0..len-1 in the given order"""
        index = {v: i for i, v in enumerate(vertices)}
        return ProductDigraph(
            len(vertices),
            tuple(tuple(index[k] for k in self.successors[v] if k in index) for v in vertices),
        )

    def topological_order(self) -> Optional[List[int]]:
        """Smallest-index-first topological order, or None when there is a cycle (self-loops included)"""
        indegree = [0] * self.n
        for succ in self.successors:
            for k in succ:
                indegree[k] += 1
        ready = [v for v in range(self.n) if indegree[v] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for k in self.successors[v]:
                indegree[k] -= 1
                if indegree[k] == 0:
                    heapq.heappush(ready, k)
        return order if len(order) == self.n else None

    def has_unique_topological_order(self) -> bool:
        order = self.topological_order()
        if order is None:
            return False
        return all(order[i + 1] in self.successors[order[i]] for i in range(self.n - 1))


def is_nilpotent(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """
    An evolution algebra is nilpotent iff some permutation of its natural
    basis makes the structure matrix strictly upper triangular. The witness
    lists the old indices in their new order.
    """
    order = ProductDigraph.of(E, tol).topological_order()
    if order is None:
        return False, None
    return True, tuple(order)


class PowerStatus(enum.Enum):
    VANISHED = "vanished"
    STABLE = "stable"
    CAPPED = "capped"


@dataclass(frozen=True, eq=False)
class PowerSequence:
    """terms[k - 1] is E^k"""

    terms: Tuple[Subspace, ...]
    status: PowerStatus

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(term.rank for term in self.terms)


def subspace_product(E: EvolutionAlgebra, U: Subspace, V: Subspace, tol: Tolerance = DEFAULT_TOLERANCE) -> Subspace:
    if U.is_zero or V.is_zero:
        return Subspace.zero(E.dim)
    return Subspace.span(pairwise_products(E, U.basis, V.basis), E.dim, tol)


def power_sequence(E: EvolutionAlgebra, cap: int, tol: Tolerance = DEFAULT_TOLERANCE) -> PowerSequence:
    """
    E^1 = E, E^k = Σ_{i<k} E^i E^(k-i). The sequence is non-increasing, so a
    rank that stays constant and nonzero from k to 2k means it never vanishes.
    """
    terms = [Subspace.full(E.dim)]
    start = 1  # first exponent of the current run of equal ranks
    for k in range(2, cap + 1):
        products = [subspace_product(E, terms[i - 1], terms[k - i - 1], tol) for i in range(1, k // 2 + 1)]
        stacked = np.vstack([p.basis for p in products])
        term = Subspace.span(stacked, E.dim, tol)
        terms.append(term)
        if term.is_zero:
            return PowerSequence(tuple(terms), PowerStatus.VANISHED)
        if term.rank != terms[-2].rank:
            start = k
        elif k >= 2 * start:
            return PowerSequence(tuple(terms), PowerStatus.STABLE)
    return PowerSequence(tuple(terms), PowerStatus.CAPPED)


def nilpotency_index(E: EvolutionAlgebra, cap: int, tol: Tolerance = DEFAULT_TOLERANCE) -> Optional[int]:
    """
    Smallest k with E^k = 0, or None when the power sequence provably never
    vanishes. Raises CapExceededError when neither is settled by E^cap.
    """
    if cap < 2:
        raise ValueError(f"cap must be at least 2, got {cap}")
    seq = power_sequence(E, cap, tol)
    if seq.status == PowerStatus.VANISHED:
        return len(seq.terms)
    if seq.status == PowerStatus.STABLE:
        return None
    raise CapExceededError(cap)


def is_zn_form(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    n = E.dim
    mat = E.matrix
    threshold = tol.threshold(E.scale)
    if np.abs(np.tril(mat)).max() > threshold:
        return False
    superdiag = np.diagonal(mat, offset=1)
    if superdiag.size and np.abs(superdiag - 1.0).max() > threshold:
        return False
    if n >= 3 and np.abs(mat[: n - 2, n - 1]).max() > threshold:
        return False
    return True

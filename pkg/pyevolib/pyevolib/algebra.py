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
Value types for finite-dimensional complex evolution algebras and the
elementary operations on them.

An algebra is stored through its structure matrix A in a natural basis
e_1..e_n: row i holds the coordinates of e_i·e_i and e_i·e_j = 0 for i != j.
Elements are plain complex coordinate vectors.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .errors import DimensionError, NonFiniteError, NotNaturalError, SingularError
from .linalg import DEFAULT_EPS, kernel, magnitude, rank, row_echelon

Element = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if not (math.isfinite(self.eps) and self.eps > 0):
            raise ValueError(f"tolerance must be a positive finite number, got {self.eps}")

    def threshold(self, scale: float = 1.0) -> float:
        return self.eps * max(scale, 1.0)

    def is_zero(self, values, scale: float = 1.0) -> bool:
        return magnitude(values) <= self.threshold(scale)


DEFAULT_TOLERANCE = Tolerance()


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _finite_complex(values, what: str) -> np.ndarray:
    array = np.array(values, dtype=complex)
    if not np.isfinite(array).all():
        raise NonFiniteError(f"{what} has non-finite entries")
    return array


@dataclass(frozen=True, eq=False)
class EvolutionAlgebra:
    matrix: np.ndarray
    name: Optional[str] = None

    def __post_init__(self):
        mat = _finite_complex(self.matrix, "structure matrix")
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
            raise DimensionError(f"structure matrix must be square and non-empty, got shape {mat.shape}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]], name: Optional[str] = None) -> "EvolutionAlgebra":
        return cls(np.array(rows, dtype=complex), name=name)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def scale(self) -> float:
        return magnitude(self.matrix)

    def square(self, i: int) -> Element:
        return self.matrix[i].copy()

    def basis_vector(self, i: int) -> Element:
        vector = np.zeros(self.dim, dtype=complex)
        vector[i] = 1.0
        return vector

    def permuted(self, order: Sequence[int]) -> "EvolutionAlgebra":
        order = list(order)
        return EvolutionAlgebra(self.matrix[np.ix_(order, order)], name=self.name)

    def isclose(self, other: "EvolutionAlgebra", atol: float = 1e-9) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<EvolutionAlgebra{label} dim={self.dim}>"


def abelian(n: int) -> EvolutionAlgebra:
    return EvolutionAlgebra(np.zeros((n, n), dtype=complex), name=f"C^{n}")


def es(k: int) -> EvolutionAlgebra:
    """Cyclic chain e_i·e_i = e_{i+1}, e_k·e_k = e_1"""
    mat = np.zeros((k, k), dtype=complex)
    for i in range(k):
        mat[i, (i + 1) % k] = 1.0
    return EvolutionAlgebra(mat, name=f"ES_{k}")


def en(k: int) -> EvolutionAlgebra:
    """Terminating chain e_i·e_i = e_{i+1}, e_k·e_k = 0"""
    mat = np.zeros((k, k), dtype=complex)
    for i in range(k - 1):
        mat[i, i + 1] = 1.0
    return EvolutionAlgebra(mat, name=f"EN_{k}")


def as_element(coords, dim: int) -> Element:
    vector = _finite_complex(coords, "element").reshape(-1)
    if vector.shape[0] != dim:
        raise DimensionError(f"element has {vector.shape[0]} coordinates, expected {dim}")
    return vector


def multiply(E: EvolutionAlgebra, x, y) -> Element:
    x = as_element(x, E.dim)
    y = as_element(y, E.dim)
    return (x * y) @ E.matrix


def pairwise_products(E: EvolutionAlgebra, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """All products u·v for u a row of U and v a row of V, stacked as rows"""
    n = E.dim
    U = np.asarray(U, dtype=complex).reshape(-1, n)
    V = np.asarray(V, dtype=complex).reshape(-1, n)
    return (U[:, None, :] * V[None, :, :]).reshape(-1, n) @ E.matrix


def direct_sum(*algebras: EvolutionAlgebra) -> EvolutionAlgebra:
    if not algebras:
        raise DimensionError("direct sum of no algebra")
    names = [E.name for E in algebras]
    name = " + ".join(names) if all(names) else None
    return EvolutionAlgebra(scipy.linalg.block_diag(*(E.matrix for E in algebras)), name=name)


@dataclass(frozen=True, eq=False)
class Subspace:
    ambient_dim: int
    basis: np.ndarray
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, vectors, ambient_dim: int, tol: Tolerance = DEFAULT_TOLERANCE) -> "Subspace":
        vectors = np.array(vectors, dtype=complex).reshape(-1, ambient_dim)
        if not np.isfinite(vectors).all():
            raise NonFiniteError("spanning vectors have non-finite entries")
        reduced, pivots = row_echelon(vectors, tol.eps, max(magnitude(vectors), 1.0))
        return cls(ambient_dim, _frozen(reduced), pivots)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, _frozen(np.zeros((0, ambient_dim), dtype=complex)), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, _frozen(np.eye(ambient_dim, dtype=complex)), tuple(range(ambient_dim)))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def coordinates(self, vector) -> np.ndarray:
        """Coordinates of a member vector on the echelon basis"""
        return as_element(vector, self.ambient_dim)[list(self.pivots)]

    def lift(self, coords) -> Element:
        return np.asarray(coords, dtype=complex) @ self.basis

    def residual(self, vector) -> np.ndarray:
        vector = as_element(vector, self.ambient_dim)
        if self.is_zero:
            return vector
        return vector - self.coordinates(vector) @ self.basis

    def contains(self, vector, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        vector = as_element(vector, self.ambient_dim)
        return tol.is_zero(self.residual(vector), magnitude(vector))

    def contains_all(self, vectors, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        return all(self.contains(v, tol) for v in np.asarray(vectors).reshape(-1, self.ambient_dim))

    def sum(self, other: "Subspace", tol: Tolerance = DEFAULT_TOLERANCE) -> "Subspace":
        return Subspace.span(np.vstack((self.basis, other.basis)), self.ambient_dim, tol)

    def intersection(self, other: "Subspace", tol: Tolerance = DEFAULT_TOLERANCE) -> "Subspace":
        if self.is_zero or other.is_zero:
            return Subspace.zero(self.ambient_dim)
        # a·U = b·V  <=>  (a, b) in the kernel of [U^T | -V^T]
        system = np.hstack((self.basis.T, -other.basis.T))
        null = kernel(system, tol.eps, max(magnitude(system), 1.0))
        return Subspace.span(null[:, : self.rank] @ self.basis, self.ambient_dim, tol)

    def complement_basis(self) -> np.ndarray:
        """Standard basis vectors completing the echelon basis to the whole space"""
        free = [i for i in range(self.ambient_dim) if i not in self.pivots]
        return np.eye(self.ambient_dim, dtype=complex)[free]

    def equals(self, other: "Subspace", tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        return self.rank == other.rank and other.contains_all(self.basis, tol)

    def __repr__(self):
        return f"<Subspace rank={self.rank} ambient_dim={self.ambient_dim}>"


def closure(E: EvolutionAlgebra, generators, tol: Tolerance = DEFAULT_TOLERANCE) -> Subspace:
    """Smallest subalgebra containing the generators"""
    sub = Subspace.span(np.asarray(generators, dtype=complex).reshape(-1, E.dim), E.dim, tol)
    while not sub.is_zero:
        products = pairwise_products(E, sub.basis, sub.basis)
        grown = Subspace.span(np.vstack((sub.basis, products)), E.dim, tol)
        if grown.rank == sub.rank:
            break
        sub = grown
    return sub


def is_subalgebra(E: EvolutionAlgebra, S: Subspace, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    if S.ambient_dim != E.dim:
        raise DimensionError(f"subspace lives in dimension {S.ambient_dim}, algebra has {E.dim}")
    return S.contains_all(pairwise_products(E, S.basis, S.basis), tol)


def square_space(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> Subspace:
    """E·E, spanned by the rows of the structure matrix"""
    return Subspace.span(E.matrix, E.dim, tol)


def rank_of_structure_matrix(E: EvolutionAlgebra, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    return rank(E.matrix, tol.eps)


@dataclass(frozen=True, eq=False)
class BasisChange:
    """
    Rows of `matrix` are the new basis vectors f_i = Σ_j t_ij e_j. `natural`
    records whether f_i·f_j = 0 (i != j) was checked against an algebra.
    """

    matrix: np.ndarray
    natural: bool = False

    def __post_init__(self):
        mat = _finite_complex(self.matrix, "basis change")
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"basis change must be square, got shape {mat.shape}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @classmethod
    def identity(cls, n: int) -> "BasisChange":
        return cls(np.eye(n, dtype=complex), natural=True)

    @classmethod
    def permutation(cls, order: Sequence[int]) -> "BasisChange":
        """New vector i is the old e_{order[i]}"""
        return cls(np.eye(len(order), dtype=complex)[list(order)], natural=True)

    @classmethod
    def scaling(cls, factors) -> "BasisChange":
        return cls(np.diag(np.asarray(factors, dtype=complex)), natural=True)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "BasisChange":
        return BasisChange(scipy.linalg.inv(self.matrix), natural=self.natural)

    def then(self, other: "BasisChange") -> "BasisChange":
        """Apply self, then `other` expressed in the basis produced by self"""
        return BasisChange(other.matrix @ self.matrix, natural=self.natural and other.natural)


def _basis_change_matrix(T: Union[BasisChange, np.ndarray]) -> np.ndarray:
    return T.matrix if isinstance(T, BasisChange) else _finite_complex(T, "basis change")


def naturality_defect(E: EvolutionAlgebra, T: Union[BasisChange, np.ndarray]) -> float:
    """Largest off-diagonal product f_i·f_j"""
    mat = _basis_change_matrix(T)
    n = E.dim
    if mat.shape != (n, n):
        raise DimensionError(f"basis change has shape {mat.shape}, algebra has dimension {n}")
    products = pairwise_products(E, mat, mat).reshape(n, n, n)
    products[np.arange(n), np.arange(n)] = 0.0
    return magnitude(products)


def is_natural(E: EvolutionAlgebra, T: Union[BasisChange, np.ndarray], tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    mat = _basis_change_matrix(T)
    return naturality_defect(E, mat) <= tol.threshold(E.scale * magnitude(mat) ** 2)


def make_basis_change(E: EvolutionAlgebra, T, tol: Tolerance = DEFAULT_TOLERANCE) -> BasisChange:
    mat = _basis_change_matrix(T)
    return BasisChange(mat, natural=is_natural(E, mat, tol))


def apply_basis_change(
    E: EvolutionAlgebra, T: Union[BasisChange, np.ndarray], tol: Tolerance = DEFAULT_TOLERANCE
) -> EvolutionAlgebra:
    """
    Structure matrix in the basis f_i given by the rows of T: row i of the
    result holds f_i·f_i expressed in the f coordinates.
    """
    mat = _basis_change_matrix(T)
    n = E.dim
    if mat.shape != (n, n):
        raise DimensionError(f"basis change has shape {mat.shape}, algebra has dimension {n}")
    if rank(mat, tol.eps) < n:
        raise SingularError("basis change is singular")
    defect = naturality_defect(E, mat)
    if defect > tol.threshold(E.scale * magnitude(mat) ** 2):
        raise NotNaturalError(f"basis change is not natural (largest cross product {defect:g})")
    squares = (mat * mat) @ E.matrix
    # squares = A' T  <=>  T^T A'^T = squares^T
    new_matrix = scipy.linalg.solve(mat.T, squares.T).T
    return EvolutionAlgebra(new_matrix, name=E.name)

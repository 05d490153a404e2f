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
Tolerance-aware elimination shared by every module: row echelon form with
partial pivoting, numerical rank and kernels.
"""

from typing import Optional, Tuple

import numpy as np

DEFAULT_EPS = 1e-9


def _as_matrix(matrix) -> np.ndarray:
    mat = np.array(matrix, dtype=complex)
    if mat.ndim == 1:
        mat = mat.reshape(1, -1) if mat.size else mat.reshape(0, 0)
    if mat.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {mat.shape}")
    return mat


def magnitude(values) -> float:
    values = np.asarray(values)
    return float(np.abs(values).max()) if values.size else 0.0


def row_echelon(matrix, eps: float = DEFAULT_EPS, scale: Optional[float] = None) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """
    Reduced row echelon form of `matrix`.

    Pivots are picked by largest magnitude in their column; an entry counts as
    zero when its magnitude is at most `eps * scale`, `scale` defaulting to the
    largest magnitude of the input. Returns the nonzero rows (pivot entries
    equal to 1, pivot columns cleared elsewhere) and the pivot columns.
    """
    mat = _as_matrix(matrix).copy()
    nb_rows, nb_cols = mat.shape
    if scale is None:
        scale = magnitude(mat)
    if scale == 0.0:
        return np.zeros((0, nb_cols), dtype=complex), ()
    threshold = eps * scale

    pivots = []
    row = 0
    for col in range(nb_cols):
        if row == nb_rows:
            break
        pivot = row + int(np.argmax(np.abs(mat[row:, col])))
        if abs(mat[pivot, col]) <= threshold:
            continue
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        mat[row] /= mat[row, col]
        others = np.arange(nb_rows) != row
        mat[others] -= np.outer(mat[others, col], mat[row])
        mat[row, col] = 1.0
        mat[others, col] = 0.0
        pivots.append(col)
        row += 1

    return mat[:row], tuple(pivots)


def rank(matrix, eps: float = DEFAULT_EPS, scale: Optional[float] = None) -> int:
    return len(row_echelon(matrix, eps, scale)[1])


def kernel(matrix, eps: float = DEFAULT_EPS, scale: Optional[float] = None) -> np.ndarray:
    """Basis of {v : matrix @ v = 0}, one vector per row"""
    mat = _as_matrix(matrix)
    nb_cols = mat.shape[1]
    reduced, pivots = row_echelon(mat, eps, scale)
    free = [col for col in range(nb_cols) if col not in pivots]
    basis = np.zeros((len(free), nb_cols), dtype=complex)
    for i, col in enumerate(free):
        basis[i, col] = 1.0
        for j, pivot in enumerate(pivots):
            basis[i, pivot] = -reduced[j, col]
    return basis


def normalize_leading(vector: np.ndarray, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Scale `vector` so that its first non-negligible entry is 1"""
    vector = np.asarray(vector, dtype=complex)
    threshold = eps * max(magnitude(vector), 1e-300)
    for value in vector:
        if abs(value) > threshold:
            return vector / value
    return vector.copy()


def clean_zeros(values: np.ndarray) -> np.ndarray:
    """Replace negative zeros so that branch cuts see +0"""
    return np.asarray(values, dtype=complex) + 0j

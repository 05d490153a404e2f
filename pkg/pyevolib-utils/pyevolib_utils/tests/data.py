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

import numpy as np

import pyevolib as evo


def example_no_natural_basis():
    """A subalgebra without any natural basis"""
    E = evo.EvolutionAlgebra.from_rows([[1, 1, 0], [-1, -1, 0], [0, 1, 1]], name="no-natural-basis")
    return E, np.array([[1, 1, 0], [0, 1, 1]], dtype=complex)


def example_not_extendable():
    """An evolution subalgebra whose natural basis does not extend"""
    E = evo.EvolutionAlgebra.from_rows([[1, 1, 1], [-1, -1, 1], [0, 0, 0]], name="not-extendable")
    return E, np.array([[1, 1, 0], [0, 0, 1]], dtype=complex)


def example_two_chains():
    """E4 ⊕ E4, which fails condition P through the diagonal subalgebra"""
    E = evo.direct_sum(e4(), e4())
    return E, np.array([[1, 0, 1, 0], [0, 1, 0, 1]], dtype=complex)


# fmt: off
def e1(): return evo.EvolutionAlgebra.from_rows([[1, 0], [0, 0]], name="E1")
def e2(): return evo.EvolutionAlgebra.from_rows([[1, 0], [1, 0]], name="E2")
def e3(): return evo.EvolutionAlgebra.from_rows([[1, 1], [-1, -1]], name="E3")
def e4(): return evo.EvolutionAlgebra.from_rows([[0, 1], [0, 0]], name="E4")
# fmt: on


def e5(a2, a3):
    return evo.EvolutionAlgebra.from_rows([[1, a2], [a3, 1]], name="E5")


def e6(a4):
    return evo.EvolutionAlgebra.from_rows([[0, 1], [1, a4]], name="E6")


def random_complex(rng, shape=None):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_nonzero(rng, size, low=0.5, high=2.0):
    """Complex numbers with modulus in [low, high]"""
    return rng.uniform(low, high, size) * np.exp(2j * np.pi * rng.random(size))


def random_e5_params(rng):
    while True:
        a2, a3 = random_complex(rng, 2)
        if abs(1 - a2 * a3) > 0.1:
            return a2, a3


def random_natural_change(rng, n):
    """Nonzero diagonal scaling composed with a permutation"""
    order = rng.permutation(n)
    return evo.BasisChange.permutation(order).then(evo.BasisChange.scaling(random_nonzero(rng, n)))


def scramble(E, rng):
    change = random_natural_change(rng, E.dim)
    return evo.apply_basis_change(E, change), change


def random_zn(rng, k):
    """Member of ZN^k: unit superdiagonal, free entries above it except in the last column"""
    mat = np.zeros((k, k), dtype=complex)
    for i in range(k - 1):
        mat[i, i + 1] = 1
        for j in range(i + 2, k - 1):
            mat[i, j] = random_complex(rng)
    return evo.EvolutionAlgebra(mat, name=f"ZN^{k}")


def random_nilpotent(rng, n, density=0.5):
    """Strictly upper triangular with random support, then a random relabeling"""
    mat = np.triu(random_complex(rng, (n, n)), 1)
    mat[rng.random((n, n)) > density] = 0
    order = rng.permutation(n)
    return evo.EvolutionAlgebra(mat).permuted(order)


def random_algebra(rng, n, density=0.5):
    mat = random_complex(rng, (n, n))
    mat[rng.random((n, n)) > density] = 0
    return evo.EvolutionAlgebra(mat)


def broken_chain(rng, k, n):
    """
    Nilpotent algebra whose k nonzero squares are independent but admit no
    ordering with a nonzero superdiagonal
    """
    assert 2 <= k < n
    mat = np.triu(random_nonzero(rng, (n, n)), 1)
    mat[k:] = 0
    t = int(rng.integers(0, k - 1))
    mat[t, t + 1] = 0
    return evo.EvolutionAlgebra(mat)


def rank_deficient_nilpotent(rng, k, n):
    """Nilpotent algebra with k nonzero squares spanning a space of dimension k - 1"""
    assert 2 <= k < n
    mat = np.zeros((n, n), dtype=complex)
    # the squares all live in the span of the zero-square vectors
    mat[:k, k:] = random_complex(rng, (k, n - k))
    if n - k >= k:
        coeffs = random_nonzero(rng, k - 1)
        mat[k - 1, k:] = coeffs @ mat[: k - 1, k:]
    return evo.EvolutionAlgebra(mat)

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
import pytest
from pyevolib_utils.tests.data import example_no_natural_basis, example_not_extendable, example_two_chains

import pyevolib as evo


def natural_basis_restricted_family():
    E, vectors = example_no_natural_basis()
    S = evo.Subspace.span(vectors, 3)
    fam = evo.restrict_product(E, S)
    assert fam.m == 2 and fam.n == 3
    assert np.array_equal(fam.forms, fam.forms.transpose(0, 2, 1))
    u, v = S.basis
    for p, x in enumerate((u, v)):
        for q, y in enumerate((u, v)):
            assert np.allclose(fam.forms[:, p, q], evo.multiply(E, x, y))


def natural_basis_no_natural_basis():
    E, vectors = example_no_natural_basis()
    fam = evo.restrict_product(E, evo.Subspace.span(vectors, 3))
    result = evo.find_diagonal_family(fam, 2)
    assert not result.found
    assert result.proved_none


def natural_basis_exhausted_search_not_proved():
    # [[0, 1], [1, 0]] is diagonalized by (1, 1), (1, -1), which a search with no draws never reaches
    hyperbolic = np.array([[[0, 1], [1, 0]]], dtype=complex)
    fam = evo.BilinearFamily(hyperbolic, np.eye(2, dtype=complex))
    result = evo.find_diagonal_family(fam, 2, trials=0)
    assert not result.found
    assert result.certainty == evo.Certainty.HEURISTIC_ONLY
    assert evo.find_diagonal_family(fam, 2).found


@pytest.mark.parametrize(
    "forms",
    [
        # C^-1 A nilpotent for every invertible combination C
        [[[1, 0], [0, 0]], [[0, 1], [1, 0]]],
        # every combination singular, no common radical
        [[[0, 1, 0], [1, 0, 0], [0, 0, 0]], [[0, 0, 1], [0, 0, 0], [1, 0, 0]]],
        # invertible pencil whose operators do not commute
        [np.eye(3), np.diag([1, 2, 3]), [[0, 1, 1], [1, 0, 1], [1, 1, 0]]],
    ],
)
def natural_basis_exact_negative(forms):
    forms = np.array(forms, dtype=complex)
    fam = evo.BilinearFamily(forms, np.eye(forms.shape[1], dtype=complex))
    for trials in (0, 64):
        result = evo.find_diagonal_family(fam, fam.m, trials=trials)
        assert result.proved_none


def natural_basis_found():
    E, vectors = example_not_extendable()
    S = evo.Subspace.span(vectors, 3)
    result = evo.find_natural_basis(E, S)
    assert result.found
    assert evo.Subspace.span(result.vectors, 3).equals(S)
    assert np.allclose(evo.multiply(E, result.vectors[0], result.vectors[1]), 0)


def natural_basis_two_chains_diagonal():
    E, vectors = example_two_chains()
    result = evo.find_natural_basis(E, evo.Subspace.span(vectors, 4))
    assert result.found


def natural_basis_random_recovery():
    rng = np.random.default_rng(3)
    for m in range(1, 5):
        for _ in range(5):
            n = m + 2
            E = evo.EvolutionAlgebra(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
            # span of the first m vectors of the natural basis
            vectors = np.eye(n)[:m]
            mixed = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) @ vectors
            S = evo.Subspace.span(mixed, n)
            result = evo.find_natural_basis(E, S, seed=int(rng.integers(1000)))
            assert result.found
            assert evo.Subspace.span(result.vectors, n).equals(S)


def natural_basis_extension_not_possible():
    E, vectors = example_not_extendable()
    S = evo.Subspace.span(vectors, 3)
    result = evo.extend_to_natural_basis(E, S, vectors)
    assert result.proved_none


def natural_basis_extension_two_chains():
    E, vectors = example_two_chains()
    S = evo.Subspace.span(vectors, 4)
    W = evo.annihilator(E, vectors)
    assert W.equals(evo.Subspace.span([[0, 1, 0, 0], [0, 0, 0, 1]], 4))
    assert evo.extend_to_natural_basis(E, S, vectors).proved_none


def natural_basis_extension_found():
    E = evo.direct_sum(evo.es(1), evo.en(2))
    vectors = np.array([[0, 1, 0], [0, 0, 1]], dtype=complex)
    S = evo.Subspace.span(vectors, 3)
    result = evo.extend_to_natural_basis(E, S, vectors)
    assert result.found
    full = np.vstack((vectors, result.vectors))
    assert np.linalg.matrix_rank(full) == 3
    assert evo.is_natural(E, full)


def natural_basis_extension_bad_input():
    E, vectors = example_not_extendable()
    S = evo.Subspace.span(vectors, 3)
    with pytest.raises(ValueError):
        evo.extend_to_natural_basis(E, S, vectors[:1])
    E, vectors = example_no_natural_basis()
    with pytest.raises(ValueError):
        evo.extend_to_natural_basis(E, evo.Subspace.span(vectors, 3), vectors)


@pytest.mark.parametrize(
    "fixture, kind",
    [
        (example_no_natural_basis, evo.SubspaceKind.SUBALGEBRA_NO_NATURAL_BASIS),
        (example_not_extendable, evo.SubspaceKind.EVOLUTION_SUBALGEBRA_NOT_EXTENDABLE),
        (example_two_chains, evo.SubspaceKind.EVOLUTION_SUBALGEBRA_NOT_EXTENDABLE),
    ],
)
def natural_basis_classify_fixtures(fixture, kind):
    E, vectors = fixture()
    cls = evo.classify_span(E, vectors)
    assert cls.kind == kind
    assert cls.certainty == evo.Certainty.PROVED
    assert cls.proved_non_extendable_subalgebra


def natural_basis_classify_not_subalgebra():
    E, _ = example_no_natural_basis()
    cls = evo.classify_span(E, [[1, 0, 0]])
    assert cls.kind == evo.SubspaceKind.NOT_SUBALGEBRA
    assert not cls.proved_non_extendable_subalgebra


def natural_basis_classify_extendable():
    E = evo.direct_sum(evo.es(1), evo.abelian(2))
    cls = evo.classify_span(E, [[1, 0, 0]])
    assert cls.extendable
    assert evo.is_natural(E, np.vstack((cls.natural_basis, cls.extension)))


def natural_basis_extension_independent_of_basis():
    rng = np.random.default_rng(4)
    E = evo.direct_sum(evo.es(1), evo.abelian(3))
    vectors = np.array([[0, 1, 0, 0], [0, 0, 1, 0]], dtype=complex)
    S = evo.Subspace.span(vectors, 4)
    for _ in range(5):
        mixed = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) @ vectors
        assert evo.extend_to_natural_basis(E, S, mixed).found

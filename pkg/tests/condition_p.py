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

import itertools

import numpy as np
import pytest
from pyevolib_utils.tests.data import (
    broken_chain,
    e1,
    e2,
    e3,
    e4,
    e5,
    e6,
    random_complex,
    random_e5_params,
    random_zn,
    rank_deficient_nilpotent,
    scramble,
)

import pyevolib as evo


def _assert_proved_fails(decision):
    assert decision.verdict == evo.Verdict.FAILS
    assert decision.witness is not None
    assert decision.witness.classification.proved_non_extendable_subalgebra


def _assert_canonical(E, form):
    assert evo.is_zn_form(evo.EvolutionAlgebra(form.matrix.matrix[: form.k, : form.k]))
    assert form.change.natural
    assert evo.apply_basis_change(E, form.change).isclose(form.matrix, atol=1e-9)


@pytest.mark.parametrize(
    "make, tag",
    [
        (lambda: evo.abelian(2), evo.Dim2Tag.ABELIAN),
        (e1, evo.Dim2Tag.E1),
        (e2, evo.Dim2Tag.E2),
        (e3, evo.Dim2Tag.E3),
        (e4, evo.Dim2Tag.E4),
        (lambda: e5(2, 3), evo.Dim2Tag.E5),
        (lambda: e6(0.5), evo.Dim2Tag.E6),
        (lambda: e6(0), evo.Dim2Tag.E6),
    ],
)
def condition_p_classify_dim2(make, tag):
    assert evo.classify_dim2(make()).tag == tag


def condition_p_classify_dim2_scrambled():
    rng = np.random.default_rng(0)
    for E in (e1(), e2(), e3(), e4()):
        for _ in range(5):
            scrambled, _ = scramble(E, rng)
            assert evo.classify_dim2(scrambled).tag == evo.classify_dim2(E).tag


def condition_p_e5_parameters():
    rng = np.random.default_rng(1)
    for _ in range(10):
        a2, a3 = random_e5_params(rng)
        scrambled, _ = scramble(e5(a2, a3), rng)
        cls = evo.classify_dim2(scrambled)
        assert cls.tag == evo.Dim2Tag.E5
        p2, p3 = cls.params
        assert np.allclose((p2, p3), (a2, a3)) or np.allclose((p2, p3), (a3, a2))


def condition_p_e6_parameter():
    rng = np.random.default_rng(2)
    for _ in range(10):
        a4 = random_complex(rng)
        scrambled, _ = scramble(e6(a4), rng)
        cls = evo.classify_dim2(scrambled)
        assert cls.tag == evo.Dim2Tag.E6
        # defined up to a cube root of unity, the representative is canonical
        assert np.isclose(cls.params[0] ** 3, a4**3)
        assert abs(cls.params[0] - evo.classify_dim2(e6(a4)).params[0]) <= 1e-8 * max(abs(a4), 1.0)


def condition_p_classify_dim2_wrong_dimension():
    with pytest.raises(evo.DimensionError):
        evo.classify_dim2(evo.en(3))


def condition_p_null_square():
    x = evo.find_null_square(e2())
    assert np.allclose(x, [1, 1j])
    assert np.allclose(evo.find_null_square(e3()), [1, 1])
    assert np.array_equal(evo.find_null_square(e1()), [0, 1])
    assert evo.find_null_square(evo.es(3)) is None


def condition_p_null_square_dependent_rows():
    E = evo.EvolutionAlgebra.from_rows([[1, 1, 0], [-1, -1, 0], [0, 1, 1]])
    x = evo.find_null_square(E)
    assert np.allclose(x, [1, 1, 0])
    assert np.allclose(evo.multiply(E, x, x), 0)


def condition_p_idempotents_dim2():
    points = evo.find_idempotents(e1())
    assert len(points) == 2
    assert not np.any(points[0])
    assert np.allclose(points[1], [1, 0])

    rng = np.random.default_rng(3)
    E = e5(*random_e5_params(rng))
    points = evo.find_idempotents(E)
    assert not np.any(points[0])
    assert len(points) >= 2
    for x in points:
        assert np.allclose(evo.multiply(E, x, x), x, atol=1e-8)


def condition_p_idempotents_cycle():
    E = evo.es(3)
    points = evo.find_idempotents(E, budget=128)
    assert not np.any(points[0])
    assert len(points) >= 2
    for x in points:
        assert np.allclose(evo.multiply(E, x, x), x, atol=1e-8)


@pytest.mark.parametrize("make", [lambda: evo.abelian(2), e1, e4])
def condition_p_dim2_satisfies(make):
    decision = evo.decide_p(make())
    assert decision.verdict == evo.Verdict.SATISFIES
    assert decision.route == evo.Route.DIM2
    assert decision.exact


@pytest.mark.parametrize("make", [e2, e3, lambda: e5(2, 3), lambda: e5(0.5j, 1 + 1j), lambda: e6(0.5), lambda: e6(0)])
def condition_p_dim2_fails(make):
    decision = evo.decide_p(make())
    _assert_proved_fails(decision)
    assert decision.route == evo.Route.DIM2


def condition_p_dim2_witness():
    decision = evo.decide_p(e2())
    assert decision.witness.subspace.equals(evo.Subspace.span([[1, 1j]], 2))
    assert decision.witness.classification.kind == evo.SubspaceKind.EVOLUTION_SUBALGEBRA_NOT_EXTENDABLE


def condition_p_dim1():
    decision = evo.decide_p(evo.es(1))
    assert decision.verdict == evo.Verdict.SATISFIES


def condition_p_nilpotent_chain():
    E = evo.en(4)
    decision = evo.decide_p_nilpotent(E)
    assert decision.verdict == evo.Verdict.SATISFIES
    assert decision.canonical.k == 4
    _assert_canonical(E, decision.canonical)


def condition_p_nilpotent_abelian():
    decision = evo.decide_p_nilpotent(evo.abelian(3))
    assert decision.verdict == evo.Verdict.SATISFIES
    assert decision.canonical.k == 0


def condition_p_nilpotent_scrambled_zn():
    rng = np.random.default_rng(4)
    for k in range(2, 6):
        for extra in range(3):
            E = evo.direct_sum(random_zn(rng, k), evo.abelian(extra)) if extra else random_zn(rng, k)
            scrambled, _ = scramble(E, rng)
            decision = evo.decide_p_nilpotent(scrambled)
            assert decision.verdict == evo.Verdict.SATISFIES
            assert decision.canonical.k == k
            _assert_canonical(scrambled, decision.canonical)


def condition_p_nilpotent_two_chains():
    _assert_proved_fails(evo.decide_p_nilpotent(evo.direct_sum(e4(), e4())))


def condition_p_nilpotent_dependent_squares():
    E = evo.EvolutionAlgebra.from_rows([[0, 0, 1], [0, 0, 1], [0, 0, 0]])
    decision = evo.decide_p_nilpotent(E)
    _assert_proved_fails(decision)
    assert decision.witness.subspace.equals(evo.Subspace.span([[1, 1j, 0]], 3))


@pytest.mark.parametrize("make", [broken_chain, rank_deficient_nilpotent])
def condition_p_nilpotent_random_failures(make):
    rng = np.random.default_rng(5)
    shapes = [(k, n) for n in range(3, 8) for k in range(2, n)]
    assert (6, 7) in shapes
    for _ in range(10):
        for k, n in shapes:
            _assert_proved_fails(evo.decide_p_nilpotent(make(rng, k, n)))


def condition_p_nilpotent_rank_deficient_broken_chain():
    rng = np.random.default_rng(11)
    for _ in range(20):
        E = broken_chain(rng, 6, 7)
        assert evo.rank_of_structure_matrix(E) == 5
        decision = evo.decide_p_nilpotent(E)
        _assert_proved_fails(decision)
        assert decision.route == evo.Route.NILPOTENT


def condition_p_nilpotent_rejects_cycle():
    with pytest.raises(evo.NotNilpotentError):
        evo.decide_p_nilpotent(evo.es(3))


@pytest.mark.parametrize(
    "blocks",
    [
        (evo.es(1), evo.en(2), evo.abelian(1)),
        (evo.en(3), evo.abelian(2)),
        (evo.es(1), evo.abelian(2)),
    ],
)
def condition_p_permutation_satisfies(blocks):
    decision = evo.decide_p(evo.direct_sum(*blocks))
    assert decision.verdict == evo.Verdict.SATISFIES
    assert decision.route == evo.Route.PERMUTATION


@pytest.mark.parametrize(
    "blocks",
    [
        (evo.es(3),),
        (evo.es(2), evo.abelian(1)),
        (evo.es(1), evo.es(1), evo.abelian(1)),
        (evo.en(2), evo.en(2)),
        (evo.en(3), evo.en(2)),
    ],
)
def condition_p_permutation_fails(blocks):
    decision = evo.decide_p(evo.direct_sum(*blocks))
    _assert_proved_fails(decision)
    assert decision.route == evo.Route.PERMUTATION
    assert decision.decomposition is not None


def condition_p_permutation_scaled():
    rng = np.random.default_rng(6)
    spec = evo.PermutationSpec((1, 2, 0, 4, 3), random_complex(rng, 5))
    _assert_proved_fails(evo.decide_p(evo.build(spec)))


def condition_p_nilpotent_route():
    rng = np.random.default_rng(7)
    E, _ = scramble(evo.direct_sum(random_zn(rng, 4), evo.abelian(1)), rng)
    decision = evo.decide_p(E)
    assert decision.route == evo.Route.NILPOTENT
    assert decision.verdict == evo.Verdict.SATISFIES
    _assert_canonical(E, decision.canonical)


def condition_p_permutation_nilpotent_canonical():
    decision = evo.decide_p(evo.en(4))
    assert decision.route == evo.Route.PERMUTATION
    assert decision.canonical is not None and decision.canonical.k == 4


def condition_p_heuristic():
    rng = np.random.default_rng(8)
    E = evo.EvolutionAlgebra(random_complex(rng, (3, 3)))
    decision = evo.decide_p(E)
    assert decision.route == evo.Route.HEURISTIC
    assert not decision.exact
    _assert_proved_fails(decision)


def _satisfying_instances(rng):
    """Exact-route algebras with condition P: dimension 2 and scrambled ZN^k ⊕ C^extra"""
    yield from (evo.abelian(2), e1(), e4())
    for k in range(2, 6):
        for extra in range(3):
            E = evo.direct_sum(random_zn(rng, k), evo.abelian(extra)) if extra else random_zn(rng, k)
            yield scramble(E, rng)[0]


def condition_p_abelian_summand():
    rng = np.random.default_rng(12)
    for E in _satisfying_instances(rng):
        decision = evo.decide_p(E)
        assert decision.verdict == evo.Verdict.SATISFIES and decision.exact
        for k in (1, 2, 3):
            extended = evo.decide_p(evo.direct_sum(E, evo.abelian(k)))
            assert extended.verdict == evo.Verdict.SATISFIES
            assert extended.exact


def condition_p_summands_of_satisfying_sum():
    rng = np.random.default_rng(13)
    pool = [
        evo.abelian(1),
        evo.abelian(2),
        e1(),
        e4(),
        scramble(random_zn(rng, 3), rng)[0],
        scramble(evo.direct_sum(random_zn(rng, 4), evo.abelian(1)), rng)[0],
        e2(),
        e3(),
        e5(*random_e5_params(rng)),
        e6(random_complex(rng)),
    ]
    verdicts = [evo.decide_p(E).verdict for E in pool]
    satisfied = 0
    for i, j in itertools.combinations_with_replacement(range(len(pool)), 2):
        decision = evo.decide_p(evo.direct_sum(pool[i], pool[j]))
        if decision.verdict == evo.Verdict.SATISFIES:
            assert decision.exact
            assert verdicts[i] == verdicts[j] == evo.Verdict.SATISFIES
            satisfied += 1
    assert satisfied >= 5


def _e5_cubic(a2, a3):
    # A1 (d A1 + 1)² = a3 (1 - A1) with d = a2 a3 - 1, A1 the first coordinate of a full-support idempotent
    d = a2 * a3 - 1
    return [d**2, 2 * d, 1 + a3, -a3]


def condition_p_e5_idempotents_cubic():
    rng = np.random.default_rng(14)
    for _ in range(100):
        a2, a3 = random_e5_params(rng)
        E = e5(a2, a3)
        cubic = _e5_cubic(a2, a3)
        full = [x for x in evo.find_idempotents(E) if np.abs(x).min() > 1e-6]
        assert full
        for x in full:
            assert np.abs(evo.multiply(E, x, x) - x).max() <= 1e-9 * max(np.abs(x).max() ** 2, 1.0)
            t = x[0]
            assert abs(np.polyval(cubic, t)) <= 1e-8 * np.polyval(np.abs(cubic), abs(t))


def _closed_form_shifts(A, k):
    """
    e_j'' = e_j + Σ_{i>k+1} c_ji e_i (1-based, 2 <= j <= k) for an algebra
    already normalized to a unit superdiagonal and e_k² = e_(k+1)
    """
    n = A.shape[0]

    def a(i, j):
        return A[i - 1, j - 1]

    rows = np.eye(n, dtype=complex)
    for j in range(2, k + 1):
        for i in range(k + 2, n + 1):
            coeff = a(j - 1, i)
            for t in range(j, k):
                alternating = sum(
                    (-1) ** p * np.prod([a(j - 2 + h, t + 1 - p + h) for h in range(1, p + 1)])
                    for p in range(1, t - j + 2)
                )
                coeff += a(t, i) * alternating
            rows[j - 1, i - 1] = coeff
    return rows


def _normalized_chain(rng, k, n):
    mat = np.zeros((n, n), dtype=complex)
    for i in range(k):
        mat[i, i + 1] = 1
        if i < k - 1:
            mat[i, i + 2 :] = random_complex(rng, n - i - 2)
    return mat


def condition_p_nilpotent_elimination_closed_form():
    rng = np.random.default_rng(15)
    for k in range(2, 5):
        for n in range(k + 2, k + 4):
            mat = _normalized_chain(rng, k, n)
            E = evo.EvolutionAlgebra(mat)
            decision = evo.decide_p_nilpotent(E)
            assert decision.verdict == evo.Verdict.SATISFIES
            _assert_canonical(E, decision.canonical)
            # the canonical form also clears column k+1, the columns after it must agree
            expected = _closed_form_shifts(mat, k)
            assert np.allclose(decision.canonical.change.matrix[:, k + 1 :], expected[:, k + 1 :], rtol=0, atol=1e-9)
            reduced = evo.apply_basis_change(E, evo.BasisChange(expected)).matrix
            assert np.abs(reduced[:k, k + 1 :]).max() <= 1e-9


def condition_p_nilpotent_elimination_closed_form_long_chain():
    # from five nonzero squares on, the alternating sum misses paths and leaves entries behind
    mat = _normalized_chain(np.random.default_rng(16), 5, 7)
    reduced = evo.apply_basis_change(evo.EvolutionAlgebra(mat), evo.BasisChange(_closed_form_shifts(mat, 5))).matrix
    assert np.abs(reduced[:5, 6:]).max() > 1e-6
    decision = evo.decide_p_nilpotent(evo.EvolutionAlgebra(mat))
    assert decision.verdict == evo.Verdict.SATISFIES
    assert np.abs(decision.canonical.matrix.matrix[:5, 6:]).max() == 0

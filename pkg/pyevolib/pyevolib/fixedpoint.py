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
Quadratic fixed-point systems x_i² = (Mx)_i and their solvers.

The system has at most 2^n isolated roots and none at infinity, so tracking
the 2^n roots of x_i² = x_i along a complex-phase deformation reaches all of
them for generic M.
"""

import cmath
import itertools
import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import EvolutionAlgebra
from .errors import DimensionError, NonFiniteError, SingularError
from .linalg import rank


@dataclass(frozen=True)
class FixedPointConfig:
    residual_tol: float = 1e-9
    dedup_tol: float = 1e-6
    support_eps: float = 1e-6
    initial_step: float = 0.01
    max_step: float = 0.05
    min_step: float = 1e-6
    corrector_iterations: int = 4
    seed: int = 0

    def __post_init__(self):
        for name in ("residual_tol", "dedup_tol", "support_eps", "initial_step", "max_step", "min_step"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value}")
        if not self.min_step <= self.initial_step <= self.max_step:
            raise ValueError("expected min_step <= initial_step <= max_step")
        if self.corrector_iterations < 1:
            raise ValueError("at least one corrector iteration is required")


DEFAULT_CONFIG = FixedPointConfig()


@dataclass(frozen=True, eq=False)
class FixedPointSystem:
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
            raise DimensionError(f"fixed-point matrix must be square and non-empty, got shape {mat.shape}")
        if not np.isfinite(mat).all():
            raise NonFiniteError("fixed-point matrix has non-finite entries")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return x * x - self.matrix @ x

    def residual(self, x: np.ndarray) -> float:
        return float(np.abs(self.evaluate(x)).max())

    def accepts(self, x: np.ndarray, cfg: FixedPointConfig = DEFAULT_CONFIG) -> bool:
        return self.residual(x) <= cfg.residual_tol * max(1.0, float(np.abs(x).max()) ** 2)


@dataclass(frozen=True, eq=False)
class SolutionSet:
    roots: Tuple[np.ndarray, ...]
    path_failures: int = 0
    support_eps: float = DEFAULT_CONFIG.support_eps

    @property
    def full_support(self) -> List[np.ndarray]:
        return [x for x in self.roots if float(np.abs(x).min()) > self.support_eps]

    def __len__(self):
        return len(self.roots)


def _newton(system: FixedPointSystem, x: np.ndarray, iterations: int = 20) -> np.ndarray:
    M = system.matrix
    for _ in range(iterations):
        try:
            delta = np.linalg.solve(2 * np.diag(x) - M, system.evaluate(x))
        except np.linalg.LinAlgError:
            break
        x = x - delta
        if np.abs(delta).max() <= 1e-15 * max(1.0, float(np.abs(x).max())):
            break
    return x


def _collect(system: FixedPointSystem, candidates, cfg: FixedPointConfig, path_failures: int = 0) -> SolutionSet:
    roots: List[np.ndarray] = []
    for x in candidates:
        x = _newton(system, np.asarray(x, dtype=complex))
        if not np.isfinite(x).all() or not system.accepts(x, cfg):
            path_failures += 1
            continue
        x = np.where(np.abs(x) <= cfg.residual_tol, 0, x) + 0j
        if all(np.abs(x - y).max() > cfg.dedup_tol for y in roots):
            roots.append(x)
    return SolutionSet(tuple(roots), path_failures, cfg.support_eps)


def _small_candidates(M: np.ndarray) -> List[Tuple[complex, ...]]:
    if M.shape[0] == 1:
        return [(0j,), (M[0, 0],)]
    m11, m12, m21, m22 = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    negligible = 1e-12 * max(float(np.abs(M).max()), 1.0)
    if abs(m12) <= negligible and abs(m21) <= negligible:
        return [(x1, x2) for x1 in (0j, m11) for x2 in (0j, m22)]
    if abs(m12) < abs(m21):
        return [(x1, x2) for x2, x1 in _small_candidates(M[::-1, ::-1])]
    # x_2 = (x_1² - m11 x_1)/m12 turns the second equation into x_1·cubic(x_1) = 0
    cubic = [1.0, -2 * m11, m11**2 - m12 * m22, m12 * (m11 * m22 - m12 * m21)]
    roots = [0j] + list(np.roots(cubic))
    return [(x1, (x1**2 - m11 * x1) / m12) for x1 in roots]


def solve_small(system: FixedPointSystem, cfg: FixedPointConfig = DEFAULT_CONFIG) -> SolutionSet:
    """Closed-form roots for n ≤ 2"""
    if system.n > 2:
        raise DimensionError(f"closed forms cover n <= 2, got n = {system.n}")
    return _collect(system, _small_candidates(system.matrix), cfg)


def _batched_solve(A: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    try:
        x = np.linalg.solve(A, b[..., None])[..., 0]
        ok = np.ones(len(A), dtype=bool)
    except np.linalg.LinAlgError:
        x = np.zeros_like(b)
        ok = np.zeros(len(A), dtype=bool)
        for i in range(len(A)):
            try:
                x[i] = np.linalg.solve(A[i], b[i])
                ok[i] = True
            except np.linalg.LinAlgError:
                pass
    return x, ok & np.isfinite(x).all(axis=-1)


class _Homotopy:
    """x∘x = M(t) x with M(t) = ((1-t)γI + tM) / ((1-t)γ + t)"""

    def __init__(self, M: np.ndarray, gamma: complex):
        self.M = M
        self.gamma = gamma
        self.identity = np.eye(M.shape[0], dtype=complex)

    def matrices(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        t = t[:, None, None]
        numerator = (1 - t) * self.gamma * self.identity + t * self.M
        denominator = (1 - t) * self.gamma + t
        d_numerator = self.M - self.gamma * self.identity
        d_denominator = 1 - self.gamma
        Mt = numerator / denominator
        dMt = (d_numerator * denominator - numerator * d_denominator) / denominator**2
        return Mt, dMt

    @staticmethod
    def jacobian(x: np.ndarray, Mt: np.ndarray) -> np.ndarray:
        return 2 * x[:, :, None] * np.eye(x.shape[1])[None] - Mt

    @staticmethod
    def value(x: np.ndarray, Mt: np.ndarray) -> np.ndarray:
        return x * x - (Mt @ x[..., None])[..., 0]


def _track(homotopy: _Homotopy, starts: np.ndarray, cfg: FixedPointConfig) -> Tuple[np.ndarray, np.ndarray]:
    count = len(starts)
    x = starts.copy()
    t = np.zeros(count)
    h = np.full(count, cfg.initial_step)
    active = np.ones(count, dtype=bool)
    failed = np.zeros(count, dtype=bool)

    while active.any():
        idx = np.flatnonzero(active)
        xi, ti = x[idx], t[idx]
        hi = np.minimum(h[idx], 1.0 - ti)
        t_next = np.where(1.0 - ti <= h[idx], 1.0, ti + hi)

        # Euler predictor: dx/dt = -Hx⁻¹ Ht with Ht = -M'(t) x
        Mt, dMt = homotopy.matrices(ti)
        tangent, ok = _batched_solve(homotopy.jacobian(xi, Mt), (dMt @ xi[..., None])[..., 0])
        guess = xi + hi[:, None] * tangent

        Mn, _ = homotopy.matrices(t_next)
        size = 1.0 + np.abs(guess).max(axis=1)
        previous = None
        for iteration in range(cfg.corrector_iterations):
            delta, solved = _batched_solve(homotopy.jacobian(guess, Mn), homotopy.value(guess, Mn))
            ok &= solved
            correction = np.abs(delta).max(axis=1)
            if iteration == 0:
                ok &= correction <= 0.05 * size
            elif iteration == 1:
                # Newton must contract quadratically, otherwise the guess sits in another basin
                ok &= correction <= 0.1 * previous + 1e-12 * size
            previous = correction
            guess = np.where(ok[:, None], guess - delta, guess)
        ok &= correction <= 1e-6 * size

        accepted = idx[ok]
        x[accepted] = guess[ok]
        t[accepted] = t_next[ok]
        h[accepted] = np.minimum(h[accepted] * 1.5, cfg.max_step)

        rejected = idx[~ok]
        h[rejected] /= 2
        lost = rejected[h[rejected] < cfg.min_step]
        failed[lost] = True

        active = ~failed & (t < 1.0)

    return x, failed


_RETRACK_ROUNDS = 3
_SINGULAR_COND = 1e8


def _collisions(
    system: FixedPointSystem, endpoints: np.ndarray, failed: np.ndarray, cfg: FixedPointConfig
) -> List[Sequence[int]]:
    """Groups of paths whose endpoints polish to the same regular root"""
    groups: List[Tuple[np.ndarray, List[int]]] = []
    for i in np.flatnonzero(~failed):
        x = _newton(system, endpoints[i])
        if not np.isfinite(x).all() or not system.accepts(x, cfg):
            continue
        for root, members in groups:
            if np.abs(x - root).max() <= cfg.dedup_tol:
                members.append(int(i))
                break
        else:
            groups.append((x, [int(i)]))
    return [
        members
        for root, members in groups
        if len(members) > 1 and np.linalg.cond(2 * np.diag(root) - system.matrix) < _SINGULAR_COND
    ]


def _continue(
    system: FixedPointSystem, gamma: complex, starts: np.ndarray, cfg: FixedPointConfig
) -> Tuple[np.ndarray, int]:
    """Endpoints of the paths that made it, and the number of paths lost"""
    homotopy = _Homotopy(system.matrix, gamma)
    endpoints, failed = _track(homotopy, starts, cfg)

    step_cfg = cfg
    groups = _collisions(system, endpoints, failed, cfg)
    for _ in range(_RETRACK_ROUNDS):
        if not groups:
            break
        step_cfg = replace(
            step_cfg,
            initial_step=max(step_cfg.initial_step / 4, cfg.min_step),
            max_step=max(step_cfg.max_step / 4, cfg.min_step),
        )
        idx = np.array(sorted(i for group in groups for i in group))
        logging.debug("re-tracking %d colliding paths with max step %g", len(idx), step_cfg.max_step)
        endpoints[idx], failed[idx] = _track(homotopy, starts[idx], step_cfg)
        groups = _collisions(system, endpoints, failed, cfg)

    jumped = sum(len(group) - 1 for group in groups)
    return endpoints[~failed], int(failed.sum()) + jumped


def solve_numeric(
    system: FixedPointSystem, cfg: FixedPointConfig = DEFAULT_CONFIG, rng: Optional[np.random.Generator] = None
) -> SolutionSet:
    """
    Track the 2^n roots of x∘x = x to the roots of the system. Paths ending on
    the same regular root have jumped: they are tracked again with smaller
    steps. When some are still lost, a second deformation with a fresh phase
    runs and both root sets are merged; the loss is only reported when the
    merged set is still short of 2^n roots.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    n = system.n
    starts = np.array(list(itertools.product((0.0, 1.0), repeat=n)), dtype=complex)
    gamma = cmath.exp(2j * cmath.pi * rng.random())
    endpoints, lost = _continue(system, gamma, starts, cfg)
    if lost:
        logging.debug("%d paths lost, tracking again with a fresh phase", lost)
        gamma = cmath.exp(2j * cmath.pi * rng.random())
        more, lost_again = _continue(system, gamma, starts, cfg)
        endpoints = np.concatenate([endpoints, more])
        lost = min(lost, lost_again)

    solutions = _collect(system, endpoints, cfg)
    lost += solutions.path_failures
    if len(solutions) == len(starts):
        lost = 0
    if lost:
        logging.info("%d of %d paths lost during continuation", lost, len(starts))
    return SolutionSet(solutions.roots, lost, cfg.support_eps)


def full_support_solution(
    system: FixedPointSystem, cfg: FixedPointConfig = DEFAULT_CONFIG, rng: Optional[np.random.Generator] = None
) -> Optional[np.ndarray]:
    solutions = solve_small(system, cfg) if system.n <= 2 else solve_numeric(system, cfg, rng)
    full = solutions.full_support
    return full[0] if full else None


def idempotent_system_of(E: EvolutionAlgebra) -> FixedPointSystem:
    """x·x = x reads x = Aᵀ(x∘x), i.e. x∘x = (Aᵀ)⁻¹ x"""
    if rank(E.matrix) < E.dim:
        raise SingularError(f"structure matrix of {E!r} is singular")
    return FixedPointSystem(np.linalg.inv(E.matrix.T))

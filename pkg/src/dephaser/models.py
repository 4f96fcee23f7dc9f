"""Dephasing Hamiltonian models and dephasing-tensor providers.

A pure-dephasing interaction assigns one environment block Hamiltonian H_j to
each vector of the system's dephasing basis (fixed here as the computational
basis).  All multitime statistics of such a system factor through the
*dephasing tensor*: the trace of the environment state propagated through a
chain of two-sided unitary conjugations

    X -> U_j(dt) X U_l(dt)†

one per time interval, with (j, l) an index pair per interval.  Two providers
are implemented: the exact finite-environment one, and the analytic one whose
tensor factorizes into per-interval exponentials by construction (the
regression/Markovian case).
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import ShapeError, SizeCapError, TimeOrderError, ValidationError
from .linalg import check_density, check_hermitian, hermitian_expm

#: |tensor| may exceed 1 only by numerical noise
TENSOR_MOD_TOL = 1e-10

#: exhaustive enumeration limit for the factorization deficit
MARKOV_ENUM_CAP = 1_000_000
MARKOV_SUBSAMPLE = 100_000


@dataclass(frozen=True)
class IndexPairChain:
    """An ordered list of index pairs with the time grid they act on.

    ``pairs[k]`` acts on the interval ``[times[k], times[k+1]]``.
    """

    pairs: tuple
    times: tuple

    def __post_init__(self):
        pairs = tuple((int(j), int(l)) for j, l in self.pairs)
        times = tuple(float(t) for t in self.times)
        if len(times) != len(pairs) + 1:
            raise ShapeError(
                f"IndexPairChain: need len(times) = len(pairs) + 1, got {len(times)} vs {len(pairs)}"
            )
        if any(t1 > t2 for t1, t2 in zip(times, times[1:])):
            raise TimeOrderError(f"IndexPairChain: times not non-decreasing: {times}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "times", times)

    @property
    def durations(self) -> tuple:
        return tuple(t2 - t1 for t1, t2 in zip(self.times, self.times[1:]))


class DephasingTensorProvider(ABC):
    """Yields dephasing-tensor values for index-pair chains.

    Contract: the empty chain evaluates to 1; any all-diagonal chain evaluates
    to 1; |tensor| <= 1 up to roundoff; swapping (j, l) -> (l, j) in every
    pair conjugates the value.
    """

    d: int
    is_markovian_by_construction: bool = False

    @abstractmethod
    def tensor_pairs(self, pairs: Sequence, durations: Sequence[float]) -> complex:
        """Tensor value for index pairs over the given interval durations."""

    def tensor(self, chain: IndexPairChain) -> complex:
        self._check_pairs(chain.pairs)
        return self.tensor_pairs(chain.pairs, chain.durations)

    def tensor_array(self, durations: Sequence[float]) -> np.ndarray:
        """All tensor values on a duration grid.

        Shape is (d, d) * n with axes ordered (j_1, l_1, ..., j_n, l_n).
        """
        d, n = self.d, len(durations)
        out = np.empty((d, d) * n, dtype=complex)
        for idx in np.ndindex(*out.shape):
            pairs = [(idx[2 * k], idx[2 * k + 1]) for k in range(n)]
            out[idx] = self.tensor_pairs(pairs, durations)
        return out

    def dephasing_matrix(self, t: float, s: float) -> np.ndarray:
        """The d×d matrix of single-interval tensor values over [s, t]."""
        if t < s:
            raise TimeOrderError(f"dephasing_matrix: t = {t} < s = {s}")
        d = self.d
        out = np.empty((d, d), dtype=complex)
        for j in range(d):
            for l in range(d):
                out[j, l] = self.tensor_pairs([(j, l)], [t - s])
        return out

    def _check_pairs(self, pairs) -> None:
        for j, l in pairs:
            if not (0 <= j < self.d and 0 <= l < self.d):
                raise ValidationError(f"index pair ({j}, {l}) out of range for d = {self.d}")


@dataclass(frozen=True)
class DephasingModel:
    """Exact finite-environment dephasing model.

    One Hermitian block Hamiltonian per dephasing-basis vector (d of them,
    each D×D), plus the initial environment state.
    """

    blocks: tuple
    env_state: np.ndarray

    def __post_init__(self):
        blocks = tuple(check_hermitian(b, f"block H_{j}") for j, b in enumerate(self.blocks))
        if not blocks:
            raise ValidationError("DephasingModel: need at least one block")
        big_d = blocks[0].shape[0]
        for j, b in enumerate(blocks):
            if b.shape != (big_d, big_d):
                raise ShapeError(f"DephasingModel: block H_{j} has shape {b.shape}, expected ({big_d}, {big_d})")
        env = check_density(self.env_state, "env_state")
        if env.shape != (big_d, big_d):
            raise ShapeError(f"DephasingModel: env_state dim {env.shape[0]} != block dim {big_d}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "env_state", env)

    @property
    def d(self) -> int:
        return len(self.blocks)

    @property
    def env_dim(self) -> int:
        return self.blocks[0].shape[0]


class ExactDephasingProvider(DephasingTensorProvider):
    """Dephasing tensor computed by direct propagation of the environment."""

    is_markovian_by_construction = False

    def __init__(self, model: DephasingModel):
        self.model = model
        self.d = model.d
        self._prop_cache: dict = {}

    def propagator(self, j: int, dt: float) -> np.ndarray:
        key = (j, dt)
        u = self._prop_cache.get(key)
        if u is None:
            u = hermitian_expm(self.model.blocks[j], dt)
            self._prop_cache[key] = u
        return u

    def tensor_pairs(self, pairs, durations) -> complex:
        x = self.model.env_state
        for (j, l), dt in zip(pairs, durations):
            if j == l:
                # unitary conjugation by the same block: only the trace
                # matters downstream when it is the final pair, but interior
                # diagonal pairs do rotate the state, so apply it fully
                u = self.propagator(j, dt)
                x = u @ x @ u.conj().T
            else:
                uj = self.propagator(j, dt)
                ul = self.propagator(l, dt)
                x = uj @ x @ ul.conj().T
        return complex(np.trace(x))

    def tensor_array(self, durations) -> np.ndarray:
        d, n = self.d, len(durations)
        out = np.empty((d, d) * n, dtype=complex)
        env = self.model.env_state

        def fill(k: int, x: np.ndarray, idx: tuple) -> None:
            if k == n:
                out[idx] = np.trace(x)
                return
            dt = durations[k]
            us = [self.propagator(j, dt) for j in range(d)]
            for j in range(d):
                lhs = us[j] @ x
                for l in range(d):
                    fill(k + 1, lhs @ us[l].conj().T, idx + (j, l))

        fill(0, env, ())
        return out


def exact_tensor(model: DephasingModel, chain: IndexPairChain) -> complex:
    """Dephasing-tensor entry of an exact model (convenience wrapper)."""
    return ExactDephasingProvider(model).tensor(chain)


@dataclass(frozen=True)
class MarkovianAnalyticModel:
    """Analytic dephasing model with per-pair exponential decay/rotation.

    Off-diagonal coherences (j, l) evolve with exp(-(i·eps[j,l] +
    gamma[j,l]/2)·dt).  eps must be antisymmetric and gamma symmetric and
    nonnegative so that the dephasing matrix is conjugate-symmetric.
    """

    eps: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.eps, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        if eps.ndim != 2 or eps.shape[0] != eps.shape[1] or gamma.shape != eps.shape:
            raise ShapeError(f"MarkovianAnalyticModel: eps/gamma must be square and matching, got {eps.shape} vs {gamma.shape}")
        if np.any(np.abs(np.diag(eps)) > 0) or np.any(np.abs(np.diag(gamma)) > 0):
            raise ValidationError("MarkovianAnalyticModel: diagonals of eps and gamma must vanish")
        if np.max(np.abs(eps + eps.T)) > 0:
            raise ValidationError("MarkovianAnalyticModel: eps must be antisymmetric")
        if np.max(np.abs(gamma - gamma.T)) > 0:
            raise ValidationError("MarkovianAnalyticModel: gamma must be symmetric")
        if np.any(gamma < 0):
            raise ValidationError("MarkovianAnalyticModel: gamma must be entrywise nonnegative")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "gamma", gamma)

    @property
    def d(self) -> int:
        return self.eps.shape[0]

    def phi_matrix(self, dt: float) -> np.ndarray:
        """Single-interval dephasing matrix, all-ones on the diagonal."""
        return np.exp(-(1j * self.eps + 0.5 * self.gamma) * dt)


class MarkovianAnalyticProvider(DephasingTensorProvider):
    """Tensor provider whose values factorize per interval by construction."""

    is_markovian_by_construction = True

    def __init__(self, model: MarkovianAnalyticModel):
        self.model = model
        self.d = model.d

    def tensor_pairs(self, pairs, durations) -> complex:
        out = 1.0 + 0.0j
        for (j, l), dt in zip(pairs, durations):
            if j != l:
                out *= np.exp(-(1j * self.model.eps[j, l] + 0.5 * self.model.gamma[j, l]) * dt)
        return complex(out)

    def tensor_array(self, durations) -> np.ndarray:
        mats = [self.model.phi_matrix(dt) for dt in durations]
        if not mats:
            return np.array(1.0 + 0j)
        return reduce(np.multiply.outer, mats)


def markovian_tensor(model: MarkovianAnalyticModel, chain: IndexPairChain) -> complex:
    return MarkovianAnalyticProvider(model).tensor(chain)


def dephasing_matrix(provider: DephasingTensorProvider, t: float, s: float) -> np.ndarray:
    return provider.dephasing_matrix(t, s)


def semigroup_deficit(provider: DephasingTensorProvider, t0: float, t1: float, t2: float) -> float:
    """Max entrywise violation of φ(t2,t0) = φ(t2,t1)·φ(t1,t0).

    A necessary condition for the tensor factorization; identically zero for
    the analytic provider.
    """
    if not (t0 <= t1 <= t2):
        raise TimeOrderError(f"semigroup_deficit: need t0 <= t1 <= t2, got {(t0, t1, t2)}")
    full = provider.dephasing_matrix(t2, t0)
    split = provider.dephasing_matrix(t2, t1) * provider.dephasing_matrix(t1, t0)
    return float(np.max(np.abs(full - split)))


def markovianity_deficit(
    model: DephasingModel,
    times: Sequence[float],
    max_order: int,
    seed: int = 0,
    enum_cap: int = MARKOV_ENUM_CAP,
    subsample: int = MARKOV_SUBSAMPLE,
) -> float:
    """Max violation of the tensor factorization up to ``max_order`` intervals.

    Compares the exact tensor against the product of dephasing-matrix entries
    over all index-pair chains on every increasing time selection from
    ``times``.  Falls back to a seeded random subsample beyond ``enum_cap``
    tuples.
    """
    deficit, _ = markovianity_deficit_detail(model, times, max_order, seed, enum_cap, subsample)
    return deficit


def markovianity_deficit_detail(
    model: DephasingModel,
    times: Sequence[float],
    max_order: int,
    seed: int = 0,
    enum_cap: int = MARKOV_ENUM_CAP,
    subsample: int = MARKOV_SUBSAMPLE,
):
    """As :func:`markovianity_deficit`, also returning bookkeeping details."""
    if max_order < 2:
        raise ValidationError(f"markovianity_deficit: max_order must be >= 2, got {max_order}")
    times = sorted(float(t) for t in times)
    provider = ExactDephasingProvider(model)
    d = model.d

    selections = []
    total = 0
    for n in range(2, max_order + 1):
        for sel in itertools.combinations(times, n + 1):
            selections.append(sel)
            total += d ** (2 * n)

    exhaustive = total <= enum_cap
    deficit = 0.0
    if exhaustive:
        for sel in selections:
            durations = [t2 - t1 for t1, t2 in zip(sel, sel[1:])]
            exact = provider.tensor_array(durations)
            factored = reduce(np.multiply.outer, [provider.dephasing_matrix(t2, t1) for t1, t2 in zip(sel, sel[1:])])
            deficit = max(deficit, float(np.max(np.abs(exact - factored))))
    else:
        rng = np.random.default_rng(seed)
        for _ in range(subsample):
            sel = selections[rng.integers(len(selections))]
            n = len(sel) - 1
            pairs = [(int(rng.integers(d)), int(rng.integers(d))) for _ in range(n)]
            durations = [t2 - t1 for t1, t2 in zip(sel, sel[1:])]
            exact = provider.tensor_pairs(pairs, durations)
            factored = 1.0 + 0j
            for (j, l), dt in zip(pairs, durations):
                factored *= provider.tensor_pairs([(j, l)], [dt])
            deficit = max(deficit, abs(exact - factored))
    return deficit, {"exhaustive": exhaustive, "tuples": total, "orders": list(range(2, max_order + 1))}


def commutativity_check(model: DephasingModel, tol: float = 1e-12) -> bool:
    """True iff all block commutators vanish within ``tol`` (max-norm)."""
    for a, b in itertools.combinations(model.blocks, 2):
        if np.max(np.abs(a @ b - b @ a)) > tol:
            return False
    return True


def triviality_check(provider: DephasingTensorProvider, grid: Sequence[float], tol: float = 1e-10) -> bool:
    """True iff every dephasing-matrix entry has unit modulus on the grid."""
    grid = sorted(float(t) for t in grid)
    for s, t in itertools.combinations(grid, 2):
        phi = provider.dephasing_matrix(t, s)
        if np.max(np.abs(np.abs(phi) - 1.0)) > tol:
            return False
    return True


def tensor_collapse_check(provider: DephasingTensorProvider, chain: IndexPairChain, k: int) -> float:
    """|tensor(chain) - tensor(chain with diagonal pair k dropped)|.

    The dropped-pair value replaces the k-th two-sided conjugation with the
    identity map, keeping every other interval duration.  Always ~0 when k is
    the last pair; ~0 for any k when the provider factorizes or the blocks
    commute.
    """
    pairs = chain.pairs
    if not (0 <= k < len(pairs)):
        raise ValidationError(f"tensor_collapse_check: position {k} out of range")
    j, l = pairs[k]
    if j != l:
        raise ValidationError(f"tensor_collapse_check: pair {k} is ({j}, {l}), not diagonal")
    durations = chain.durations
    full = provider.tensor_pairs(pairs, durations)
    dropped = provider.tensor_pairs(
        [p for i, p in enumerate(pairs) if i != k],
        [dt for i, dt in enumerate(durations) if i != k],
    )
    return abs(full - dropped)

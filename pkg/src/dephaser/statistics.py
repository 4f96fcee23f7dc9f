"""Multitime joint probability distributions for pure-dephasing systems.

Two independent routes are implemented:

* :func:`joint_distribution` contracts system overlap factors against the
  dephasing tensor (the fast path; works for any tensor provider);
* :func:`oracle_distribution` simulates the global system-environment unitary
  directly and applies projections on the joint space (the brute-force
  cross-check; exact models only).

Outcome tuples (x_1, ..., x_n) are stored row-major with x_1 slowest, so CSV
output order is stable across runs and platforms.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from .errors import NullEventError, ShapeError, SizeCapError, TimeOrderError, ValidationError
from .linalg import DIM_CAP, Superoperator, check_density, hermitian_expm, kron, partial_trace_env
from .measurements import ProjectiveMeasurement, dephasing_channel
from .models import DephasingModel, DephasingTensorProvider, ExactDephasingProvider

#: cap on the number of index-pair chains d^(2n) in the tensor decomposition
TERM_CAP = 10_000_000

NEG_FLOOR = -1e-10
NORM_TOL = 1e-10
NULL_EVENT_FLOOR = 1e-14


@dataclass(frozen=True)
class TimeGrid:
    """Preparation time plus the ordered measurement times."""

    t0: float
    times: tuple

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if not times:
            raise ValidationError("TimeGrid: need at least one measurement time")
        if times[0] < self.t0 or any(a > b for a, b in zip(times, times[1:])):
            raise TimeOrderError(f"TimeGrid: times {times} not non-decreasing from t0 = {self.t0}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def durations(self) -> tuple:
        full = (self.t0,) + self.times
        return tuple(b - a for a, b in zip(full, full[1:]))

    def drop(self, position: int) -> "TimeGrid":
        """Grid with the measurement at 1-based ``position`` removed."""
        if not (1 <= position <= self.n):
            raise ValidationError(f"TimeGrid.drop: position {position} out of range 1..{self.n}")
        return TimeGrid(self.t0, self.times[: position - 1] + self.times[position:])


@dataclass(frozen=True)
class SystemPreparation:
    """Initial system state with a tag recording how it was built."""

    density: np.ndarray
    tag: str = "explicit"

    def __post_init__(self):
        rho = check_density(self.density, "preparation")
        if self.tag == "diagonal":
            off = rho - np.diag(np.diag(rho))
            if np.max(np.abs(off)) > 1e-14:
                raise ValidationError("SystemPreparation: tag 'diagonal' but off-diagonal entries present")
        object.__setattr__(self, "density", rho)

    @classmethod
    def diagonal(cls, weights) -> "SystemPreparation":
        w = np.asarray(weights, dtype=float)
        return cls(np.diag(w).astype(complex), "diagonal")

    @classmethod
    def maximally_mixed(cls, d: int) -> "SystemPreparation":
        return cls(np.eye(d, dtype=complex) / d, "maximally-mixed")

    @classmethod
    def pure(cls, vector) -> "SystemPreparation":
        v = np.asarray(vector, dtype=complex)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValidationError("SystemPreparation.pure: zero vector")
        v = v / nrm
        return cls(np.outer(v, v.conj()), "pure")

    @property
    def d(self) -> int:
        return self.density.shape[0]


@dataclass(frozen=True)
class JointDistribution:
    """n-time joint probability table over outcome tuples at fixed times."""

    n_outcomes: int
    grid: TimeGrid
    table: np.ndarray  # flat, length n_outcomes**n, x_1 slowest

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.size != self.n_outcomes ** self.grid.n:
            raise ShapeError(
                f"JointDistribution: table size {t.size} != {self.n_outcomes}^{self.grid.n}"
            )
        if t.min() < NEG_FLOOR:
            raise ValidationError(f"JointDistribution: entry {t.min():.3e} below floor {NEG_FLOOR:g}")
        total = t.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise ValidationError(f"JointDistribution: table sums to {total!r}, expected 1 within {NORM_TOL:g}")
        object.__setattr__(self, "table", t.reshape(-1))

    @property
    def n(self) -> int:
        return self.grid.n

    def as_array(self) -> np.ndarray:
        """Table reshaped to one axis per measurement, x_1 first."""
        return self.table.reshape((self.n_outcomes,) * self.n)

    def prob(self, outcomes) -> float:
        return float(self.as_array()[tuple(outcomes)])

    def clipped(self) -> np.ndarray:
        """Presentation copy with roundoff negatives clipped to zero."""
        return np.clip(self.table, 0.0, None)

    def marginalize(self, position: int) -> "JointDistribution":
        """Sum out the outcome at 1-based ``position``; drops its time too."""
        arr = self.as_array().sum(axis=position - 1)
        return JointDistribution(self.n_outcomes, self.grid.drop(position), arr.reshape(-1))


def _build_global_hamiltonian(model: DephasingModel) -> np.ndarray:
    d, big_d = model.d, model.env_dim
    h = np.zeros((d * big_d, d * big_d), dtype=complex)
    for j in range(d):
        e = np.zeros((d, d))
        e[j, j] = 1.0
        h += kron(e, model.blocks[j])
    return h


def joint_distribution(
    provider: DephasingTensorProvider,
    prep: SystemPreparation,
    measurement: ProjectiveMeasurement,
    grid: TimeGrid,
    term_cap: int = TERM_CAP,
) -> JointDistribution:
    """n-time statistics via the dephasing-tensor decomposition.

    Each chain of index pairs contributes a product of scalar projector
    entries (the system factor) times the corresponding dephasing-tensor
    value; the contraction over all chains and outcome tuples is a single
    einsum.
    """
    d, n = provider.d, grid.n
    if prep.d != d or measurement.d != d:
        raise ShapeError(
            f"joint_distribution: dimension mismatch (provider d={d}, prep {prep.d}, measurement {measurement.d})"
        )
    n_chains = d ** (2 * n)
    if n_chains > term_cap:
        raise SizeCapError(f"joint_distribution: {n_chains} index-pair chains exceed cap {term_cap}")

    tensor = provider.tensor_array(grid.durations)
    m = measurement.n_outcomes
    pstack = np.stack([measurement.projector(x) for x in range(m)])  # [x, row, col]

    # index letters: x_1..x_n then j_1..j_n, l_1..l_n
    letters = string.ascii_letters
    x = letters[:n]
    j = letters[n : 2 * n]
    l = letters[2 * n : 3 * n]

    operands = [prep.density]
    subs = [j[0] + l[0]]
    for k in range(n - 1):
        # P_{x_k}[j_{k+1}, j_k] and P_{x_k}[l_k, l_{k+1}]
        operands += [pstack, pstack]
        subs += [x[k] + j[k + 1] + j[k], x[k] + l[k] + l[k + 1]]
    operands.append(pstack)  # trace factor P_{x_n}[l_n, j_n]
    subs.append(x[n - 1] + l[n - 1] + j[n - 1])
    operands.append(tensor)
    subs.append("".join(j[k] + l[k] for k in range(n)))

    table = np.einsum(",".join(subs) + "->" + x, *operands, optimize=True)
    return JointDistribution(m, grid, np.real(table).reshape(-1))


def oracle_distribution(
    model: DephasingModel,
    prep: SystemPreparation,
    measurement: ProjectiveMeasurement,
    grid: TimeGrid,
) -> JointDistribution:
    """Brute-force statistics from the global unitary on the joint space.

    Independent of the tensor decomposition; used to cross-check
    :func:`joint_distribution` for exact models.
    """
    d, big_d = model.d, model.env_dim
    if d * big_d > DIM_CAP:
        raise SizeCapError(f"oracle_distribution: joint dimension {d * big_d} exceeds cap {DIM_CAP}")
    if prep.d != d or measurement.d != d:
        raise ShapeError("oracle_distribution: dimension mismatch")

    h_global = _build_global_hamiltonian(model)
    props = [hermitian_expm(h_global, dt) for dt in grid.durations]
    eye_b = np.eye(big_d)
    m = measurement.n_outcomes
    n = grid.n
    table = np.zeros((m,) * n)

    def branch(k: int, state: np.ndarray, idx: tuple) -> None:
        u = props[k]
        evolved = u @ state @ u.conj().T
        for xk in range(m):
            p = kron(measurement.projector(xk), eye_b)
            projected = p @ evolved @ p
            if k == n - 1:
                table[idx + (xk,)] = np.trace(projected).real
            else:
                branch(k + 1, projected, idx + (xk,))

    branch(0, kron(prep.density, model.env_state), ())
    return JointDistribution(m, grid, table.reshape(-1))


def reduced_map(provider: DephasingTensorProvider, t: float, s: float) -> Superoperator:
    """Reduced dynamical map: coherence (j, l) multiplied by φ_{jl}(t, s).

    With rank-one dephasing projectors on the computational basis, the
    column-stacking superoperator is diagonal with entry φ[j, l] at vec index
    l·d + j.
    """
    if t < s:
        raise TimeOrderError(f"reduced_map: t = {t} < s = {s}")
    phi = provider.dephasing_matrix(t, s)
    return Superoperator(provider.d, np.diag(phi.T.reshape(-1)))


def sandwich_identity_deficit(
    provider: DephasingTensorProvider, measurement: ProjectiveMeasurement, t: float, s: float
) -> float:
    """Max-norm of Δ∘Λ_{t,s}∘Δ − Λ_{t,s}∘Δ for the measurement's dephasing channel."""
    delta = dephasing_channel(measurement)
    lam = reduced_map(provider, t, s)
    lhs = delta.compose(lam).compose(delta)
    rhs = lam.compose(delta)
    return float(np.max(np.abs(lhs.matrix - rhs.matrix)))


def ncgd_deficit(
    provider: DephasingTensorProvider,
    measurement: ProjectiveMeasurement,
    t1: float,
    t2: float,
    t3: float,
) -> float:
    """Max-norm of Δ∘Λ_{32}∘Δ∘Λ_{21}∘Δ − Δ∘Λ_{31}∘Δ on a time triple.

    Zero (within tolerance) certifies the non-coherence-generating-and-
    detecting property of the reduced maps with respect to the measurement.
    """
    if not (t1 <= t2 <= t3):
        raise TimeOrderError(f"ncgd_deficit: need t1 <= t2 <= t3, got {(t1, t2, t3)}")
    delta = dephasing_channel(measurement)
    lam32 = reduced_map(provider, t3, t2)
    lam21 = reduced_map(provider, t2, t1)
    lam31 = reduced_map(provider, t3, t1)
    lhs = delta.compose(lam32).compose(delta).compose(lam21).compose(delta)
    rhs = delta.compose(lam31).compose(delta)
    return float(np.max(np.abs(lhs.matrix - rhs.matrix)))


def conditional_probability(dist: JointDistribution, prefix) -> np.ndarray:
    """Distribution of the next outcome given the first ``len(prefix)`` outcomes.

    Raises :class:`NullEventError` when the conditioning event has probability
    below the floor (rather than returning NaN).
    """
    prefix = tuple(int(x) for x in prefix)
    k = len(prefix)
    if k >= dist.n:
        raise ValidationError(f"conditional_probability: prefix length {k} must be < n = {dist.n}")
    arr = dist.as_array()
    # marginalize outcomes after position k+1
    for _ in range(dist.n - k - 1):
        arr = arr.sum(axis=-1)
    sub = arr[prefix]  # vector over x_{k+1}
    denom = sub.sum()
    if denom <= NULL_EVENT_FLOOR:
        raise NullEventError(f"conditional_probability: event {prefix} has probability {denom:.3e}")
    return np.clip(sub / denom, 0.0, None)


def exact_provider(model: DephasingModel) -> ExactDephasingProvider:
    """Convenience constructor used throughout the analyses."""
    return ExactDephasingProvider(model)

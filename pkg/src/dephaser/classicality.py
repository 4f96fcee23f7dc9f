"""Kolmogorov consistency deficits and classicality reports.

A process is N-classical when marginalizing any interior outcome of an n-time
distribution (n <= N) reproduces the (n-1)-time distribution on the reduced
grid.  Marginalizing the *last* outcome always works (trace preservation), so
only interior positions 1..n-1 are tested.  Verdicts are always relative to a
declared finite grid pool.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError, ValidationError
from .measurements import ProjectiveMeasurement
from .models import DephasingTensorProvider
from .statistics import JointDistribution, SystemPreparation, TimeGrid, joint_distribution

#: default verdict tolerance: above pipeline noise, far below genuine violations
DEFAULT_TOL = 1e-9

GRID_MATCH_TOL = 1e-12


def kolmogorov_deficit(fine: JointDistribution, coarse: JointDistribution, position: int) -> float:
    """Max-abs mismatch between ``coarse`` and ``fine`` marginalized at ``position``.

    ``position`` is 1-based and must be interior (1 <= position <= n-1); the
    last position is excluded since it is consistent automatically.
    """
    n = fine.n
    if coarse.n != n - 1:
        raise ShapeError(f"kolmogorov_deficit: coarse order {coarse.n} != fine order {n} - 1")
    if not (1 <= position <= n - 1):
        raise ValidationError(f"kolmogorov_deficit: position {position} not interior for order {n}")
    reduced = fine.marginalize(position)
    if abs(reduced.grid.t0 - coarse.grid.t0) > GRID_MATCH_TOL or any(
        abs(a - b) > GRID_MATCH_TOL for a, b in zip(reduced.grid.times, coarse.grid.times)
    ):
        raise ShapeError(
            f"kolmogorov_deficit: grids disagree after deleting position {position}: "
            f"{reduced.grid.times} vs {coarse.grid.times}"
        )
    return float(np.max(np.abs(reduced.table - coarse.table)))


@dataclass(frozen=True)
class DeficitRecord:
    order: int
    position: int
    times: tuple
    deficit: float


@dataclass(frozen=True)
class ClassicalityReport:
    """Per-order, per-position consistency deficits with tolerance verdicts."""

    max_order_tested: int
    tolerance: float
    t0: float
    pool: tuple
    records: tuple = field(default_factory=tuple)
    note: str = "order 1 is normalization only and recorded as trivially satisfied"

    def deficits_up_to(self, order: int):
        return [r for r in self.records if r.order <= order]

    def verdict(self, order: int) -> bool:
        """True iff every deficit at orders <= ``order`` is within tolerance."""
        if not (1 <= order <= self.max_order_tested):
            raise ValidationError(f"verdict: order {order} outside 1..{self.max_order_tested}")
        return all(r.deficit <= self.tolerance for r in self.deficits_up_to(order))

    @property
    def max_deficit(self) -> float:
        return max((r.deficit for r in self.records), default=0.0)

    def to_dict(self) -> dict:
        return {
            "max_order_tested": self.max_order_tested,
            "tolerance": self.tolerance,
            "t0": self.t0,
            "grid_pool": list(self.pool),
            "note": self.note,
            "records": [
                {"order": r.order, "position": r.position, "times": list(r.times), "deficit": r.deficit}
                for r in self.records
            ],
            "verdicts": {str(n): self.verdict(n) for n in range(1, self.max_order_tested + 1)},
        }


def classicality_report(
    provider: DephasingTensorProvider,
    prep: SystemPreparation,
    measurement: ProjectiveMeasurement,
    pool,
    max_order: int,
    tol: float = DEFAULT_TOL,
    t0: float = 0.0,
) -> ClassicalityReport:
    """Test Kolmogorov consistency for all orders 2..max_order on a grid pool.

    Time tuples are all non-decreasing selections from ``pool``; for each
    tuple and each interior position the marginalization deficit is recorded.
    """
    if max_order < 2:
        raise ValidationError(f"classicality_report: max_order must be >= 2, got {max_order}")
    pool = tuple(sorted(float(t) for t in pool))
    if not pool:
        raise ValidationError("classicality_report: empty grid pool")
    if pool[0] < t0:
        raise ValidationError(f"classicality_report: pool starts before t0 = {t0}")

    records = []
    for n in range(2, max_order + 1):
        for sel in itertools.combinations_with_replacement(pool, n):
            fine = joint_distribution(provider, prep, measurement, TimeGrid(t0, sel))
            for position in range(1, n):
                coarse_grid = TimeGrid(t0, sel[: position - 1] + sel[position:])
                coarse = joint_distribution(provider, prep, measurement, coarse_grid)
                records.append(
                    DeficitRecord(n, position, sel, kolmogorov_deficit(fine, coarse, position))
                )
    return ClassicalityReport(max_order, tol, t0, pool, tuple(records))


def qubit_two_time_deficit_closed(
    provider: DephasingTensorProvider,
    p: float,
    theta: float,
    x2: int,
    t2: float,
    t1: float,
    t0: float = 0.0,
) -> float:
    """Closed-form 2-time consistency deficit for a qubit, diagonal preparation.

    Equals sum_x1 P2(x2, t2; x1, t1) - P1(x2, t2) for the preparation
    diag(p, 1-p) and the measurement basis parametrized by theta (the deficit
    does not depend on the azimuthal phase).
    """
    if provider.d != 2:
        raise ValidationError(f"qubit_two_time_deficit_closed: provider d = {provider.d}, need 2")

    def t2step(j2, l2, j1, l1):
        return provider.tensor_pairs([(j1, l1), (j2, l2)], [t1 - t0, t2 - t1])

    bracket = (
        p * t2step(0, 1, 0, 0)
        + p * t2step(1, 0, 0, 0)
        + (p - 1) * t2step(0, 1, 1, 1)
        + (p - 1) * t2step(1, 0, 1, 1)
        - 2 * (2 * p - 1)
    )
    return float(((-1) ** x2 * 0.125 * np.sin(2 * theta) * np.sin(4 * theta) * bracket).real)


def qubit_two_time_deficit_simplified(p: float, theta: float, x2: int, re_phi: float) -> float:
    """The Markovian-or-commuting specialization of the 2-time deficit.

    With a single dephasing function φ, the bracket collapses and the deficit
    becomes (-1)^x2 · (1/2)(1/2 - p) · sin 2θ sin 4θ · (1 - Re φ).
    """
    return float((-1) ** x2 * 0.5 * (0.5 - p) * np.sin(2 * theta) * np.sin(4 * theta) * (1.0 - re_phi))


def markov_qubit_violation_closed(
    epsilon: float, gamma: float, x3: int, x1: int, t3: float, t2: float, t1: float
) -> float:
    """Closed-form P2(x3; x1) - sum_x2 P3(x3; x2; x1) for the analytic qubit.

    Diagonal preparation, unbiased measurement basis.  The value is
    -(1/4)(-1)^(x3-x1) e^{-γ(t3-t1)/2} sin[ε(t3-t2)] sin[ε(t2-t1)]: it
    vanishes for all times iff ε = 0, i.e. iff the dephasing function is real.
    """
    return float(
        -0.25
        * (-1) ** (x3 - x1)
        * np.exp(-0.5 * gamma * (t3 - t1))
        * np.sin(epsilon * (t3 - t2))
        * np.sin(epsilon * (t2 - t1))
    )


def delta_count(d: int, h: int) -> int:
    """Brute-force count of off-diagonal pairs with j - l = h modulo {0, ±d}.

    Must equal d for every admissible h (1 <= |h| <= d-1).
    """
    if h == 0 or abs(h) >= d:
        raise ValidationError(f"delta_count: h = {h} out of range ±1..±{d - 1}")
    count = 0
    for j in range(d):
        for l in range(d):
            if j == l:
                continue
            for k in (-1, 0, 1):
                if j - l == h + k * d:
                    count += 1
    return count


def theta_sweep(
    provider: DephasingTensorProvider,
    p: float,
    thetas,
    t2: float,
    t1: float,
    t0: float = 0.0,
    x2: int = 0,
):
    """2-time deficit as a function of the measurement angle.

    Returns (thetas, deficits, argmax_theta); the argmax is taken on the
    absolute deficit.  Maxima sit near (1/2) arctan sqrt(2) and its mirror
    whenever the time-dependent factor is nonzero.
    """
    thetas = np.asarray(list(thetas), dtype=float)
    deficits = np.array(
        [qubit_two_time_deficit_closed(provider, p, th, x2, t2, t1, t0) for th in thetas]
    )
    argmax_theta = float(thetas[int(np.argmax(np.abs(deficits)))])
    return thetas, deficits, argmax_theta


def search_nonclassicality_witness(
    provider: DephasingTensorProvider,
    prep: SystemPreparation,
    measurement: ProjectiveMeasurement,
    t0: float,
    horizon: float,
    order: int = 3,
    position: int = 2,
    points_per_interval: int = 5,
    threshold: float = 1e-3,
    seed: int = 0,
    random_draws: int = 50,
):
    """Search a coarse grid for a consistency violation of the given order.

    Deterministic sweep over increasing tuples from a uniform coarse grid,
    then seeded random tuples.  Returns the best witness record found with
    deficit >= threshold, or None (inconclusive, *not* evidence of
    classicality).
    """
    grid = np.linspace(t0, horizon, points_per_interval * (order - 1) + 1)[1:]
    best = None

    def consider(times):
        nonlocal best
        fine = joint_distribution(provider, prep, measurement, TimeGrid(t0, tuple(times)))
        coarse = joint_distribution(
            provider, prep, measurement, TimeGrid(t0, tuple(times[: position - 1] + times[position:]))
        )
        deficit = kolmogorov_deficit(fine, coarse, position)
        if best is None or deficit > best.deficit:
            best = DeficitRecord(order, position, tuple(times), deficit)

    for sel in itertools.combinations([float(t) for t in grid], order):
        consider(list(sel))
    rng = np.random.default_rng(seed)
    for _ in range(random_draws):
        consider(sorted(t0 + (horizon - t0) * rng.random(order)))

    if best is not None and best.deficit >= threshold:
        return best
    return None

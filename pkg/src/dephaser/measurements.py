"""Projective measurements on the system space.

Rank-one PVMs are stored as a matrix of orthonormal column vectors; general
PVMs (needed only for the maximally-mixed-state analysis) as a list of
orthogonal projectors summing to the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ShapeError, ValidationError
from .linalg import Superoperator, as_complex_matrix, check_square

GRAM_TOL = 1e-12
PROJ_TOL = 1e-10


@dataclass(frozen=True)
class PhaseVector:
    """Phase angles attached to the Fourier basis, gauge-fixed to phases[0] = 0."""

    phases: tuple

    def __post_init__(self):
        ph = tuple(float(p) for p in self.phases)
        if not all(np.isfinite(p) for p in ph):
            raise ValidationError(f"PhaseVector: non-finite entry in {ph}")
        # global-phase gauge: shift so the first phase vanishes
        ph = tuple(p - ph[0] for p in ph)
        object.__setattr__(self, "phases", ph)


class ProjectiveMeasurement:
    """A PVM with outcomes labelled 0..d-1 (rank-one) or 0..m-1 (general)."""

    def __init__(self, vectors: Optional[np.ndarray] = None, projectors: Optional[Sequence[np.ndarray]] = None):
        if (vectors is None) == (projectors is None):
            raise ValidationError("ProjectiveMeasurement: give exactly one of vectors/projectors")
        if vectors is not None:
            v = np.asarray(vectors, dtype=complex)
            if v.ndim != 2 or v.shape[0] != v.shape[1]:
                raise ShapeError(f"ProjectiveMeasurement: vectors must form a square matrix, got {v.shape}")
            gram = v.conj().T @ v
            dev = np.max(np.abs(gram - np.eye(v.shape[0])))
            if dev > GRAM_TOL:
                raise ValidationError(f"ProjectiveMeasurement: vectors not orthonormal, |Gram - 1| = {dev:.3e}")
            self.vectors = v  # column x is the outcome-x vector
            self.projectors = None
            self.d = v.shape[0]
        else:
            ps = [as_complex_matrix(p, f"projector {x}") for x, p in enumerate(projectors)]
            d = check_square(ps[0], "projector 0")
            for x, p in enumerate(ps):
                if p.shape != (d, d):
                    raise ShapeError(f"ProjectiveMeasurement: projector {x} shape {p.shape} != ({d}, {d})")
            for x, p in enumerate(ps):
                for y, q in enumerate(ps):
                    ref = p if x == y else np.zeros((d, d))
                    if np.max(np.abs(p @ q - ref)) > PROJ_TOL:
                        raise ValidationError(f"ProjectiveMeasurement: projectors {x}, {y} not orthogonal idempotents")
            if np.max(np.abs(sum(ps) - np.eye(d))) > PROJ_TOL:
                raise ValidationError("ProjectiveMeasurement: projectors do not sum to the identity")
            self.vectors = None
            self.projectors = tuple(ps)
            self.d = d

    @property
    def is_rank_one(self) -> bool:
        return self.vectors is not None

    @property
    def n_outcomes(self) -> int:
        return self.d if self.is_rank_one else len(self.projectors)

    def projector(self, x: int) -> np.ndarray:
        if self.is_rank_one:
            v = self.vectors[:, x]
            return np.outer(v, v.conj())
        return self.projectors[x]


def dephasing_basis(d: int) -> ProjectiveMeasurement:
    """Measurement fully compatible with the dephasing (computational) basis."""
    if d < 2:
        raise ValidationError(f"dephasing_basis: d must be >= 2, got {d}")
    return ProjectiveMeasurement(vectors=np.eye(d, dtype=complex))


def fourier_mub(d: int, phases: Optional[PhaseVector] = None) -> ProjectiveMeasurement:
    """Phased discrete-Fourier basis, unbiased with respect to the dephasing one.

    Outcome-x vector: d^(-1/2) * sum_j omega^(j x) e^(i phases[j]) |j>, with
    omega = exp(2 pi i / d).
    """
    if d < 2:
        raise ValidationError(f"fourier_mub: d must be >= 2, got {d}")
    if phases is None:
        phases = PhaseVector((0.0,) * d)
    if len(phases.phases) != d:
        raise ShapeError(f"fourier_mub: need {d} phases, got {len(phases.phases)}")
    j = np.arange(d)
    omega = np.exp(2j * np.pi / d)
    cols = np.empty((d, d), dtype=complex)
    for x in range(d):
        cols[:, x] = omega ** (j * x) * np.exp(1j * np.asarray(phases.phases)) / np.sqrt(d)
    return ProjectiveMeasurement(vectors=cols)


def qubit_basis(theta: float, phi: float) -> ProjectiveMeasurement:
    """General qubit basis (cos t, e^{i p} sin t), (sin t, -e^{i p} cos t)."""
    c, s, e = np.cos(theta), np.sin(theta), np.exp(1j * phi)
    cols = np.array([[c, s], [e * s, -e * c]], dtype=complex)
    return ProjectiveMeasurement(vectors=cols)


def mub_check(a: ProjectiveMeasurement, b: ProjectiveMeasurement, tol: float = 1e-10) -> bool:
    """True iff all squared cross-overlaps equal 1/d within ``tol``."""
    if not (a.is_rank_one and b.is_rank_one):
        raise ValidationError("mub_check: only rank-one PVMs supported")
    if a.d != b.d:
        raise ShapeError(f"mub_check: dimension mismatch {a.d} vs {b.d}")
    overlaps = np.abs(a.vectors.conj().T @ b.vectors) ** 2
    return bool(np.max(np.abs(overlaps - 1.0 / a.d)) <= tol)


def dephasing_channel(m: ProjectiveMeasurement) -> Superoperator:
    """Completely dephasing channel of the PVM: rho -> sum_x P_x rho P_x."""
    d = m.d
    mat = np.zeros((d * d, d * d), dtype=complex)
    for x in range(m.n_outcomes):
        p = m.projector(x)
        mat += np.kron(p.T, p)
    return Superoperator(d, mat)

"""Majorization order on probability vectors and Schur-convex cooling metrics.

A vector a is majorized by b when every descending partial sum of b
dominates the corresponding partial sum of a. Majorization is the right
partial order for cooling statements: it simultaneously certifies every
Schur-convex/concave figure of merit (ground population, purity, entropy,
mean energy over sorted levels).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectra import DiagonalState, EnergySpectrum

#: Absolute tolerance on partial-sum comparisons. The protocols produce
#: exact rearrangements, so this only absorbs float noise; near-ties count
#: as dominated.
PARTIAL_SUM_TOL = 1e-12


@dataclass(frozen=True)
class MetricBundle:
    """Scalar coolness summary of one population vector."""

    ground_population: float
    shannon_entropy: float
    purity: float
    mean_energy: float


def shannon_entropy(p: np.ndarray) -> float:
    """Entropy in nats with the 0 * ln 0 = 0 convention."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def is_majorized_by(a, b, tol: float = PARTIAL_SUM_TOL) -> bool:
    """True iff a is majorized by b (b dominates every descending partial sum)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("inputs must be 1-D vectors of equal length")
    ca = np.cumsum(np.sort(a)[::-1])
    cb = np.cumsum(np.sort(b)[::-1])
    return bool(np.all(ca <= cb + tol))


def optimal_marginal(joint: DiagonalState) -> np.ndarray:
    """Best achievable A-marginal of a bipartite diagonal state under joint permutations.

    Sorting the joint entries descending and summing consecutive blocks of
    size d_B yields the marginal that majorizes the A-marginal of every
    reordering of the joint. The output is sorted non-increasing.
    """
    if len(joint.dims) != 2:
        raise ValueError("joint must carry exactly two factors")
    d_a, d_b = joint.dims
    ordered = np.sort(joint.probs)[::-1]
    return ordered.reshape(d_a, d_b).sum(axis=1)


def coolness_metrics(p, spectrum: EnergySpectrum) -> MetricBundle:
    """Ground population, entropy (nats), purity, and mean energy of ``p``."""
    p = np.asarray(p, dtype=np.float64)
    if p.size != spectrum.dim:
        raise ValueError("population vector and spectrum disagree in length")
    return MetricBundle(
        ground_population=float(p[0]),
        shannon_entropy=shannon_entropy(p),
        purity=float((p * p).sum()),
        mean_energy=float((p * np.asarray(spectrum.levels)).sum()),
    )

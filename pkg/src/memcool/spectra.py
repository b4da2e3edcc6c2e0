"""Energy spectra, Gibbs distributions, and product-basis bookkeeping.

All states in this package are classical probability vectors over a labeled
product energy basis: every protocol of interest permutes or averages
diagonal entries only, so full density matrices never appear. Flat indices
are lexicographic over the factors, leftmost factor most significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

#: Probability vectors must stay normalized to this absolute tolerance.
#: Protocol steps are permutations and convex averages, so larger drift is
#: a bug, never something to renormalize away silently.
NORM_TOL = 1e-12


@dataclass(frozen=True)
class EnergySpectrum:
    """Sorted energy levels of one subsystem, ground level pinned at zero."""

    levels: tuple[float, ...]

    def __post_init__(self) -> None:
        levels = tuple(float(e) for e in self.levels)
        if len(levels) < 2:
            raise ValueError("a spectrum needs at least two levels")
        if not all(math.isfinite(e) for e in levels):
            raise ValueError("energy levels must be finite")
        if levels[0] != 0.0:
            raise ValueError("ground level must sit at energy 0")
        if any(hi < lo for lo, hi in zip(levels, levels[1:])):
            raise ValueError("levels must be sorted non-decreasing")
        object.__setattr__(self, "levels", levels)

    @property
    def dim(self) -> int:
        return len(self.levels)

    @property
    def max_gap(self) -> float:
        """Largest gap to the ground level, i.e. the top energy."""
        return self.levels[-1]


@dataclass(frozen=True)
class MemoryConfig:
    """One cooling scenario: spectra, interaction width, memory depth, and temperature.

    Each step couples the system to ``k`` machines, ``ell`` of which are
    retained between steps as memory carriers (L, collective dimension
    d_M**ell); the other ``k - ell`` are discarded after the step and
    replaced with fresh thermal copies (the reset part R).
    """

    system: EnergySpectrum
    machine: EnergySpectrum
    k: int
    ell: int
    beta: float

    def __post_init__(self) -> None:
        if self.system.dim < 2 or self.machine.dim < 2:
            raise ValueError("system and machine must both have dimension >= 2")
        if not (0 <= self.ell < self.k):
            raise ValueError("memory depth must satisfy 0 <= ell < k")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValueError("beta must be positive and finite")

    @property
    def d_s(self) -> int:
        return self.system.dim

    @property
    def d_m(self) -> int:
        return self.machine.dim

    @property
    def d_l(self) -> int:
        """Dimension of the memory-carrier block (1 when ell = 0)."""
        return self.d_m**self.ell

    @property
    def d_r(self) -> int:
        """Dimension of the reset block of fresh machines."""
        return self.d_m ** (self.k - self.ell)

    @property
    def d_sl(self) -> int:
        return self.d_s * self.d_l

    @property
    def reset_gap(self) -> float:
        """Maximum energy gap of the reset block, (k - ell) * machine max gap."""
        return (self.k - self.ell) * self.machine.max_gap

    def machines_used(self, step: int) -> int:
        """Total machines consumed up to and including 1-based ``step``."""
        return self.k + (step - 1) * (self.k - self.ell)


@dataclass(frozen=True, eq=False)
class DiagonalState:
    """Probability vector over a product energy basis.

    ``dims`` lists the factor dimensions; the flat index is lexicographic
    with the leftmost factor most significant.
    """

    probs: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64).reshape(-1).copy()
        dims = tuple(int(d) for d in self.dims)
        if math.prod(dims) != probs.size:
            raise ValueError("product of dims must equal the number of entries")
        if not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite")
        if probs.size and probs.min() < 0.0:
            raise ValueError("probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > NORM_TOL:
            raise ValueError(
                f"probabilities must sum to 1 within {NORM_TOL:g} "
                f"(got {probs.sum()!r})"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.probs.size


def partition_function(spectrum: EnergySpectrum, beta: float) -> float:
    """Canonical partition function over the full spectrum."""
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError("beta must be positive and finite")
    return float(np.exp(-beta * np.asarray(spectrum.levels)).sum())


def thermal_distribution(spectrum: EnergySpectrum, beta: float) -> DiagonalState:
    """Gibbs distribution exp(-beta * E_i) / Z over one spectrum."""
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError("beta must be positive and finite")
    weights = np.exp(-beta * np.asarray(spectrum.levels))
    return DiagonalState(weights / weights.sum(), (spectrum.dim,))


def quasi_partition(d: int, beta: float, gap: float) -> float:
    """Geometric sum over a uniform ladder: sum_{n<d} exp(-beta * n * gap)."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError("beta must be positive and finite")
    if not (math.isfinite(gap) and gap >= 0):
        raise ValueError("gap must be non-negative and finite")
    return float(np.exp(-beta * gap * np.arange(d)).sum())


def product_distribution(factors: Sequence[DiagonalState]) -> DiagonalState:
    """Tensor product of independent factors, dims concatenated."""
    if not factors:
        raise ValueError("need at least one factor")
    probs = reduce(np.kron, (f.probs for f in factors))
    dims = tuple(d for f in factors for d in f.dims)
    return DiagonalState(probs, dims)


def initial_sl_distribution(config: MemoryConfig) -> DiagonalState:
    """Uncorrelated thermal start of system plus memory carriers, dims (d_S, d_L)."""
    tau_s = thermal_distribution(config.system, config.beta).probs
    tau_m = thermal_distribution(config.machine, config.beta).probs
    probs = tau_s
    for _ in range(config.ell):
        probs = np.kron(probs, tau_m)
    return DiagonalState(probs, (config.d_s, config.d_l))


def sl_energy_order(config: MemoryConfig) -> np.ndarray:
    """Permutation listing SL product-basis states by non-decreasing total energy.

    Ties are broken by ascending flat index (stable sort), so the order is
    deterministic even for degenerate shells. With ell = 0 this is the
    identity on system indices.
    """
    machine_levels = np.asarray(config.machine.levels)
    e_l = np.zeros(1)
    for _ in range(config.ell):
        e_l = np.add.outer(e_l, machine_levels).ravel()
    e_sl = np.add.outer(np.asarray(config.system.levels), e_l).ravel()
    return np.argsort(e_sl, kind="stable")

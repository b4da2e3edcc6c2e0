"""State-independent cooling protocol as a time-homogeneous Markov chain.

Repeating one fixed two-level swap between the SL ladder and the extreme
gap of the reset block reduces the SL dynamics to a column-stochastic
transition matrix: a staircase that moves weight one rung down the ladder
with probability set by the Boltzmann factor of the reset gap. The chain's
spectrum is known in closed form, which gives the convergence rate and a
mixing-time bound without any eigensolver.

The chain is driven on the lexicographic (system, memory) labeling, so its
ground-population readout converges to the asymptotic bound directly,
with no final reordering step.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .analysis import mutual_information
from .engine import ProtocolTrace, StepRecord, check_capacity
from .spectra import MemoryConfig, initial_sl_distribution, partition_function

logger = logging.getLogger(__name__)

#: Column sums may drift from 1 by at most this much.
COLUMN_TOL = 1e-12

#: Power iteration stops when successive iterates are this close in total
#: variation.
FIXED_POINT_TOL = 1e-13

MAX_POWER_STEPS = 100_000


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Column-stochastic matrix with the convention p' = T p."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.float64).copy()
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("transition matrix must be square")
        if entries.min() < 0.0:
            raise ValueError("transition matrix entries must be non-negative")
        drift = np.abs(entries.sum(axis=0) - 1.0).max()
        if drift > COLUMN_TOL:
            raise ValueError(f"columns must sum to 1 within {COLUMN_TOL:g}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def build_v_matrix(d: int, eps: float, beta: float) -> TransitionMatrix:
    """Staircase swap matrix on a d-level ladder with swap gap ``eps``.

    Each application exchanges weight between neighbouring rungs with the
    Boltzmann factor exp(-beta * eps) flowing up and unit weight flowing
    down, normalized by 1 + exp(-beta * eps).
    """
    if d < 2:
        raise ValueError("ladder needs at least two levels")
    if not (math.isfinite(eps) and eps > 0):
        raise ValueError("swap gap must be positive and finite")
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError("beta must be positive and finite")
    x = math.exp(-beta * eps)
    v = np.zeros((d, d))
    v[0, 0] = 1.0
    idx = np.arange(d - 1)
    v[idx, idx + 1] = 1.0
    v[idx + 1, idx] = x
    v[d - 1, d - 1] = x
    return TransitionMatrix(v / (1.0 + x))


def alpha_kl(config: MemoryConfig) -> float:
    """Weight of the extreme-gap subspace within the thermal reset block.

    The fixed swap only acts when the reset machines sit in their joint
    ground or joint top level; with that probability the staircase fires,
    otherwise the step is an identity.
    """
    z_r = partition_function(config.machine, config.beta) ** (config.k - config.ell)
    return (1.0 + math.exp(-config.beta * config.reset_gap)) / z_r


def build_transition(config: MemoryConfig) -> TransitionMatrix:
    """One-step SL transition matrix of the fixed-interaction protocol."""
    alpha = alpha_kl(config)
    v = build_v_matrix(config.d_sl, config.reset_gap, config.beta).entries
    return TransitionMatrix(alpha * v + (1.0 - alpha) * np.eye(config.d_sl))


def chain_spectrum(config: MemoryConfig) -> np.ndarray:
    """All transition-matrix eigenvalues in closed form, indexed q = 0 .. D-1.

    The staircase has a unique unit eigenvalue; the rest follow a cosine
    band shrunk by the Boltzmann factor, mixed with the identity weight
    1 - alpha.
    """
    d = config.d_sl
    alpha = alpha_kl(config)
    be = config.beta * config.reset_gap
    q = np.arange(d)
    nu = 2.0 * math.exp(-be / 2.0) * np.cos(q * math.pi / d) / (1.0 + math.exp(-be))
    lam = alpha * nu + (1.0 - alpha)
    lam[0] = 1.0
    return lam


def spectral_gap_bound(config: MemoryConfig) -> float:
    """Closed-form lower bound on the spectral gap 1 - lambda_1."""
    be = config.beta * config.reset_gap
    z_r = partition_function(config.machine, config.beta) ** (config.k - config.ell)
    return (1.0 - math.exp(-be / 2.0)) ** 2 / z_r


def mixing_time_bound(config: MemoryConfig, eta: float) -> float:
    """Upper bound on the steps needed to come within eta of the fixed point.

    Standard gap bound with the smallest fixed-point entry inside the
    logarithm, written as the largest entry times the Boltzmann suppression
    across the whole ladder. Clamped at zero (and logged) when the target
    distance is already satisfied by any distribution.
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    d = config.d_sl
    be = config.beta * config.reset_gap
    z_r = partition_function(config.machine, config.beta) ** (config.k - config.ell)
    p0 = 1.0 / np.exp(-be * np.arange(d)).sum()
    p_min = p0 * math.exp(-be * (d - 1))
    bound = z_r / (1.0 - math.exp(-be / 2.0)) ** 2 * math.log(1.0 / (eta * p_min))
    if bound < 0.0:
        logger.warning("mixing-time bound is vacuous at eta=%g; clamping to 0", eta)
        return 0.0
    return bound


def fixed_point(
    transition: TransitionMatrix,
    start: np.ndarray | None = None,
    max_steps: int = MAX_POWER_STEPS,
    tol: float = FIXED_POINT_TOL,
) -> np.ndarray:
    """Stationary distribution by power iteration.

    Physically this is just running the protocol; no eigensolver is
    involved. Stops when successive iterates agree to ``tol`` in total
    variation.
    """
    t = transition.entries
    p = np.full(t.shape[0], 1.0 / t.shape[0]) if start is None else np.asarray(start, dtype=np.float64)
    for _ in range(max_steps):
        nxt = t @ p
        if 0.5 * np.abs(nxt - p).sum() <= tol:
            return nxt
        p = nxt
    raise RuntimeError(f"power iteration did not converge in {max_steps} steps")


def iterate_chain(config: MemoryConfig, steps: int) -> ProtocolTrace:
    """Run the fixed-interaction protocol from the thermal start."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    check_capacity(config)
    t = build_transition(config).entries
    p = initial_sl_distribution(config).probs
    records = []
    for n in range(1, steps + 1):
        p = t @ p
        sl = p.copy()
        sl.setflags(write=False)
        records.append(
            StepRecord(
                step=n,
                machines_used=config.machines_used(n),
                s_ground=float(sl[: config.d_l].sum()),
                mutual_info=mutual_information(sl, config.d_s, config.d_l),
                sl_probs=sl,
            )
        )
    return ProtocolTrace(config=config, mode="nonadaptive", records=tuple(records))

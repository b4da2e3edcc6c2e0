"""Closed-form asymptotic cooling limits and the memory-structure hierarchy.

In the infinite-cycle limit the achievable system state depends only on the
inverse temperature, the dimension of the memory-carrier block, and the
maximum energy gap of the reset block. The limits below are geometric
distributions in those effective gaps; everything else about the machine
spectrum matters only at finite times.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .majorize import is_majorized_by, optimal_marginal
from .spectra import DiagonalState, MemoryConfig, initial_sl_distribution, quasi_partition

#: Relative tolerance for declaring two hierarchy exponents equal.
EXPONENT_REL_TOL = 1e-12


def _geometric(d: int, beta: float, gap: float) -> np.ndarray:
    weights = np.exp(-beta * gap * np.arange(d))
    return weights / quasi_partition(d, beta, gap)


def markov_asymptotic_state(config: MemoryConfig) -> np.ndarray:
    """Memoryless baseline: asymptotic system populations for ell = 0.

    The limit looks as if the system only ever met the extreme qubit
    subspace of each batch of k fresh machines, so the effective gap is
    k times the machine max gap.
    """
    return _geometric(config.d_s, config.beta, config.k * config.machine.max_gap)


def p_star(config: MemoryConfig) -> float:
    """Asymptotic upper bound on the system ground population."""
    gap = config.d_l * config.reset_gap
    return 1.0 / quasi_partition(config.d_s, config.beta, gap)


def rho_star_s(config: MemoryConfig) -> np.ndarray:
    """Attainable asymptotic system populations; majorizes every reachable limit.

    Geometric in the effective gap d_M**ell * (k - ell) * E_max: the memory
    carriers multiply the Markovian gap by their dimension, which is the
    source of the exponential advantage in ell.
    """
    gap = config.d_l * config.reset_gap
    return _geometric(config.d_s, config.beta, gap)


def rho_star_s_general(d_s: int, d_l: int, reset_gap: float, beta: float) -> np.ndarray:
    """Asymptotic system populations for an arbitrary memory block.

    The limit depends on the memory carriers only through their total
    dimension ``d_l`` and on the reset block only through its maximum gap,
    so it extends verbatim beyond identical machines. Reduces to
    ``rho_star_s`` when d_l = d_M**ell and reset_gap = (k - ell) * E_max.
    """
    if d_s < 2 or d_l < 1:
        raise ValueError("need d_s >= 2 and d_l >= 1")
    return _geometric(d_s, beta, d_l * reset_gap)


def rho_star_sl(config: MemoryConfig) -> np.ndarray:
    """Attainable asymptotic populations of the system-plus-memory block."""
    return _geometric(config.d_sl, config.beta, config.reset_gap)


def attainability_check(config: MemoryConfig) -> bool:
    """True when the thermal start is majorized by the asymptotic SL target.

    This is the precondition for the asymptotic limits to be reachable; it
    fails, for example, when the machine gap is too small to support the
    system's initial purity.
    """
    initial = initial_sl_distribution(config)
    return is_majorized_by(initial.probs, rho_star_sl(config))


def subspace_population_bound(config: MemoryConfig, d: int) -> float:
    """Asymptotic population cap for the d lowest SL levels.

    Sum of the d largest entries of the asymptotic SL state. At d = d_L
    this reproduces ``p_star``: the system ground subspace spans exactly
    d_L product levels.
    """
    if not 1 <= d <= config.d_sl:
        raise ValueError("d must lie in [1, d_SL]")
    gap = config.reset_gap
    numerator = quasi_partition(d, config.beta, gap)
    return numerator / quasi_partition(config.d_sl, config.beta, gap)


def hierarchy_exponent(config: MemoryConfig) -> float:
    """Decay exponent beta * (k - ell) * d_M**ell * E_max ordering all limits."""
    return config.beta * config.d_l * config.reset_gap


class HierarchyOrder(Enum):
    A_MAJORIZED_BY_B = "a_majorized_by_b"
    B_MAJORIZED_BY_A = "b_majorized_by_a"
    EQUAL = "equal"


def hierarchy_compare(a: MemoryConfig, b: MemoryConfig) -> HierarchyOrder:
    """Order two scenarios by their asymptotic limits.

    The scenario with the smaller decay exponent has the hotter limit and
    is majorized by the other; equal exponents give identical limits.
    """
    if a.d_s != b.d_s:
        raise ValueError("hierarchy comparison needs equal system dimensions")
    ea = hierarchy_exponent(a)
    eb = hierarchy_exponent(b)
    if math.isclose(ea, eb, rel_tol=EXPONENT_REL_TOL):
        return HierarchyOrder.EQUAL
    if ea < eb:
        return HierarchyOrder.A_MAJORIZED_BY_B
    return HierarchyOrder.B_MAJORIZED_BY_A


def optimal_marginal_of_sl_target(config: MemoryConfig) -> np.ndarray:
    """System marginal of the asymptotic SL state under the best reordering.

    Summing the sorted SL target in blocks of d_L factorizes it exactly
    into the asymptotic system state; this is the identity that links the
    SL-level and S-level limits.
    """
    joint = DiagonalState(rho_star_sl(config), (config.d_s, config.d_l))
    return optimal_marginal(joint)

"""Simulation engine for the adaptive cooling protocols.

The non-Markovian collision dynamics is simulated through its Markovian
embedding: the system and memory carriers form one enlarged target (SL)
that meets k - ell fresh thermal machines (R) per step. One step is
attach R, permute the joint diagonal, discard R. Every optimal protocol is
a permutation in the product energy basis, since diagonal inputs stay
diagonal and coherent rotations cannot improve the spectrum's majorization
order; states are therefore flat probability arrays re-sorted in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .analysis import mutual_information
from .spectra import (
    DiagonalState,
    MemoryConfig,
    initial_sl_distribution,
    sl_energy_order,
    thermal_distribution,
)

#: Largest joint SLR dimension the engine will allocate.
CAPACITY_LIMIT = 10**7

MODES = ("stepwise", "global", "global_with_final_sort")


class CapacityError(RuntimeError):
    """Requested scenario exceeds the engine's dimension budget."""


@dataclass(frozen=True, eq=False)
class StepRecord:
    """State of one protocol run immediately after a step."""

    step: int
    machines_used: int
    s_ground: float
    mutual_info: float
    sl_probs: np.ndarray


@dataclass(frozen=True, eq=False)
class ProtocolTrace:
    """Per-step records of one protocol run."""

    config: MemoryConfig
    mode: str
    records: tuple[StepRecord, ...]

    @property
    def final(self) -> StepRecord:
        return self.records[-1]

    def machine_counts(self) -> np.ndarray:
        return np.array([r.machines_used for r in self.records])

    def s_ground_values(self) -> np.ndarray:
        return np.array([r.s_ground for r in self.records])


def check_capacity(config: MemoryConfig) -> None:
    """Refuse scenarios whose joint SLR space would not fit in memory."""
    joint_dim = config.d_s * config.d_m**config.k
    if joint_dim > CAPACITY_LIMIT:
        raise CapacityError(
            f"joint dimension {joint_dim} exceeds the capacity limit {CAPACITY_LIMIT}"
        )


def reset_distribution(config: MemoryConfig) -> np.ndarray:
    """Thermal distribution of the k - ell fresh machines, flat over d_R."""
    tau_m = thermal_distribution(config.machine, config.beta).probs
    return reduce(np.kron, [tau_m] * (config.k - config.ell))


def attach_fresh_machines(sl, config: MemoryConfig) -> DiagonalState:
    """Tensor the current SL distribution with fresh thermal reset machines."""
    joint = np.kron(np.asarray(sl, dtype=np.float64), reset_distribution(config))
    return DiagonalState(joint, (config.d_s, config.d_l, config.d_r))


def stepwise_optimal_step(joint: DiagonalState) -> np.ndarray:
    """One step of the step-wise optimal (local-basis) protocol.

    Sort all joint entries descending into lexicographic (system, memory,
    reset) order and trace out the reset block. The descending fill pushes
    maximal weight into the lowest system index first and, within it, the
    lowest memory index, which simultaneously optimally cools the system
    and leaves the memory carriers as cold as the history permits.
    """
    d_s, d_l, d_r = joint.dims
    ordered = np.sort(joint.probs)[::-1]
    return ordered.reshape(d_s * d_l, d_r).sum(axis=1)


def global_basis_step(joint: DiagonalState, sl_order: np.ndarray) -> np.ndarray:
    """One step of the global-basis protocol.

    Identical sorting, but weight is poured down the SL *energy* ladder
    rather than the lexicographic one: the xi-th block of sorted entries
    lands on the xi-th lowest-energy SL level. Whenever the energy order
    differs from the lexicographic order the system itself ends up less
    cool, although the joint spectrum is the same as in the step-wise
    optimal protocol.
    """
    d_s, d_l, d_r = joint.dims
    ordered = np.sort(joint.probs)[::-1]
    blocks = ordered.reshape(d_s * d_l, d_r).sum(axis=1)
    out = np.empty_like(blocks)
    out[sl_order] = blocks
    return out


def final_local_sort(sl) -> np.ndarray:
    """Optimally cool the system given any SL distribution (descending fill)."""
    return np.sort(np.asarray(sl, dtype=np.float64))[::-1]


def _record(config: MemoryConfig, step: int, sl: np.ndarray) -> StepRecord:
    sl = sl.copy()
    sl.setflags(write=False)
    return StepRecord(
        step=step,
        machines_used=config.machines_used(step),
        s_ground=float(sl[: config.d_l].sum()),
        mutual_info=mutual_information(sl, config.d_s, config.d_l),
        sl_probs=sl,
    )


def run_protocol(config: MemoryConfig, steps: int, mode: str = "stepwise") -> ProtocolTrace:
    """Run a cooling protocol from the thermal start and record every step.

    Modes: ``stepwise`` applies the step-wise optimal permutation each
    step; ``global`` cools along the SL energy ladder and never reorders
    locally; ``global_with_final_sort`` additionally applies the local
    descending fill at the last step only.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    check_capacity(config)

    sl = initial_sl_distribution(config).probs
    order = sl_energy_order(config)
    records = []
    for n in range(1, steps + 1):
        joint = attach_fresh_machines(sl, config)
        if mode == "stepwise":
            sl = stepwise_optimal_step(joint)
        else:
            sl = global_basis_step(joint, order)
            if mode == "global_with_final_sort" and n == steps:
                sl = final_local_sort(sl)
        records.append(_record(config, n, sl))
    return ProtocolTrace(config=config, mode=mode, records=tuple(records))

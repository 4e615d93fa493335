"""Boltzmann macrostates, quantum Boltzmann entropy, entropy trajectories.

A macrostate partition slices the ambient Hilbert space into mutually
orthogonal cells; the Boltzmann entropy of a cell is k_B times the log of
its dimension.  A state belongs to a cell only when its weight there
exceeds a dominance threshold; superpositions across cells are reported as
such rather than assigned an interpolated entropy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import TOL, Tolerances
from .errors import DimensionMismatchError, ValidationError
from .laws import Theory, propagate, theory_initial_state
from .qcore import State, Subspace, expectation

__all__ = [
    "SUPERPOSED",
    "MacrostatePartition",
    "EntropyConfig",
    "TrajectoryPoint",
    "boltzmann_entropy",
    "cell_weights",
    "macrostate_of",
    "entropy_trajectory",
    "trajectory_csv",
    "partition_by_dims",
]

SUPERPOSED = "superposed"


class MacrostatePartition:
    """Exhaustive partition of the ambient space into orthogonal cells."""

    __slots__ = ("cells", "labels", "_projectors")

    def __init__(self, cells: Sequence[Subspace], labels: Sequence[str] | None = None, *,
                 tol: Tolerances = TOL):
        cells = tuple(cells)
        if not cells:
            raise ValidationError("partition needs at least one cell")
        ambient = cells[0].ambient_dim
        if any(c.ambient_dim != ambient for c in cells):
            raise ValidationError("all cells must share the ambient dimension")
        if sum(c.dim for c in cells) != ambient:
            raise ValidationError(
                f"cell dimensions {[c.dim for c in cells]} do not sum to ambientDim {ambient}"
            )
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                cross = np.abs(cells[i].basis.conj().T @ cells[j].basis).max()
                if cross > tol.orthonormal:
                    raise ValidationError(f"cells {i} and {j} overlap: max cross product {cross:.3e}")
        if labels is None:
            labels = tuple(f"cell{i}" for i in range(len(cells)))
        else:
            labels = tuple(labels)
            if len(labels) != len(cells):
                raise ValidationError("one label per cell required")
        self.cells = cells
        self.labels = labels
        self._projectors = tuple(c.projector() for c in cells)

    @property
    def ambient_dim(self) -> int:
        return self.cells[0].ambient_dim

    @property
    def projectors(self) -> tuple[np.ndarray, ...]:
        return self._projectors

    def __len__(self) -> int:
        return len(self.cells)

    def __repr__(self) -> str:
        return f"MacrostatePartition(dims={[c.dim for c in self.cells]})"


@dataclass(frozen=True)
class EntropyConfig:
    """k_B in caller units (default natural, 1.0) plus the dominance threshold."""

    k_B: float = 1.0
    dominance_threshold: float = 0.99

    def __post_init__(self):
        if not self.k_B > 0:
            raise ValidationError("k_B must be positive")
        if not 0.5 < self.dominance_threshold <= 1.0:
            raise ValidationError("dominance threshold must lie in (0.5, 1]")


def boltzmann_entropy(s: Subspace, cfg: EntropyConfig = EntropyConfig()) -> float:
    """Quantum Boltzmann entropy of a macrostate cell: k_B * ln(dim)."""
    return cfg.k_B * math.log(s.dim)


def cell_weights(state: State, partition: MacrostatePartition, *,
                 tol: Tolerances = TOL) -> np.ndarray:
    """Weight of the state in each cell; non-negative, sums to one."""
    if state.dim != partition.ambient_dim:
        raise DimensionMismatchError(
            f"state dim {state.dim} != partition ambient dim {partition.ambient_dim}"
        )
    w = np.array([expectation(p, state, tol=tol) for p in partition.projectors])
    if np.any(w < -tol.weight_sum) or abs(w.sum() - 1.0) > tol.weight_sum:
        raise ValidationError(f"cell weights {w} are not a near-probability vector")
    return w


def macrostate_of(state: State, partition: MacrostatePartition,
                  cfg: EntropyConfig = EntropyConfig(), *, tol: Tolerances = TOL):
    """Index of the dominant cell, or ``SUPERPOSED`` when none dominates."""
    w = cell_weights(state, partition, tol=tol)
    nu = int(np.argmax(w))
    return nu if w[nu] > cfg.dominance_threshold else SUPERPOSED


@dataclass(frozen=True)
class TrajectoryPoint:
    time: float
    entropy: float | None          # None while superposed across cells
    weights: tuple[float, ...]


def entropy_trajectory(t: Theory, partition: MacrostatePartition, times: Sequence[float],
                       cfg: EntropyConfig = EntropyConfig(), seed: int | None = None, *,
                       tol: Tolerances = TOL) -> list[TrajectoryPoint]:
    """Entropy of the dominant macrostate along the theory's history.

    Mentaculus-style theories need ``seed`` to pick their contingent initial
    wave function; the Wentaculus needs nothing and its trajectory is a
    deterministic function of the remaining arguments.
    """
    if any(not math.isfinite(x) for x in times):
        raise ValidationError("times must be finite")
    initial = theory_initial_state(t, sample_seed=seed, tol=tol)
    points = []
    for time in times:
        state = propagate(t, initial, time, tol=tol)
        w = cell_weights(state, partition, tol=tol)
        nu = int(np.argmax(w))
        entropy = (
            boltzmann_entropy(partition.cells[nu], cfg)
            if w[nu] > cfg.dominance_threshold
            else None
        )
        points.append(TrajectoryPoint(float(time), entropy, tuple(float(x) for x in w)))
    return points


def _fmt(x: float) -> str:
    return format(x, ".17g")


def trajectory_csv(points: Sequence[TrajectoryPoint], labels: Sequence[str]) -> str:
    """Deterministic CSV: time, entropy (empty when superposed), one weight
    column per cell.  17 significant digits, '.' decimal separator, LF ends."""
    header = "time,entropy," + ",".join(f"w_{lbl}" for lbl in labels)
    lines = [header]
    for p in points:
        ent = "" if p.entropy is None else _fmt(p.entropy)
        lines.append(_fmt(p.time) + "," + ent + "," + ",".join(_fmt(w) for w in p.weights))
    return "\n".join(lines) + "\n"


def partition_by_dims(ambient_dim: int, dims: Sequence[int],
                      labels: Sequence[str] | None = None, *,
                      tol: Tolerances = TOL) -> MacrostatePartition:
    """Partition into contiguous standard-basis blocks of the given sizes."""
    if sum(dims) != ambient_dim:
        raise ValidationError(f"cell dims {list(dims)} must sum to {ambient_dim}")
    cells = []
    offset = 0
    for d in dims:
        if d < 1:
            raise ValidationError("cell dimensions must be positive")
        basis = np.zeros((ambient_dim, d))
        basis[offset:offset + d] = np.eye(d)
        cells.append(Subspace(basis, family=f"block-{offset}-{offset + d}-of-{ambient_dim}", tol=tol))
        offset += d
    return MacrostatePartition(cells, labels, tol=tol)

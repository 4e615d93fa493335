"""Branch decompositions, Born-rule weights, self-locating probabilities.

Branching is modeled by fiat: the caller designates a pointer partition and
a state decomposes into its normalized projections onto the cells, weighted
by the Born rule.  No dynamical decoherence is computed; the pointer basis
is an input, not a prediction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL, Tolerances
from .errors import DimensionMismatchError, ValidationError
from .laws import StatisticalPostulate, initial_projection, sample_statistical_postulate
from .macrostates import MacrostatePartition, cell_weights
from .qcore import DensityMatrix, State, StateVector, Subspace
from .seeding import split_seed

__all__ = [
    "Branch",
    "BranchDecomposition",
    "BranchWeightReport",
    "decompose",
    "self_location_distribution",
    "branch_weight_equivalence",
]


@dataclass(frozen=True)
class Branch:
    cell_index: int
    weight: float
    state: State


class BranchDecomposition:
    """Branches of a state relative to a pointer partition.

    Weights sum to one; every conditional state lies in its cell up to the
    projection residual tolerance.  Zero-weight cells spawn no branch.
    """

    __slots__ = ("pointer", "branches")

    def __init__(self, pointer: MacrostatePartition, branches: list[Branch], *,
                 tol: Tolerances = TOL):
        total = sum(b.weight for b in branches)
        if abs(total - 1.0) > tol.weight_sum:
            raise ValidationError(f"branch weights sum to {total!r}, expected 1")
        for b in branches:
            p = pointer.projectors[b.cell_index]
            if isinstance(b.state, StateVector):
                residual = np.linalg.norm(b.state.amplitudes - p @ b.state.amplitudes)
            else:
                residual = 1.0 - float(np.trace(p @ b.state.entries).real)
            if residual > tol.residual:
                raise ValidationError(
                    f"branch {b.cell_index} leaks out of its cell: residual {residual:.3e}"
                )
        self.pointer = pointer
        self.branches = tuple(branches)

    def weights_by_cell(self) -> np.ndarray:
        """Full weight vector over cells, zeros where no branch exists."""
        w = np.zeros(len(self.pointer))
        for b in self.branches:
            w[b.cell_index] = b.weight
        return w

    def __len__(self) -> int:
        return len(self.branches)

    def __repr__(self) -> str:
        return f"BranchDecomposition(branches={len(self.branches)})"


def decompose(state: State, pointer: MacrostatePartition, *,
              tol: Tolerances = TOL) -> BranchDecomposition:
    """Split a state into normalized cell projections with Born weights.

    Pure states branch as P psi / ||P psi||, mixed ones as P W P / w.
    Cells with weight below ``tol.branch_cutoff`` are omitted.
    """
    if state.dim != pointer.ambient_dim:
        raise DimensionMismatchError(
            f"state dim {state.dim} != pointer ambient dim {pointer.ambient_dim}"
        )
    weights = cell_weights(state, pointer, tol=tol)
    branches = []
    for nu, w in enumerate(weights):
        if w <= tol.branch_cutoff:
            continue
        p = pointer.projectors[nu]
        if isinstance(state, StateVector):
            projected = p @ state.amplitudes
            conditional: State = StateVector(projected / np.linalg.norm(projected), tol=tol)
        else:
            conditional = DensityMatrix(p @ state.entries @ p / w, tol=tol)
        branches.append(Branch(nu, float(w), conditional))
    return BranchDecomposition(pointer, branches, tol=tol)


def self_location_distribution(d: BranchDecomposition) -> list[tuple[str, float]]:
    """Branch weights re-read as a self-locating probability distribution."""
    return [(d.pointer.labels[b.cell_index], b.weight) for b in d.branches]


@dataclass(frozen=True)
class BranchWeightReport:
    """Wentaculus branch weights against a Mentaculus ensemble mean.

    ``ref_scale`` is the 2/sqrt(M) Monte Carlo yardstick the deviation is
    judged against.
    """

    subspace_dim: int
    cells: tuple[str, ...]
    sample_count: int
    weights_wentaculus: tuple[float, ...]
    weights_ensemble_mean: tuple[float, ...]
    max_abs_dev: float
    ref_scale: float

    def to_json(self) -> dict:
        return {
            "k": self.subspace_dim,
            "cells": list(self.cells),
            "M": self.sample_count,
            "weights_wentaculus": list(self.weights_wentaculus),
            "weights_ensemble_mean": list(self.weights_ensemble_mean),
            "max_abs_dev": self.max_abs_dev,
            "ref_scale": self.ref_scale,
        }


def branch_weight_equivalence(s: Subspace, pointer: MacrostatePartition, sample_count: int,
                              seed: int, *, tol: Tolerances = TOL) -> BranchWeightReport:
    """Compare branch weights of the projection state with an ensemble mean.

    The ensemble draws ``sample_count`` wave functions from the statistical
    postulate on ``s`` (child seed i = split_seed(seed, i), so any parallel
    schedule reproduces the same draws) and averages their branch weights in
    sample order.
    """
    if sample_count < 1:
        raise ValidationError("sample count must be >= 1")
    sp = StatisticalPostulate(s)
    wenta = decompose(initial_projection(s, tol=tol), pointer, tol=tol).weights_by_cell()
    acc = np.zeros(len(pointer))
    for i in range(sample_count):
        psi = sample_statistical_postulate(sp, split_seed(seed, i), tol=tol)
        acc += cell_weights(psi, pointer, tol=tol)
    mean = acc / sample_count
    return BranchWeightReport(
        subspace_dim=s.dim,
        cells=pointer.labels,
        sample_count=sample_count,
        weights_wentaculus=tuple(float(x) for x in wenta),
        weights_ensemble_mean=tuple(float(x) for x in mean),
        max_abs_dev=float(np.abs(wenta - mean).max()),
        ref_scale=2.0 / np.sqrt(sample_count),
    )

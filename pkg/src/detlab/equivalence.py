"""Empirical equivalence of the projection state and the wave-function ensemble.

The exact identity behind the equivalence claim: the mean of |psi><psi|
under the uniform sphere measure on a k-dimensional subspace is P/k, the
normalized projection.  The Monte Carlo harness certifies it at expectation
level: a finite ensemble mean approaches the projection state at the
1/sqrt(M) rate, and observable averages agree within sampling error, so no
expectation-level statistic can tell the two theories apart.

Sampling is chunked with a fixed chunk size and per-sample child seeds;
partial results combine in chunk order, so thread count never changes a
single bit of the output.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import TOL, Tolerances
from .errors import DimensionMismatchError, ValidationError
from .laws import StatisticalPostulate, initial_projection, sample_statistical_postulate
from .qcore import DensityMatrix, Observable, Subspace
from .seeding import split_seed

__all__ = [
    "ObservableStat",
    "EquivalenceReport",
    "ensemble_mean_density",
    "equivalence_report",
    "convergence_curve",
]

_CHUNK = 2048  # fixed so results never depend on thread count


def _sample_block(sp: StatisticalPostulate, seed: int, start: int, count: int, *,
                  tol: Tolerances) -> np.ndarray:
    """Rows start..start+count-1 of the ensemble, one child seed per sample."""
    block = np.empty((count, sp.subspace.ambient_dim), dtype=np.complex128)
    for i in range(count):
        psi = sample_statistical_postulate(sp, split_seed(seed, start + i), tol=tol)
        block[i] = psi.amplitudes
    return block


def _chunk_ranges(total: int) -> list[tuple[int, int]]:
    return [(a, min(a + _CHUNK, total)) for a in range(0, total, _CHUNK)]


def _map_chunks(fn, ranges, threads: int):
    """Evaluate fn over chunk ranges, returning results in chunk order."""
    if threads <= 1 or len(ranges) <= 1:
        return [fn(a, b) for a, b in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, a, b) for a, b in ranges]
        return [f.result() for f in futures]


def ensemble_mean_density(s: Subspace, sample_count: int, seed: int, *,
                          threads: int = 1, tol: Tolerances = TOL) -> DensityMatrix:
    """(1/M) sum of |psi_i><psi_i| over M statistical-postulate draws.

    Hermitian with unit trace by construction; converges to the normalized
    projection onto ``s`` like 1/sqrt(M).
    """
    if sample_count < 1:
        raise ValidationError("sample count must be >= 1")
    sp = StatisticalPostulate(s)

    def partial(a: int, b: int) -> np.ndarray:
        block = _sample_block(sp, seed, a, b - a, tol=tol)
        return block.T @ block.conj()

    partials = _map_chunks(partial, _chunk_ranges(sample_count), threads)
    acc = np.zeros((s.ambient_dim, s.ambient_dim), dtype=np.complex128)
    for p in partials:  # fixed reduction order
        acc += p
    mean = acc / sample_count
    mean = (mean + mean.conj().T) / 2.0  # scrub rounding skew
    return DensityMatrix(mean, tol=tol)


@dataclass(frozen=True)
class ObservableStat:
    label: str
    wentaculus_value: float
    ensemble_mean: float
    ensemble_std_error: float

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "wentaculusValue": self.wentaculus_value,
            "ensembleMean": self.ensemble_mean,
            "ensembleStdError": self.ensemble_std_error,
        }


@dataclass(frozen=True)
class EquivalenceReport:
    subspace_dim: int
    ambient_dim: int
    sample_count: int
    frobenius_distance: float
    per_observable: tuple[ObservableStat, ...]
    passed: bool

    def to_json(self) -> dict:
        return {
            "subspaceDim": self.subspace_dim,
            "ambientDim": self.ambient_dim,
            "sampleCount": self.sample_count,
            "frobeniusDistance": self.frobenius_distance,
            "perObservable": [o.to_json() for o in self.per_observable],
            "passed": self.passed,
        }


def equivalence_report(s: Subspace, observables: Sequence[Observable], sample_count: int,
                       seed: int, tolerance_multiplier: float = 5.0, *,
                       threads: int = 1, tol: Tolerances = TOL) -> EquivalenceReport:
    """tr(W0 A) against the ensemble mean of <psi|A|psi>, per observable.

    Passes when every difference sits within ``tolerance_multiplier``
    standard errors and the Frobenius distance between the ensemble mean
    density and W0 is below ``tolerance_multiplier * sqrt(k) / sqrt(M)``.
    The criterion is relative to sampling noise on purpose: that is what
    finite statistics can honestly certify.
    """
    if sample_count < 1:
        raise ValidationError("sample count must be >= 1")
    for a in observables:
        if a.dim != s.ambient_dim:
            raise DimensionMismatchError(f"observable dim {a.dim} != ambient {s.ambient_dim}")
    sp = StatisticalPostulate(s)
    w0 = initial_projection(s, tol=tol)
    mats = [a.entries for a in observables]

    def partial(a: int, b: int):
        block = _sample_block(sp, seed, a, b - a, tol=tol)
        gram = block.T @ block.conj()
        vals = [np.einsum("id,de,ie->i", block.conj(), m, block).real for m in mats]
        return gram, vals

    partials = _map_chunks(partial, _chunk_ranges(sample_count), threads)
    acc = np.zeros((s.ambient_dim, s.ambient_dim), dtype=np.complex128)
    values = [np.empty(sample_count) for _ in mats]
    cursor = 0
    for gram, vals in partials:  # fixed reduction/concatenation order
        acc += gram
        n = vals[0].size if vals else 0
        for col, v in zip(values, vals):
            col[cursor:cursor + n] = v
        if mats:
            cursor += n
    mean_density = acc / sample_count
    frob = float(np.linalg.norm(mean_density - w0.entries))

    stats = []
    ok = frob <= tolerance_multiplier * np.sqrt(s.dim) / np.sqrt(sample_count)
    for a, vals in zip(observables, values):
        target = float(np.trace(w0.entries @ a.entries).real)
        mean = float(vals.mean())
        stderr = float(vals.std(ddof=1) / np.sqrt(sample_count)) if sample_count > 1 else 0.0
        stats.append(ObservableStat(a.label, target, mean, stderr))
        # <= plus a 1e-12 rounding floor: a k = 1 ensemble reproduces the
        # target to double precision with stderr ~ 1e-17, and that must pass
        ok = ok and abs(mean - target) <= tolerance_multiplier * stderr + 1e-12 * max(1.0, abs(target))
    return EquivalenceReport(
        subspace_dim=s.dim,
        ambient_dim=s.ambient_dim,
        sample_count=sample_count,
        frobenius_distance=frob,
        per_observable=tuple(stats),
        passed=bool(ok),
    )


def convergence_curve(s: Subspace, sample_counts: Sequence[int], seed_batch: int, seed: int, *,
                      threads: int = 1, tol: Tolerances = TOL) -> list[tuple[int, float]]:
    """Median Frobenius distance to the projection state per sample count.

    Medians are taken over ``seed_batch`` independent batches (child seed per
    batch); they should fall like 1/sqrt(M) up to Monte Carlo noise.
    """
    if list(sample_counts) != sorted(sample_counts):
        raise ValidationError("sample counts must be ascending")
    if seed_batch < 1:
        raise ValidationError("seed batch count must be >= 1")
    w0 = initial_projection(s, tol=tol)
    curve = []
    for m in sample_counts:
        distances = []
        for b in range(seed_batch):
            mean = ensemble_mean_density(s, m, split_seed(seed, b), threads=threads, tol=tol)
            distances.append(np.linalg.norm(mean.entries - w0.entries))
        curve.append((int(m), float(np.median(distances))))
    return curve

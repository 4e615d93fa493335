"""Centralized numerical tolerances.

Every validation and agreement check in the package reads from one
``Tolerances`` record so the acceptance suite has a single knob.  The
defaults below are the contract; override by passing a replaced record
(``dataclasses.replace(TOL, unitary=1e-6)``) to the constructors and
operations that accept a ``tol`` keyword.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unit_norm: float = 1e-9          # |  ||psi|| - 1 |
    phase_equal: float = 1e-9        # 1 - |<psi|phi>| for physical equality
    hermitian: float = 1e-9          # entrywise |A - A^dag|
    trace: float = 1e-9              # |tr W - 1|
    psd: float = 1e-9                # min eigenvalue >= -psd
    orthonormal: float = 1e-9        # entrywise |B^dag B - I|, cross-cell products
    unitary: float = 1e-8            # Frobenius ||U^dag U - I||
    conjugation: float = 1e-8        # spectrum/trace drift under U W U^dag
    projector: float = 1e-9          # |P^2 - P|, |P - P^dag|
    imag_residue: float = 1e-9       # discarded imaginary part of expectations
    residual: float = 1e-9           # subspace membership ||(I-P) psi||
    purity: float = 1e-12            # |tr(W0^2) * k - 1|
    weight_sum: float = 1e-9         # |sum of cell weights - 1|
    branch_cutoff: float = 1e-12     # weights below this spawn no branch
    agreement: float = 1e-8          # trajectory agreement in determinism checks
    identical: float = 1e-10         # identical-initial-state trajectory drift
    witness_distinct: float = 1e-6   # 1 - |<w1|w2>| for witness pairs
    expm_oracle: float = 1e-7        # propagator vs Taylor-series oracle

    def replaced(self, **overrides: float) -> "Tolerances":
        """Return a copy with the named fields overridden.

        Unknown field names raise ValueError so config typos fail loudly.
        """
        valid = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - valid
        if unknown:
            raise ValueError(f"unknown tolerance fields: {sorted(unknown)}")
        return dataclasses.replace(self, **overrides)


TOL = Tolerances()

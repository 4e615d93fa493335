"""Deterministic seed derivation for concurrent samplers.

All randomness in the package flows from one caller-supplied 64-bit seed.
Independent streams (Monte Carlo samples, observable generators, seed
batches) use ``split_seed(base, i)`` so parallel evaluation order can never
change results.
"""
from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15  # 2^64 / golden ratio, odd


def split_seed(base_seed: int, index: int) -> int:
    """Derive the ``index``-th disjoint child seed of ``base_seed``.

    The rule is ``base ^ (index * 0x9E3779B97F4A7C15)`` in 64-bit modular
    arithmetic.  The multiplier is odd, so distinct indices give distinct
    seeds for any fixed base.
    """
    if index < 0:
        raise ValueError("seed index must be non-negative")
    return (base_seed ^ ((index * _GOLDEN64) & _MASK64)) & _MASK64

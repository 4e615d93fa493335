"""Independent oracles the tests check the package against.

These deliberately avoid the implementation paths they certify: the matrix
exponential is a scaled Taylor series (the propagator uses an
eigendecomposition), and the counterfactual oracle is a plain exhaustive
enumeration.
"""
from __future__ import annotations

import numpy as np


def taylor_expm(a: np.ndarray) -> np.ndarray:
    """Brute-force matrix exponential: scale, sum the Taylor series, square."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    squarings = 0
    while np.linalg.norm(a / (2.0 ** squarings), 1) > 0.5:
        squarings += 1
    b = a / (2.0 ** squarings)
    term = np.eye(n, dtype=np.complex128)
    total = np.eye(n, dtype=np.complex128)
    for k in range(1, 60):
        term = term @ b / k
        total = total + term
        if np.abs(term).max() < 1e-20:
            break
    for _ in range(squarings):
        total = total @ total
    return total


def closed_form_pauli_rotation(theta: float) -> np.ndarray:
    """exp(-i theta X) = cos(theta) I - i sin(theta) X for the 2x2 Pauli-X."""
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    return np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * x


def brute_counterfactual(model_set, similarity, antecedent, consequent, eval_id: str) -> str:
    """Exhaustive closest-worlds evaluation; returns 'true'/'false'/'vacuous-true'."""
    satisfying = [w for w in model_set.worlds if antecedent.holds_in(w)]
    if not satisfying:
        return "vacuous-true"
    best = None
    for w in satisfying:
        r = similarity.ranks[eval_id][w.id]
        if best is None or r < best:
            best = r
    for w in satisfying:
        if similarity.ranks[eval_id][w.id] == best and not consequent.holds_in(w):
            return "false"
    return "true"


def complex_orbit_escape(c: complex, max_iter: int, radius: float) -> int | None:
    """Escape index by direct complex iteration of z^2 + c, an independent
    code path from the kernels (CPython complex multiply), bit-compatible on
    the standard map."""
    z = 0j
    r2 = radius * radius
    for k in range(1, max_iter + 1):
        z = z * z + c
        if z.real * z.real + z.imag * z.imag > r2:
            return k
    return None

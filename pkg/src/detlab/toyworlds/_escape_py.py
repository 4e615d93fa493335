"""Pure-Python escape-time kernel (fallback for the compiled extension).

The orbit arithmetic is written as explicit real operations in exactly the
order the Cython kernel uses, and the extension is compiled with FP
contraction off, so both backends produce bit-identical verdicts.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def escape_many(cr: np.ndarray, ci: np.ndarray, max_iter: int, radius_sq: float,
                cubic: bool) -> tuple[np.ndarray, np.ndarray]:
    """Iterate the map from z = 0 for each point c = cr + i*ci.

    Standard map: z <- z^2 + c; cubic variant: z <- z^3 + i z^2 + c.
    Returns (iterations, escaped): escaped points carry the first iteration
    with |z|^2 > radius_sq, non-escaped ones carry max_iter (iterations run).
    """
    cr = np.ascontiguousarray(cr, dtype=np.float64)
    ci = np.ascontiguousarray(ci, dtype=np.float64)
    n = cr.size
    iters = np.zeros(n, dtype=np.intc)
    escaped = np.zeros(n, dtype=np.uint8)

    idx = np.arange(n)
    zr = np.zeros(n)
    zi = np.zeros(n)
    acr = cr.copy()
    aci = ci.copy()
    for k in range(1, max_iter + 1):
        if cubic:
            a = zr * zr
            b = zi * zi
            nzr = zr * (a - 3.0 * b) - 2.0 * zr * zi + acr
            nzi = zi * (3.0 * a - b) + (a - b) + aci
        else:
            nzr = zr * zr - zi * zi + acr
            nzi = 2.0 * zr * zi + aci
        zr, zi = nzr, nzi
        out = zr * zr + zi * zi > radius_sq
        if out.any():
            hit = idx[out]
            iters[hit] = k
            escaped[hit] = 1
            keep = ~out
            idx, zr, zi, acr, aci = idx[keep], zr[keep], zi[keep], acr[keep], aci[keep]
            if idx.size == 0:
                break
    iters[escaped == 0] = max_iter
    return iters, escaped

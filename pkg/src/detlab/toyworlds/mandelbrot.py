"""The Mandelbrot world: a constraint law over a two-dimensional spacetime.

A point c belongs to the world's matter distribution iff iterating
f_c(z) = z^2 + c from z = 0 stays bounded.  Membership of the complement is
semi-decidable (escape past radius 2 certifies divergence); membership
itself is not, so verdicts are a tri-state: certified-out with the escape
iteration, certified-in via an analytic interior test, or undetermined
after the iteration budget.  The cubic variant z^3 + i z^2 + c has no
standard interior tests and reports only certified-out / undetermined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ._kernel import escape_many, kernel_backend

__all__ = [
    "STANDARD",
    "PENROSE_CUBIC",
    "MandelbrotParams",
    "MandelbrotVerdict",
    "mandelbrot_membership",
    "orbit",
    "classify_grid",
    "render_world",
    "render_pgm",
    "verdict_csv",
    "pixel_centers",
    "kernel_backend",
    "STATUS_UNDETERMINED",
    "STATUS_OUT",
    "STATUS_IN_FIXED_POINT",
    "STATUS_IN_CARDIOID",
    "STATUS_IN_BULB",
    "STATUS_NAMES",
]

STANDARD = "standard"
PENROSE_CUBIC = "penrose-cubic"

# Grid status codes (int8); 2..4 are the interior certificates.
STATUS_UNDETERMINED = 0
STATUS_OUT = 1
STATUS_IN_FIXED_POINT = 2
STATUS_IN_CARDIOID = 3
STATUS_IN_BULB = 4

STATUS_NAMES = {
    STATUS_UNDETERMINED: "undetermined",
    STATUS_OUT: "certified-out",
    STATUS_IN_FIXED_POINT: "certified-in",
    STATUS_IN_CARDIOID: "certified-in",
    STATUS_IN_BULB: "certified-in",
}

_REASONS = {
    STATUS_IN_FIXED_POINT: "fixed-point",
    STATUS_IN_CARDIOID: "main-cardioid",
    STATUS_IN_BULB: "period-2-bulb",
}


@dataclass(frozen=True)
class MandelbrotParams:
    max_iter: int = 1000
    escape_radius: float = 2.0
    variant: str = STANDARD

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")
        if self.variant not in (STANDARD, PENROSE_CUBIC):
            raise ValidationError(f"unknown variant {self.variant!r}")
        if not self.escape_radius > 0:
            raise ValidationError("escape radius must be positive")
        if self.variant == STANDARD and self.escape_radius < 2.0:
            # |z| > 2 is what guarantees divergence for z^2 + c
            raise ValidationError("standard variant needs escape radius >= 2")


@dataclass(frozen=True)
class MandelbrotVerdict:
    """Tri-state membership verdict.

    status: 'certified-out' (with escape_iteration), 'certified-in' (with
    the analytic reason), or 'undetermined' (with iterations_run).
    """

    status: str
    escape_iteration: int | None = None
    reason: str | None = None
    iterations_run: int | None = None

    @property
    def certified_in(self) -> bool:
        return self.status == "certified-in"

    @property
    def certified_out(self) -> bool:
        return self.status == "certified-out"


def _interior_status(x: float, y: float) -> int:
    """Analytic interior certificates for the standard map, 0 if none apply."""
    if x == 0.0 and y == 0.0:
        return STATUS_IN_FIXED_POINT
    # main cardioid: with p = sqrt((x - 1/4)^2 + y^2), in iff x < p - 2 p^2 + 1/4
    p = math.sqrt((x - 0.25) * (x - 0.25) + y * y)
    if x < p - 2.0 * p * p + 0.25:
        return STATUS_IN_CARDIOID
    # period-2 bulb: |c + 1| < 1/4
    if (x + 1.0) * (x + 1.0) + y * y < 0.0625:
        return STATUS_IN_BULB
    return STATUS_UNDETERMINED


def mandelbrot_membership(c: complex, params: MandelbrotParams = MandelbrotParams()) -> MandelbrotVerdict:
    """Membership verdict for a single point.

    Interior tests run before any iteration (standard variant only), so the
    classic bounded orbits get a certificate instead of burning the budget.
    """
    c = complex(c)
    if params.variant == STANDARD:
        code = _interior_status(c.real, c.imag)
        if code != STATUS_UNDETERMINED:
            return MandelbrotVerdict("certified-in", reason=_REASONS[code])
    radius_sq = params.escape_radius * params.escape_radius
    iters, escaped = escape_many(
        np.array([c.real]), np.array([c.imag]),
        params.max_iter, radius_sq, params.variant == PENROSE_CUBIC,
    )
    if escaped[0]:
        return MandelbrotVerdict("certified-out", escape_iteration=int(iters[0]))
    return MandelbrotVerdict("undetermined", iterations_run=params.max_iter)


def orbit(c: complex, steps: int, variant: str = STANDARD) -> list[complex]:
    """The orbit prefix z_0 .. z_steps from z_0 = 0, exact in double precision.

    Same arithmetic and operation order as the escape kernels.
    """
    c = complex(c)
    zr, zi = 0.0, 0.0
    out = [complex(0.0, 0.0)]
    for _ in range(steps):
        if variant == PENROSE_CUBIC:
            a = zr * zr
            b = zi * zi
            zr, zi = (
                zr * (a - 3.0 * b) - 2.0 * zr * zi + c.real,
                zi * (3.0 * a - b) + (a - b) + c.imag,
            )
        else:
            zr, zi = zr * zr - zi * zi + c.real, 2.0 * zr * zi + c.imag
        out.append(complex(zr, zi))
    return out


Region = tuple[float, float, float, float]


def _check_region(region: Region) -> Region:
    xmin, xmax, ymin, ymax = (float(v) for v in region)
    if not (xmin < xmax and ymin < ymax):
        raise ValidationError(f"zero-area region {region}")
    return xmin, xmax, ymin, ymax


def pixel_centers(region: Region, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    """Pixel-center coordinates; row 0 carries ymax (image convention)."""
    xmin, xmax, ymin, ymax = _check_region(region)
    if width < 1 or height < 1:
        raise ValidationError("width and height must be positive")
    dx = (xmax - xmin) / width
    dy = (ymax - ymin) / height
    xs = xmin + (np.arange(width) + 0.5) * dx
    ys = ymax - (np.arange(height) + 0.5) * dy
    return xs, ys


def _classify_rows(xs: np.ndarray, ys: np.ndarray, params: MandelbrotParams):
    """Status and iteration grids for the pixel rows in ``ys``."""
    h, w = ys.size, xs.size
    status = np.zeros((h, w), dtype=np.int8)
    iters = np.zeros((h, w), dtype=np.int32)
    radius_sq = params.escape_radius * params.escape_radius
    cubic = params.variant == PENROSE_CUBIC
    for i, y in enumerate(ys):
        row_status = np.zeros(w, dtype=np.int8)
        if params.variant == STANDARD:
            fixed = (xs == 0.0) & (y == 0.0)
            row_status[fixed] = STATUS_IN_FIXED_POINT
            p = np.sqrt((xs - 0.25) ** 2 + y * y)
            cardioid = (row_status == 0) & (xs < p - 2.0 * p * p + 0.25)
            row_status[cardioid] = STATUS_IN_CARDIOID
            bulb = (row_status == 0) & ((xs + 1.0) ** 2 + y * y < 0.0625)
            row_status[bulb] = STATUS_IN_BULB
        todo = row_status == 0
        if todo.any():
            it, esc = escape_many(
                xs[todo], np.full(int(todo.sum()), y), params.max_iter, radius_sq, cubic
            )
            sub = np.where(esc == 1, STATUS_OUT, STATUS_UNDETERMINED).astype(np.int8)
            row_status[todo] = sub
            row_iters = np.zeros(w, dtype=np.int32)
            row_iters[todo] = it
            iters[i] = row_iters
        status[i] = row_status
    # interior pixels report no iteration; undetermined ones report the budget
    iters[status >= STATUS_IN_FIXED_POINT] = 0
    iters[status == STATUS_UNDETERMINED] = params.max_iter
    return status, iters


def classify_grid(region: Region, width: int, height: int,
                  params: MandelbrotParams = MandelbrotParams(), *,
                  threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel verdicts over the region: (status codes, iterations).

    Rows are independent, so the work parallelizes over row blocks; each
    block lands at a fixed offset and the result never depends on thread
    scheduling.
    """
    xs, ys = pixel_centers(region, width, height)
    if threads <= 1 or height == 1:
        return _classify_rows(xs, ys, params)
    from concurrent.futures import ThreadPoolExecutor

    block = max(1, -(-height // threads))
    spans = [(a, min(a + block, height)) for a in range(0, height, block)]
    status = np.zeros((height, width), dtype=np.int8)
    iters = np.zeros((height, width), dtype=np.int32)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(_classify_rows, xs, ys[a:b], params): (a, b) for a, b in spans}
        for fut, (a, b) in futures.items():
            s, it = fut.result()
            status[a:b] = s
            iters[a:b] = it
    return status, iters


def render_world(region: Region, width: int, height: int,
                 params: MandelbrotParams = MandelbrotParams(), *,
                 threads: int = 1) -> np.ndarray:
    """Raw image grid: 0 for certified-in, the escape iteration for
    certified-out, the max_iter sentinel for undetermined."""
    status, iters = classify_grid(region, width, height, params, threads=threads)
    return np.asarray(iters, dtype=np.int32)


def render_pgm(status: np.ndarray, iters: np.ndarray, params: MandelbrotParams) -> bytes:
    """Binary PGM (P5, maxval 255): in = 0, out = min(255, round(255 n / max_iter)),
    undetermined = 255."""
    scaled = np.minimum(255.0, np.rint(255.0 * iters.astype(np.float64) / params.max_iter))
    pixels = scaled.astype(np.uint8)
    pixels[status >= STATUS_IN_FIXED_POINT] = 0
    pixels[status == STATUS_UNDETERMINED] = 255
    h, w = pixels.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + pixels.tobytes()


def _fmt(x: float) -> str:
    return format(x, ".17g")


def verdict_csv(region: Region, width: int, height: int, status: np.ndarray,
                iters: np.ndarray) -> str:
    """Raw verdicts as CSV rows (x, y, status, iteration); certified-in rows
    leave the iteration empty."""
    xs, ys = pixel_centers(region, width, height)
    lines = ["x,y,status,iteration"]
    for i in range(height):
        for j in range(width):
            code = int(status[i, j])
            n = "" if code >= STATUS_IN_FIXED_POINT else str(int(iters[i, j]))
            lines.append(f"{_fmt(xs[j])},{_fmt(ys[i])},{STATUS_NAMES[code]},{n}")
    return "\n".join(lines) + "\n"

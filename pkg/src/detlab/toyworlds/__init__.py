"""Toy strongly deterministic worlds: lone particle and the Mandelbrot world."""
from .lone import LoneParticleWorld, lone_particle_model_set
from .mandelbrot import (
    PENROSE_CUBIC,
    STANDARD,
    MandelbrotParams,
    MandelbrotVerdict,
    classify_grid,
    kernel_backend,
    mandelbrot_membership,
    orbit,
    pixel_centers,
    render_pgm,
    render_world,
    verdict_csv,
)

__all__ = [
    "LoneParticleWorld",
    "lone_particle_model_set",
    "MandelbrotParams",
    "MandelbrotVerdict",
    "STANDARD",
    "PENROSE_CUBIC",
    "mandelbrot_membership",
    "orbit",
    "classify_grid",
    "render_world",
    "render_pgm",
    "verdict_csv",
    "pixel_centers",
    "kernel_backend",
]

"""detlab: a desk-scale numerical laboratory for determinism and strong
determinism in finite-dimensional quantum theories.

Subsystems
----------
qcore        exact complex linear algebra: states, operators, propagation
laws         theory packages (Mentaculus / Wentaculus) and determinism checks
macrostates  Boltzmann macrostates, entropy, entropy trajectories
branching    branch decompositions, Born weights, self-location
equivalence  Monte Carlo certification of expectation-level equivalence
modal        determinism definitions and counterfactuals over finite worlds
toyworlds    the lone-particle and Mandelbrot constraint-law worlds
cli          reproducible command-line surface
"""

__version__ = "0.1.0"

from .config import TOL, Tolerances
from .errors import DimensionMismatchError, NumericalError, ValidationError
from .seeding import split_seed

__all__ = [
    "__version__",
    "TOL",
    "Tolerances",
    "ValidationError",
    "DimensionMismatchError",
    "NumericalError",
    "split_seed",
]

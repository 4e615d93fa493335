"""Theories as packages of fundamental laws, and their determinism status.

A Theory is a dynamical law (Schrodinger or von Neumann flow) plus a
boundary-condition law, optionally a statistical postulate.  The two
packages of interest:

* Everettian Mentaculus: Schrodinger flow + past-hypothesis subspace +
  uniform statistical postulate over that subspace.  Deterministic, not
  strongly deterministic (the boundary law admits many initial states).
* Everettian Wentaculus: von Neumann flow + the normalized projection onto
  the same subspace as the unique initial state.  Strongly deterministic,
  and it needs no statistical postulate at all.
"""
from __future__ import annotations

import base64
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .config import TOL, Tolerances
from .errors import DimensionMismatchError, ValidationError
from .jsonio import canonical_bytes, complex_from_json, vector_to_json
from .qcore import (
    DensityMatrix,
    Hamiltonian,
    State,
    StateVector,
    Subspace,
    evolve_density,
    evolve_state,
    make_propagator,
    projector,
)

__all__ = [
    "SchrodingerFlow",
    "VonNeumannFlow",
    "DynamicalLaw",
    "PastHypothesis",
    "InitialProjection",
    "ExactPureState",
    "ExactMicrostate",
    "BoundaryLaw",
    "StatisticalPostulate",
    "Theory",
    "Refusal",
    "StrongDeterminismVerdict",
    "mentaculus",
    "wentaculus",
    "initial_projection",
    "sample_statistical_postulate",
    "is_strongly_deterministic",
    "is_deterministic",
    "strong_prediction",
    "description_length",
    "theory_to_json",
    "theory_from_json",
]

MENTACULUS_NAME = "everettian-mentaculus"
WENTACULUS_NAME = "everettian-wentaculus"
MISSING_WAVE_FUNCTION = "initial wave function"


@dataclass(frozen=True)
class SchrodingerFlow:
    """Pure-state unitary flow generated by a time-independent Hamiltonian."""

    hamiltonian: Hamiltonian


@dataclass(frozen=True)
class VonNeumannFlow:
    """Density-matrix flow W(t) = U W U^dag, same generator convention."""

    hamiltonian: Hamiltonian


DynamicalLaw = Union[SchrodingerFlow, VonNeumannFlow]


@dataclass(frozen=True)
class PastHypothesis:
    """The initial state lies inside a low-dimensional subspace."""

    subspace: Subspace


@dataclass(frozen=True)
class InitialProjection:
    """The initial state IS the normalized projection onto the subspace."""

    subspace: Subspace


@dataclass(frozen=True)
class ExactPureState:
    """Boundary law that stipulates one particular wave function outright."""

    psi: StateVector


@dataclass(frozen=True)
class ExactMicrostate:
    """Opaque classical microstate blob; exists only for the
    description-length contrast, never simulated dynamically."""

    blob: bytes


BoundaryLaw = Union[PastHypothesis, InitialProjection, ExactPureState, ExactMicrostate]


@dataclass(frozen=True)
class StatisticalPostulate:
    """Uniform surface measure on the unit sphere of a subspace."""

    subspace: Subspace
    measure: str = "uniform-sphere"

    def __post_init__(self):
        if self.measure != "uniform-sphere":
            raise ValidationError(f"unsupported measure {self.measure!r}")


@dataclass(frozen=True)
class Theory:
    """A named package of fundamental laws.

    Invariants: a past-hypothesis boundary requires a statistical postulate
    over the same subspace; an initial-projection boundary forbids one (the
    whole point of that law is to eliminate it).
    """

    name: str
    dynamics: DynamicalLaw
    boundary: BoundaryLaw
    statistics: StatisticalPostulate | None = None

    def __post_init__(self):
        h = self.dynamics.hamiltonian
        amb = _boundary_ambient_dim(self.boundary)
        if amb is not None and amb != h.dim:
            raise DimensionMismatchError(
                f"boundary ambient dim {amb} != Hamiltonian dim {h.dim}"
            )
        if isinstance(self.boundary, PastHypothesis):
            if self.statistics is None:
                raise ValidationError("past-hypothesis boundary requires a statistical postulate")
            if not self.statistics.subspace.same_space(self.boundary.subspace):
                raise ValidationError("statistical postulate must range over the boundary subspace")
        if isinstance(self.boundary, InitialProjection) and self.statistics is not None:
            raise ValidationError("initial-projection boundary admits no statistical postulate")


def _boundary_ambient_dim(b: BoundaryLaw) -> int | None:
    if isinstance(b, (PastHypothesis, InitialProjection)):
        return b.subspace.ambient_dim
    if isinstance(b, ExactPureState):
        return b.psi.dim
    return None


def mentaculus(h: Hamiltonian, s: Subspace, *, name: str = MENTACULUS_NAME) -> Theory:
    """Schrodinger flow + past hypothesis + statistical postulate over ``s``."""
    return Theory(name, SchrodingerFlow(h), PastHypothesis(s), StatisticalPostulate(s))


def wentaculus(h: Hamiltonian, s: Subspace, *, name: str = WENTACULUS_NAME) -> Theory:
    """Von Neumann flow + initial projection onto ``s``; no statistics."""
    return Theory(name, VonNeumannFlow(h), InitialProjection(s))


def initial_projection(s: Subspace, *, tol: Tolerances = TOL) -> DensityMatrix:
    """W0 = P / k: the normalized projection onto the subspace.

    Trace one by construction; purity tr(W0^2) = 1/k.
    """
    return DensityMatrix(projector(s, tol=tol) / s.dim, tol=tol)


def sample_statistical_postulate(sp: StatisticalPostulate, seed: int, *,
                                 tol: Tolerances = TOL) -> StateVector:
    """One draw from the uniform sphere measure on the subspace.

    k i.i.d. standard complex normal coefficients, normalized, expanded in
    the subspace basis; the rotation invariance of the Gaussian makes the
    result uniform on the unit sphere of the subspace.  Deterministic in
    ``seed``.
    """
    s = sp.subspace
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(s.dim) + 1j * rng.standard_normal(s.dim)
    coeffs /= np.linalg.norm(coeffs)
    return StateVector(s.basis @ coeffs, tol=tol)


def theory_initial_state(t: Theory, sample_seed: int | None = None, *,
                         tol: Tolerances = TOL) -> State:
    """The initial state a theory starts its history from.

    For a past-hypothesis boundary this is contingent: a sample seed selects
    one admissible wave function and omitting it raises ValidationError
    naming the missing input.
    """
    b = t.boundary
    if isinstance(b, InitialProjection):
        return initial_projection(b.subspace, tol=tol)
    if isinstance(b, ExactPureState):
        return b.psi
    if isinstance(b, PastHypothesis):
        if b.subspace.dim == 1:
            return StateVector(b.subspace.basis[:, 0], tol=tol)
        if sample_seed is None:
            raise ValidationError(
                f"{t.name}: contingent input missing ({MISSING_WAVE_FUNCTION}); pass a sample seed"
            )
        assert t.statistics is not None
        return sample_statistical_postulate(t.statistics, sample_seed, tol=tol)
    raise ValidationError("microstate boundary law carries no quantum state to propagate")


def propagate(t: Theory, state: State, time: float, *, tol: Tolerances = TOL) -> State:
    """Evolve a state to ``time`` under the theory's dynamical law."""
    u = make_propagator(t.dynamics.hamiltonian, time, tol=tol)
    if isinstance(state, StateVector):
        return evolve_state(u, state, tol=tol)
    return evolve_density(u, state, tol=tol)


@dataclass(frozen=True)
class StrongDeterminismVerdict:
    """Outcome of the strong-determinism check, with witness when it fails.

    ``witness`` holds two physically distinct admissible initial states; a
    ``note`` documents edge cases (a one-dimensional past-hypothesis
    subspace is a single physical state once global phase is quotiented, so
    that theory counts as strongly deterministic).
    """

    holds: bool
    witness: tuple[StateVector, StateVector] | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


def is_strongly_deterministic(t: Theory, *, tol: Tolerances = TOL) -> StrongDeterminismVerdict:
    """Does the theory admit exactly one possible history?

    True iff the boundary law admits exactly one physically distinct initial
    state and the flow is deterministic (both implemented flows are).  When
    false, returns two distinct admissible initial states as witness.
    """
    b = t.boundary
    if isinstance(b, PastHypothesis):
        s = b.subspace
        if s.dim == 1:
            return StrongDeterminismVerdict(
                True,
                note="one-dimensional past-hypothesis subspace: the admissible sphere "
                "is a single physical state under the global-phase quotient",
            )
        w1 = StateVector(s.basis[:, 0], tol=tol)
        w2 = StateVector(s.basis[:, 1], tol=tol)
        return StrongDeterminismVerdict(
            False, witness=(w1, w2),
            note=f"boundary subspace has dimension {s.dim}; e.g. two orthogonal "
            "admissible wave functions",
        )
    # InitialProjection, ExactPureState, ExactMicrostate each pin one state.
    return StrongDeterminismVerdict(True)


def _admissible(t: Theory, probe: State, *, tol: Tolerances) -> bool:
    b = t.boundary
    if isinstance(b, PastHypothesis):
        return isinstance(probe, StateVector) and b.subspace.contains(probe, tol=tol)
    if isinstance(b, ExactPureState):
        return isinstance(probe, StateVector) and probe.physically_equal(b.psi, tol=tol)
    if isinstance(b, InitialProjection):
        return isinstance(probe, DensityMatrix) and probe.allclose(
            initial_projection(b.subspace, tol=tol), atol=tol.residual
        )
    return False


def _states_agree(a: State, b: State, atol: float) -> bool:
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return abs(abs(np.vdot(a.amplitudes, b.amplitudes)) - 1.0) <= atol
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return bool(np.abs(a.entries - b.entries).max() <= atol)
    return False


def is_deterministic(t: Theory, probes: Sequence[State], times: Sequence[float], *,
                     tol: Tolerances = TOL) -> bool:
    """Numerically certify determinism over finite probes and times.

    Checks that any two probe trajectories agreeing (physically) at one
    sampled time agree at all sampled times within ``tol.agreement``.  For
    the linear unitary flows implemented this always holds; the operation
    exists to certify it, not to discover surprises.
    """
    for probe in probes:
        if not _admissible(t, probe, tol=tol):
            raise ValidationError("probe state is not admissible under the boundary law")
    trajectories = [
        [propagate(t, probe, time, tol=tol) for time in times] for probe in probes
    ]
    for i in range(len(trajectories)):
        for j in range(i + 1, len(trajectories)):
            agree = [
                _states_agree(a, b, tol.agreement)
                for a, b in zip(trajectories[i], trajectories[j])
            ]
            if any(agree) and not all(agree):
                return False
    return True


@dataclass(frozen=True)
class Refusal:
    """Returned (not raised) when a prediction needs contingent input."""

    missing: str = MISSING_WAVE_FUNCTION


def strong_prediction(t: Theory, time: float, *, tol: Tolerances = TOL) -> State | Refusal:
    """Deduce the state at ``time`` from the laws alone, or refuse.

    Strongly deterministic theories need no contingent input; anything else
    gets a Refusal naming what is missing.  This is the deduction-level
    contrast between strong and conditional prediction.
    """
    verdict = is_strongly_deterministic(t, tol=tol)
    if not verdict.holds:
        return Refusal()
    if isinstance(t.boundary, ExactMicrostate):
        raise ValidationError("microstate boundary law carries no quantum state to propagate")
    return propagate(t, theory_initial_state(t, tol=tol), time, tol=tol)


def boundary_to_json(b: BoundaryLaw) -> dict:
    if isinstance(b, PastHypothesis):
        return {"type": "past-hypothesis", "subspace": b.subspace.to_json()}
    if isinstance(b, InitialProjection):
        return {"type": "initial-projection", "subspace": b.subspace.to_json()}
    if isinstance(b, ExactPureState):
        return {"type": "exact-pure-state", "psi": vector_to_json(b.psi.amplitudes)}
    return {"type": "exact-microstate", "data": base64.b64encode(b.blob).decode("ascii")}


def boundary_from_json(obj: dict, *, tol: Tolerances = TOL) -> BoundaryLaw:
    kind = obj.get("type")
    if kind == "past-hypothesis":
        return PastHypothesis(Subspace.from_json(obj["subspace"], tol=tol))
    if kind == "initial-projection":
        return InitialProjection(Subspace.from_json(obj["subspace"], tol=tol))
    if kind == "exact-pure-state":
        return ExactPureState(StateVector(complex_from_json(obj["psi"]), tol=tol))
    if kind == "exact-microstate":
        return ExactMicrostate(base64.b64decode(obj["data"]))
    raise ValidationError(f"unknown boundary law type {kind!r}")


def description_length(b: BoundaryLaw) -> int:
    """Byte length of the canonical JSON serialization of a boundary law.

    The reproducible simplicity proxy: named subspace families serialize
    symbolically and stay short; stipulating an exact state costs its full
    numeric content.
    """
    return len(canonical_bytes(boundary_to_json(b)))


def theory_to_json(t: Theory) -> dict:
    dyn_type = "schrodinger" if isinstance(t.dynamics, SchrodingerFlow) else "von-neumann"
    stats = None
    if t.statistics is not None:
        stats = {"measure": t.statistics.measure, "subspace": t.statistics.subspace.to_json()}
    return {
        "name": t.name,
        "dynamics": {"type": dyn_type, "H": t.dynamics.hamiltonian.to_json()},
        "boundary": boundary_to_json(t.boundary),
        "statistics": stats,
    }


def theory_from_json(obj: dict, *, tol: Tolerances = TOL) -> Theory:
    try:
        dyn = obj["dynamics"]
        h = Hamiltonian(complex_from_json(dyn["H"]), tol=tol)
        if dyn["type"] == "schrodinger":
            dynamics: DynamicalLaw = SchrodingerFlow(h)
        elif dyn["type"] == "von-neumann":
            dynamics = VonNeumannFlow(h)
        else:
            raise ValidationError(f"unknown dynamics type {dyn['type']!r}")
        boundary = boundary_from_json(obj["boundary"], tol=tol)
        stats = None
        if obj.get("statistics") is not None:
            stats = StatisticalPostulate(
                Subspace.from_json(obj["statistics"]["subspace"], tol=tol),
                obj["statistics"].get("measure", "uniform-sphere"),
            )
        return Theory(obj["name"], dynamics, boundary, stats)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed theory JSON: {exc}") from exc

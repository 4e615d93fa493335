"""Exact finite-dimensional complex linear algebra.

States, operators, subspaces, and unitary propagation for time-independent
Hamiltonians.  Conventions: hbar = 1, double precision throughout, and
propagation is exact per step via eigendecomposition, so integrator error
never confounds a determinism check.  All values are immutable after
construction and all operations are pure functions of their inputs.
"""
from __future__ import annotations

import math
from typing import Union

import numpy as np

from .config import TOL, Tolerances
from .errors import DimensionMismatchError, NumericalError, ValidationError
from .jsonio import matrix_to_json, vector_to_json

__all__ = [
    "StateVector",
    "DensityMatrix",
    "Hamiltonian",
    "Subspace",
    "Propagator",
    "Observable",
    "State",
    "make_propagator",
    "evolve_state",
    "evolve_density",
    "projector",
    "expectation",
    "random_hamiltonian",
    "random_observable",
]


def _frozen_complex(data, shape_kind: str) -> np.ndarray:
    a = np.array(data, dtype=np.complex128)
    if shape_kind == "vector":
        a = a.reshape(-1)
        if a.size == 0:
            raise ValidationError("empty state vector")
    elif shape_kind == "matrix":
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValidationError(f"expected a nonempty square matrix, got shape {a.shape}")
    a.setflags(write=False)
    return a


def _check_hermitian(entries: np.ndarray, what: str, tol: float) -> None:
    dev = np.abs(entries - entries.conj().T).max()
    if dev > tol:
        raise ValidationError(f"{what} is not Hermitian: max |A - A^dag| = {dev:.3e} > {tol:.1e}")


class StateVector:
    """Pure state of an N-dimensional system.

    Unit Euclidean norm within ``tol.unit_norm``; two states are physically
    equal iff they differ by a global phase.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, *, tol: Tolerances = TOL):
        a = _frozen_complex(amplitudes, "vector")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > tol.unit_norm:
            raise ValidationError(f"state norm {norm!r} deviates from 1 beyond {tol.unit_norm}")
        self.amplitudes = a

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "StateVector") -> complex:
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dims {self.dim} and {other.dim} differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def physically_equal(self, other: "StateVector", *, tol: Tolerances = TOL) -> bool:
        """Global-phase-insensitive equality: |<self|other>| = 1 within tolerance."""
        if self.dim != other.dim:
            return False
        return abs(abs(self.overlap(other)) - 1.0) <= tol.phase_equal

    def density(self, *, tol: Tolerances = TOL) -> "DensityMatrix":
        """The rank-one density matrix |psi><psi|."""
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), tol=tol)

    def to_json(self) -> dict:
        return vector_to_json(self.amplitudes)

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


class DensityMatrix:
    """Mixed state: Hermitian, trace one, positive semidefinite."""

    __slots__ = ("entries",)

    def __init__(self, entries, *, tol: Tolerances = TOL):
        w = _frozen_complex(entries, "matrix")
        _check_hermitian(w, "density matrix", tol.hermitian)
        tr = np.trace(w)
        if abs(tr - 1.0) > tol.trace:
            raise ValidationError(f"trace {tr!r} deviates from 1 beyond {tol.trace}")
        lo = float(np.linalg.eigvalsh(w).min())
        if lo < -tol.psd:
            raise ValidationError(f"minimum eigenvalue {lo:.3e} below -{tol.psd:.1e}")
        self.entries = w

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        """tr(W^2), real by Hermiticity."""
        return float(np.vdot(self.entries, self.entries).real)

    def allclose(self, other: "DensityMatrix", atol: float) -> bool:
        return self.dim == other.dim and bool(np.abs(self.entries - other.entries).max() <= atol)

    def to_json(self) -> dict:
        return matrix_to_json(self.entries)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


State = Union[StateVector, DensityMatrix]


class Hamiltonian:
    """Hermitian generator of the dynamics, units of energy with hbar = 1."""

    __slots__ = ("entries",)

    def __init__(self, entries, *, tol: Tolerances = TOL):
        h = _frozen_complex(entries, "matrix")
        _check_hermitian(h, "Hamiltonian", tol.hermitian)
        self.entries = h

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> dict:
        return matrix_to_json(self.entries)

    def __repr__(self) -> str:
        return f"Hamiltonian(dim={self.dim})"


class Observable:
    """Hermitian operator whose expectations are the 'empirical' statistics."""

    __slots__ = ("entries", "label")

    def __init__(self, entries, label: str = "", *, tol: Tolerances = TOL):
        a = _frozen_complex(entries, "matrix")
        _check_hermitian(a, "observable", tol.hermitian)
        self.entries = a
        self.label = label

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __repr__(self) -> str:
        return f"Observable(dim={self.dim}, label={self.label!r})"


class Subspace:
    """A k-dimensional subspace of an ambient space, held as an orthonormal basis.

    Carries an optional ``family`` tag (e.g. ``"first-2-of-16"``) when built
    from a named construction; boundary-condition laws over named families
    serialize symbolically, which is what makes them short to write down.
    """

    __slots__ = ("basis", "family")

    def __init__(self, basis, family: str | None = None, *, tol: Tolerances = TOL):
        b = np.array(basis, dtype=np.complex128)
        if b.ndim != 2 or b.shape[0] == 0:
            raise ValidationError(f"basis must be an (ambient x k) matrix, got shape {b.shape}")
        n, k = b.shape
        if k < 1 or k > n:
            raise ValidationError(f"need 1 <= k <= ambientDim, got k={k}, ambientDim={n}")
        gram = b.conj().T @ b
        dev = np.abs(gram - np.eye(k)).max()
        if dev > tol.orthonormal:
            raise ValidationError(f"basis columns not orthonormal: max |B^dag B - I| = {dev:.3e}")
        b.setflags(write=False)
        self.basis = b
        self.family = family

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """P = B B^dag, the orthogonal projector onto the subspace."""
        return self.basis @ self.basis.conj().T

    def contains(self, psi: StateVector, *, tol: Tolerances = TOL) -> bool:
        """Membership up to projection residual ||(I - P) psi|| <= tol.residual."""
        if psi.dim != self.ambient_dim:
            return False
        coeffs = self.basis.conj().T @ psi.amplitudes
        residual = np.linalg.norm(psi.amplitudes - self.basis @ coeffs)
        return residual <= tol.residual

    def same_space(self, other: "Subspace") -> bool:
        return (
            self is other
            or (
                self.ambient_dim == other.ambient_dim
                and self.dim == other.dim
                and np.array_equal(self.basis, other.basis)
            )
        )

    @classmethod
    def first_k(cls, ambient_dim: int, k: int, *, tol: Tolerances = TOL) -> "Subspace":
        """Span of the first k standard basis vectors; a named family."""
        if not 1 <= k <= ambient_dim:
            raise ValidationError(f"need 1 <= k <= ambientDim, got k={k}")
        return cls(np.eye(ambient_dim, k), family=f"first-{k}-of-{ambient_dim}", tol=tol)

    @classmethod
    def lowest_energy(cls, h: "Hamiltonian", k: int, *, tol: Tolerances = TOL) -> "Subspace":
        """Span of the k lowest-energy eigenvectors of ``h``; a named family."""
        if not 1 <= k <= h.dim:
            raise ValidationError(f"need 1 <= k <= dim, got k={k}")
        _, vecs = np.linalg.eigh(h.entries)
        return cls(vecs[:, :k], family=f"lowest-{k}-of-{h.dim}", tol=tol)

    @classmethod
    def full(cls, ambient_dim: int, *, tol: Tolerances = TOL) -> "Subspace":
        return cls.first_k(ambient_dim, ambient_dim, tol=tol)

    def to_json(self) -> dict:
        """Symbolic form for reconstructible named families, else the basis."""
        if self.family is not None and self.family.startswith("first-"):
            return {"family": self.family}
        out: dict = {
            "ambientDim": self.ambient_dim,
            "k": self.dim,
            "basis": matrix_to_json(self.basis),
        }
        if self.family is not None:
            out["family"] = self.family
        return out

    @classmethod
    def from_json(cls, obj: dict, *, tol: Tolerances = TOL) -> "Subspace":
        from .jsonio import complex_from_json

        if set(obj) == {"family"}:
            parts = str(obj["family"]).split("-")
            if len(parts) != 4 or parts[0] != "first" or parts[2] != "of":
                raise ValidationError(f"unrecognized subspace family {obj['family']!r}")
            return cls.first_k(int(parts[3]), int(parts[1]), tol=tol)
        basis = complex_from_json(obj["basis"])
        return cls(basis, family=obj.get("family"), tol=tol)

    def __repr__(self) -> str:
        fam = f", family={self.family!r}" if self.family else ""
        return f"Subspace(ambientDim={self.ambient_dim}, k={self.dim}{fam})"


class Propagator:
    """Exact solution operator U = exp(-i H dt) of the unitary flows."""

    __slots__ = ("entries", "time_step")

    def __init__(self, entries, time_step: float, *, tol: Tolerances = TOL):
        u = _frozen_complex(entries, "matrix")
        dev = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))
        if dev > tol.unitary:
            raise ValidationError(f"not unitary: ||U^dag U - I||_F = {dev:.3e} > {tol.unitary:.1e}")
        self.entries = u
        self.time_step = float(time_step)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> dict:
        return matrix_to_json(self.entries) | {"timeStep": self.time_step}

    def __repr__(self) -> str:
        return f"Propagator(dim={self.dim}, timeStep={self.time_step})"


def make_propagator(h: Hamiltonian, dt: float, *, tol: Tolerances = TOL) -> Propagator:
    """U = exp(-i H dt) via spectral decomposition of H.

    Exact for time-independent H up to eigensolver tolerance; no truncation
    error.  Raises NumericalError if the eigensolver fails or the result
    drifts from unitarity.
    """
    if not math.isfinite(dt):
        raise ValidationError(f"time step must be finite, got {dt!r}")
    try:
        energies, vecs = np.linalg.eigh(h.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    u = (vecs * np.exp(-1j * energies * dt)) @ vecs.conj().T
    dev = np.linalg.norm(u.conj().T @ u - np.eye(h.dim))
    if dev > tol.unitary:
        raise NumericalError(f"propagator unitarity drift {dev:.3e} exceeds {tol.unitary:.1e}")
    return Propagator(u, dt, tol=tol)


def evolve_state(u: Propagator, psi: StateVector, *, tol: Tolerances = TOL) -> StateVector:
    """Apply the propagator to a pure state; norm is preserved, never repaired."""
    if u.dim != psi.dim:
        raise DimensionMismatchError(f"propagator dim {u.dim} != state dim {psi.dim}")
    return StateVector(u.entries @ psi.amplitudes, tol=tol)


def evolve_density(u: Propagator, w: DensityMatrix, *, tol: Tolerances = TOL) -> DensityMatrix:
    """Conjugate a density matrix: W -> U W U^dag (von Neumann flow solution)."""
    if u.dim != w.dim:
        raise DimensionMismatchError(f"propagator dim {u.dim} != density dim {w.dim}")
    return DensityMatrix(u.entries @ w.entries @ u.entries.conj().T, tol=tol)


def projector(s: Subspace, *, tol: Tolerances = TOL) -> np.ndarray:
    """Projector P = B B^dag; idempotent and Hermitian within tol.projector."""
    p = s.projector()
    dev = max(np.abs(p @ p - p).max(), np.abs(p - p.conj().T).max())
    if dev > tol.projector:
        raise NumericalError(f"projector defect {dev:.3e} exceeds {tol.projector:.1e}")
    return p


def expectation(a, state: State, *, tol: Tolerances = TOL) -> float:
    """<psi|A|psi> for pure states, tr(W A) for mixed ones.

    ``a`` may be an Observable, Hamiltonian, or a raw complex matrix (e.g. a
    projector).  The imaginary residue must be below tol.imag_residue; a
    larger residue signals a non-Hermitian operand and raises NumericalError.
    """
    m = a.entries if hasattr(a, "entries") else np.asarray(a, dtype=np.complex128)
    if m.shape[0] != state.dim:
        raise DimensionMismatchError(f"operator dim {m.shape[0]} != state dim {state.dim}")
    if isinstance(state, StateVector):
        value = complex(np.vdot(state.amplitudes, m @ state.amplitudes))
    else:
        value = complex(np.trace(state.entries @ m))
    if abs(value.imag) >= tol.imag_residue:
        raise NumericalError(
            f"imaginary residue {value.imag:.3e} >= {tol.imag_residue:.1e}; operator not Hermitian?"
        )
    return value.real


def random_hamiltonian(dim: int, seed: int, *, tol: Tolerances = TOL) -> Hamiltonian:
    """GUE-style test fixture: H = (G + G^dag)/2, G with i.i.d. standard
    complex normal entries.  Deterministic function of ``seed``."""
    if dim < 1:
        raise ValidationError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    return Hamiltonian((g + g.conj().T) / 2.0, tol=tol)


def random_observable(dim: int, seed: int, label: str = "", *, tol: Tolerances = TOL) -> Observable:
    """Random Hermitian observable, same ensemble as random_hamiltonian."""
    h = random_hamiltonian(dim, seed, tol=tol)
    return Observable(h.entries, label=label, tol=tol)

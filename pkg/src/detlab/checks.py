"""Reduced-scale invariant suite behind ``detlab check``.

Each check is a named, seeded, fast (< 1 s) certification of one package
invariant; the CLI runs them all and fails with the names of any that
break.  The full-strength versions live in the test suite; these exist so
a deployed build can re-certify itself from the command line.
"""
from __future__ import annotations

import numpy as np

from .branching import decompose
from .config import TOL
from .equivalence import ensemble_mean_density
from .errors import ValidationError
from .laws import (
    StatisticalPostulate,
    initial_projection,
    is_deterministic,
    is_strongly_deterministic,
    mentaculus,
    sample_statistical_postulate,
    wentaculus,
)
from .macrostates import cell_weights, partition_by_dims
from .modal import (
    CounterfactualVerdict,
    FiniteWorld,
    ModelSet,
    Proposition,
    SimilarityOrder,
    check_determinism,
    check_futuristic_determinism,
    check_historical_determinism,
    check_strong_determinism,
    counterfactual,
)
from .qcore import (
    Observable,
    StateVector,
    Subspace,
    evolve_density,
    expectation,
    make_propagator,
    random_hamiltonian,
)
from .seeding import split_seed
from .toyworlds import (
    MandelbrotParams,
    classify_grid,
    lone_particle_model_set,
    mandelbrot_membership,
    orbit,
)
from .toyworlds._kernel import compiled_escape_many, python_escape_many


def random_model_set(rng: np.random.Generator, max_worlds: int = 6, max_times: int = 8,
                     n_labels: int = 4) -> ModelSet:
    """Random finite model set (shared fixture generator for checks and tests)."""
    n_worlds = int(rng.integers(1, max_worlds + 1))
    n_times = int(rng.integers(2, max_times + 1))
    labels = [f"s{i}" for i in range(n_labels)]
    worlds = tuple(
        FiniteWorld(f"w{i}", {t: labels[int(rng.integers(n_labels))] for t in range(n_times)})
        for i in range(n_worlds)
    )
    return ModelSet(worlds, range(n_times))


def random_similarity(rng: np.random.Generator, m: ModelSet) -> SimilarityOrder:
    """Random total preorder per world with the self-rank-0 centering invariant."""
    ids = [w.id for w in m.worlds]
    ranks = {}
    for v in ids:
        others = [u for u in ids if u != v]
        rng.shuffle(others)
        row = {v: 0}
        rank = 1
        for u in others:
            row[u] = rank
            if rng.random() < 0.5:  # ties allowed: total preorder, not order
                rank += 1
        ranks[v] = row
    return SimilarityOrder(ranks)


def random_event_proposition(rng: np.random.Generator, m: ModelSet,
                             avoid_world: FiniteWorld | None = None) -> Proposition:
    """Random event proposition; optionally one false at ``avoid_world``.

    When the avoided world visits only one label (so no visited label/time
    pair misses it), falls back to the impossible event: the empty
    world-level proposition, false everywhere.
    """
    labels = sorted({lbl for w in m.worlds for lbl in w.trajectory.values()})
    all_pairs = [(lbl, t) for t in m.times for lbl in labels]
    if avoid_world is not None:
        all_pairs = [
            (lbl, t) for lbl, t in all_pairs if avoid_world.trajectory.get(t) != lbl
        ]
        if not all_pairs:
            return Proposition(world_ids=frozenset())
    count = int(rng.integers(1, min(4, len(all_pairs)) + 1))
    chosen = rng.choice(len(all_pairs), size=count, replace=False)
    return Proposition(event_pairs=frozenset(all_pairs[i] for i in chosen))


def _check_propagator_unitarity(seed: int, threads: int):
    worst = 0.0
    for i, dim in enumerate([2, 3, 4, 6, 8]):
        h = random_hamiltonian(dim, split_seed(seed, i))
        u = make_propagator(h, 0.37 * (i + 1))
        worst = max(worst, float(np.linalg.norm(u.entries.conj().T @ u.entries - np.eye(dim))))
    return worst < TOL.unitary, f"max ||U^dag U - I||_F = {worst:.2e}"


def _check_spectrum_preservation(seed: int, threads: int):
    worst = 0.0
    for i in range(5):
        dim = 4 + i
        h = random_hamiltonian(dim, split_seed(seed, i))
        s = Subspace.first_k(dim, 2)
        w = initial_projection(s)
        u = make_propagator(h, 1.1 + 0.3 * i)
        before = np.linalg.eigvalsh(w.entries)
        after = np.linalg.eigvalsh(evolve_density(u, w).entries)
        worst = max(worst, float(np.abs(before - after).max()))
    return worst < TOL.conjugation, f"max spectrum drift = {worst:.2e}"


def _check_projection_purity(seed: int, threads: int):
    worst = 0.0
    for k in range(1, 9):
        w0 = initial_projection(Subspace.first_k(8, k))
        worst = max(worst, abs(w0.purity() * k - 1.0), abs(np.trace(w0.entries).real - 1.0))
    return worst < TOL.purity, f"max |purity*k - 1| and |tr - 1| = {worst:.2e}"


def _check_sampler_membership(seed: int, threads: int):
    s = Subspace.first_k(6, 3)
    sp = StatisticalPostulate(s)
    p = s.projector()
    worst = 0.0
    for i in range(50):
        psi = sample_statistical_postulate(sp, split_seed(seed, i))
        worst = max(
            worst,
            abs(np.linalg.norm(psi.amplitudes) - 1.0),
            float(np.linalg.norm(psi.amplitudes - p @ psi.amplitudes)),
        )
    return worst < TOL.residual, f"max norm/membership residual = {worst:.2e}"


def _check_ensemble_identity(seed: int, threads: int):
    s = Subspace.first_k(4, 2)
    mean = ensemble_mean_density(s, 2000, seed, threads=threads)
    dist = float(np.linalg.norm(mean.entries - initial_projection(s).entries))
    return dist < 0.15, f"Frobenius distance at M=2000: {dist:.3f}"


def _check_branch_consistency(seed: int, threads: int):
    dim = 6
    pointer = partition_by_dims(dim, [2, 3, 1])
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    psi = StateVector(v / np.linalg.norm(v))
    blocks = [random_hamiltonian(d, split_seed(seed, 7 + i)).entries for i, d in enumerate([2, 3, 1])]
    a = np.zeros((dim, dim), dtype=np.complex128)
    off = 0
    for b in blocks:
        a[off:off + b.shape[0], off:off + b.shape[0]] = b
        off += b.shape[0]
    obs = Observable(a)
    d = decompose(psi, pointer)
    combined = sum(b.weight * expectation(obs, b.state) for b in d.branches)
    dev = abs(combined - expectation(obs, psi))
    return dev < TOL.agreement, f"block-observable linearity deviation = {dev:.2e}"


def _check_strong_implies_deterministic(seed: int, threads: int):
    rng = np.random.default_rng(seed)
    singletons = 0
    for _ in range(200):
        m = random_model_set(rng)
        if check_strong_determinism(m):
            singletons += 1
            if not check_determinism(m).holds:
                return False, "singleton model set failed the determinism check"
    return True, f"held on 200 sets ({singletons} singletons)"


def _check_fn8_equivalence(seed: int, threads: int):
    rng = np.random.default_rng(seed)
    for _ in range(200):
        m = random_model_set(rng)
        full = check_determinism(m).holds
        both = check_futuristic_determinism(m).holds and check_historical_determinism(m).holds
        if full != both:
            return False, "determinism != futuristic AND historical on some set"
    return True, "futuristic+historical equals determinism on 200 sets"


def _check_vacuity(seed: int, threads: int):
    rng = np.random.default_rng(seed)
    trials = 0
    for _ in range(20):
        m = random_model_set(rng, max_worlds=1)
        w = m.worlds[0]
        sim = SimilarityOrder({w.id: {w.id: 0}})
        for _ in range(20):
            a = random_event_proposition(rng, m, avoid_world=w)
            c = random_event_proposition(rng, m)
            if counterfactual(m, sim, a, c, w.id) is not CounterfactualVerdict.VACUOUS_TRUE:
                return False, "false antecedent in a singleton set was not vacuous-true"
            trials += 1
    return True, f"vacuous-true on {trials} singleton counterfactuals"


def _check_centering(seed: int, threads: int):
    rng = np.random.default_rng(seed)
    trials = 0
    for _ in range(60):
        m = random_model_set(rng)
        sim = random_similarity(rng, m)
        w = m.worlds[int(rng.integers(len(m.worlds)))]
        a = random_event_proposition(rng, m)
        c = random_event_proposition(rng, m)
        if not a.holds_in(w):
            continue
        got = counterfactual(m, sim, a, c, w.id)
        want = CounterfactualVerdict.TRUE if c.holds_in(w) else CounterfactualVerdict.FALSE
        if got is not want:
            return False, "strong centering violated"
        trials += 1
    return True, f"centering held on {trials} applicable cases"


def _check_theory_contrast(seed: int, threads: int):
    h = random_hamiltonian(6, seed)
    s = Subspace.first_k(6, 2)
    m, w = mentaculus(h, s), wentaculus(h, s)
    if not is_strongly_deterministic(w).holds:
        return False, "wentaculus not judged strongly deterministic"
    verdict = is_strongly_deterministic(m)
    if verdict.holds or verdict.witness is None:
        return False, "mentaculus with k=2 should fail with a witness"
    probes = [
        sample_statistical_postulate(m.statistics, split_seed(seed, i)) for i in range(3)
    ]
    times = [0.0, 0.5, 1.0, 2.0]
    if not (is_deterministic(m, probes, times) and is_deterministic(w, [initial_projection(s)], times)):
        return False, "determinism certification failed"
    return True, "wentaculus strong, mentaculus witnessed non-strong, both deterministic"


def _check_mandelbrot_fixtures(seed: int, threads: int):
    params = MandelbrotParams(max_iter=64)
    v1 = mandelbrot_membership(-1.0, params)
    v2 = mandelbrot_membership(1.0, params)
    v3 = mandelbrot_membership(0.0, params)
    v4 = mandelbrot_membership(2.0, params)
    seq = orbit(1.0, 4)
    ok = (
        v1.certified_in and v1.reason == "period-2-bulb"
        and v2.certified_out and v2.escape_iteration == 3
        and v3.certified_in and v3.reason == "fixed-point"
        and v4.certified_out and v4.escape_iteration == 2
        and seq == [0, 1, 2, 5, 26]
    )
    return ok, "c=-1 in, c=1 out@3, c=0 fixed point, c=2 out@2, orbit prefix exact"


def _check_kernel_parity(seed: int, threads: int):
    if compiled_escape_many is None:
        return True, "compiled backend unavailable; fallback only, nothing to compare"
    rng = np.random.default_rng(seed)
    cr = rng.uniform(-2.0, 1.0, 600)
    ci = rng.uniform(-1.5, 1.5, 600)
    for cubic in (False, True):
        it_c, esc_c = compiled_escape_many(cr, ci, 300, 4.0, cubic)
        it_p, esc_p = python_escape_many(cr, ci, 300, 4.0, cubic)
        if not (np.array_equal(it_c, it_p) and np.array_equal(esc_c, esc_p)):
            return False, "compiled and python kernels disagree"
    return True, "compiled and python kernels bit-identical on 600 points x 2 variants"


def _check_render_reproducibility(seed: int, threads: int):
    region = (-2.0, 1.0, -1.25, 1.25)
    params = MandelbrotParams(max_iter=96)
    s1, i1 = classify_grid(region, 48, 32, params, threads=1)
    s2, i2 = classify_grid(region, 48, 32, params, threads=max(2, threads))
    ok = np.array_equal(s1, s2) and np.array_equal(i1, i2)
    return ok, "grid identical across thread counts"


def _check_lone_particle(seed: int, threads: int):
    m = lone_particle_model_set(5)
    ok = (
        check_strong_determinism(m)
        and check_determinism(m).holds
        and check_futuristic_determinism(m).holds
        and check_historical_determinism(m).holds
    )
    return ok, "lone-particle model set passes all four determinism checks"


def _check_weight_sums(seed: int, threads: int):
    rng = np.random.default_rng(seed)
    pointer = partition_by_dims(8, [1, 3, 4])
    worst = 0.0
    for _ in range(20):
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        w = cell_weights(StateVector(v / np.linalg.norm(v)), pointer)
        worst = max(worst, abs(float(w.sum()) - 1.0))
    return worst < TOL.weight_sum, f"max |sum w - 1| = {worst:.2e}"


CHECKS = {
    "propagator-unitarity": _check_propagator_unitarity,
    "spectrum-preservation": _check_spectrum_preservation,
    "initial-projection-purity": _check_projection_purity,
    "sampler-membership": _check_sampler_membership,
    "ensemble-identity": _check_ensemble_identity,
    "branch-consistency": _check_branch_consistency,
    "strong-implies-deterministic": _check_strong_implies_deterministic,
    "futuristic-historical-equivalence": _check_fn8_equivalence,
    "counterfactual-vacuity": _check_vacuity,
    "counterfactual-centering": _check_centering,
    "theory-contrast": _check_theory_contrast,
    "mandelbrot-fixtures": _check_mandelbrot_fixtures,
    "kernel-parity": _check_kernel_parity,
    "render-reproducibility": _check_render_reproducibility,
    "lone-particle": _check_lone_particle,
    "weight-sums": _check_weight_sums,
}


def run_checks(seed: int, threads: int = 1, only: list[str] | None = None) -> dict[str, tuple[bool, str]]:
    """Run the named checks (all by default); returns {name: (ok, detail)}."""
    names = list(CHECKS) if not only else only
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValidationError(f"unknown checks: {unknown}")
    return {name: CHECKS[name](seed, threads) for name in names}

import numpy as np
import pytest

from detlab import ValidationError
from detlab.modal import check_determinism, check_strong_determinism
from detlab.toyworlds import (
    PENROSE_CUBIC,
    LoneParticleWorld,
    MandelbrotParams,
    classify_grid,
    kernel_backend,
    lone_particle_model_set,
    mandelbrot_membership,
    orbit,
    pixel_centers,
    render_pgm,
    render_world,
    verdict_csv,
)
from detlab.toyworlds.mandelbrot import (
    STATUS_IN_BULB,
    STATUS_IN_CARDIOID,
    STATUS_OUT,
    STATUS_UNDETERMINED,
)
from detlab.toyworlds._kernel import compiled_escape_many, python_escape_many

from oracles import complex_orbit_escape

needs_compiled = pytest.mark.skipif(
    compiled_escape_many is None, reason="compiled kernel not built"
)


class TestMembership:
    def test_minus_one_is_in_with_bulb_certificate(self):
        v = mandelbrot_membership(-1.0)
        assert v.certified_in
        assert v.reason == "period-2-bulb"

    def test_minus_one_orbit_is_the_bounded_two_cycle(self):
        seq = orbit(-1.0, 6)
        assert seq == [0, -1, 0, -1, 0, -1, 0]

    def test_plus_one_escapes_at_three(self):
        v = mandelbrot_membership(1.0)
        assert v.certified_out
        assert v.escape_iteration == 3

    def test_plus_one_orbit_prefix_exact(self):
        assert orbit(1.0, 6) == [0, 1, 2, 5, 26, 677, 458330]

    def test_origin_is_the_fixed_point(self):
        v = mandelbrot_membership(0.0)
        assert v.certified_in
        assert v.reason == "fixed-point"

    def test_two_escapes_at_two(self):
        # orbit 0 -> 2 -> 6; |2| is not > 2, |6| is
        v = mandelbrot_membership(2.0)
        assert v.certified_out
        assert v.escape_iteration == 2

    def test_cardioid_interior_point(self):
        v = mandelbrot_membership(0.1 + 0.1j)
        assert v.certified_in
        assert v.reason == "main-cardioid"

    def test_boundary_region_point_is_undetermined(self):
        v = mandelbrot_membership(-0.75 + 0.05j, MandelbrotParams(max_iter=50))
        assert v.status in ("undetermined", "certified-out")
        if v.status == "undetermined":
            assert v.iterations_run == 50

    def test_certified_out_soundness_against_complex_iteration(self):
        # independent oracle: CPython complex arithmetic reproduces the
        # reported escape iteration exactly
        rng = np.random.default_rng(5)
        params = MandelbrotParams(max_iter=200)
        for _ in range(200):
            c = complex(rng.uniform(-2.5, 1.5), rng.uniform(-2, 2))
            v = mandelbrot_membership(c, params)
            expected = complex_orbit_escape(c, 200, 2.0)
            if v.certified_out:
                assert v.escape_iteration == expected
            elif v.status == "undetermined":
                assert expected is None

    def test_certified_in_soundness_under_larger_budget(self):
        # 10x more iterations never escape for certified-in points
        rng = np.random.default_rng(6)
        params = MandelbrotParams(max_iter=100)
        checked = 0
        while checked < 25:
            c = complex(rng.uniform(-1.5, 0.5), rng.uniform(-1, 1))
            v = mandelbrot_membership(c, params)
            if not v.certified_in:
                continue
            assert complex_orbit_escape(c, 1000, 2.0) is None
            checked += 1

    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(7)
        params = MandelbrotParams(max_iter=150)
        for _ in range(100):
            c = complex(rng.uniform(-2.2, 1.2), rng.uniform(-1.6, 1.6))
            a = mandelbrot_membership(c, params)
            b = mandelbrot_membership(c.conjugate(), params)
            assert a.status == b.status
            assert a.escape_iteration == b.escape_iteration
            assert a.reason == b.reason

    def test_monotone_in_max_iter(self):
        rng = np.random.default_rng(8)
        for _ in range(60):
            c = complex(rng.uniform(-2.2, 1.2), rng.uniform(-1.6, 1.6))
            lo = mandelbrot_membership(c, MandelbrotParams(max_iter=60))
            hi = mandelbrot_membership(c, MandelbrotParams(max_iter=240))
            if lo.certified_out:
                assert hi.certified_out and hi.escape_iteration == lo.escape_iteration
            if lo.certified_in:
                assert hi.certified_in


class TestParams:
    def test_standard_requires_radius_two(self):
        with pytest.raises(ValidationError):
            MandelbrotParams(escape_radius=1.5)
        MandelbrotParams(escape_radius=1.5, variant=PENROSE_CUBIC)  # allowed

    def test_positive_budget(self):
        with pytest.raises(ValidationError):
            MandelbrotParams(max_iter=0)

    def test_unknown_variant(self):
        with pytest.raises(ValidationError):
            MandelbrotParams(variant="julia")


class TestPenroseCubic:
    def test_no_interior_certificates(self):
        params = MandelbrotParams(max_iter=100, variant=PENROSE_CUBIC)
        for c in (0.0, -1.0, 0.1 + 0.1j, 2.0):
            v = mandelbrot_membership(c, params)
            assert v.status in ("certified-out", "undetermined")

    def test_cubic_map_first_step(self):
        # z1 = i*0 + 0 + c = c; z2 = c^3 + i c^2 + c
        c = 0.3 + 0.2j
        seq = orbit(c, 2, variant=PENROSE_CUBIC)
        assert seq[1] == pytest.approx(c)
        assert seq[2] == pytest.approx(c ** 3 + 1j * c ** 2 + c)

    def test_escapes_eventually(self):
        v = mandelbrot_membership(2.0, MandelbrotParams(max_iter=50, variant=PENROSE_CUBIC))
        assert v.certified_out


class TestRender:
    def test_single_pixel_at_minus_one(self):
        grid = render_world((-1.001, -0.999, -0.001, 0.001), 1, 1)
        assert grid.shape == (1, 1)
        assert grid[0, 0] == 0

    def test_single_pixel_at_two(self):
        status, iters = classify_grid((1.999, 2.001, -0.001, 0.001), 1, 1)
        assert status[0, 0] == STATUS_OUT
        assert iters[0, 0] == 2

    def test_zero_area_region_rejected(self):
        with pytest.raises(ValidationError):
            render_world((0.0, 0.0, -1.0, 1.0), 4, 4)

    def test_row_zero_is_ymax(self):
        xs, ys = pixel_centers((-2.0, 1.0, -1.0, 1.0), 3, 4)
        assert ys[0] > ys[-1]
        assert ys[0] == pytest.approx(1.0 - 0.25)
        assert xs[0] == pytest.approx(-2.0 + 0.5)

    def test_conjugate_region_mirrors_vertically(self):
        # symmetric dyadic region, so the mirrored pixel centers are exact
        region = (-2.0, 1.0, -1.25, 1.25)
        params = MandelbrotParams(max_iter=80)
        status, iters = classify_grid(region, 32, 32, params)
        assert np.array_equal(status, status[::-1])
        assert np.array_equal(iters, iters[::-1])

    def test_conjugate_of_asymmetric_region(self):
        # dyadic bounds keep the mirrored pixel centers exactly conjugate
        params = MandelbrotParams(max_iter=80)
        a_status, a_iters = classify_grid((-0.5, 0.5, 0.25, 0.75), 16, 16, params)
        b_status, b_iters = classify_grid((-0.5, 0.5, -0.75, -0.25), 16, 16, params)
        assert np.array_equal(a_status, b_status[::-1])
        assert np.array_equal(a_iters, b_iters[::-1])

    def test_undetermined_fraction_weakly_decreases_with_budget(self):
        region = (-0.8, -0.7, 0.05, 0.15)  # boundary-rich strip
        fractions = []
        for budget in (64, 128, 256):
            status, _ = classify_grid(region, 256, 256, MandelbrotParams(max_iter=budget))
            fractions.append(np.mean(status == STATUS_UNDETERMINED))
        assert fractions[1] <= fractions[0]
        assert fractions[2] <= fractions[1]

    def test_threads_do_not_change_the_grid(self):
        region = (-2.0, 1.0, -1.25, 1.25)
        params = MandelbrotParams(max_iter=64)
        a = classify_grid(region, 40, 40, params, threads=1)
        b = classify_grid(region, 40, 40, params, threads=8)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_interior_statuses_present_on_overview(self):
        status, _ = classify_grid((-2.0, 1.0, -1.25, 1.25), 64, 64, MandelbrotParams(max_iter=64))
        present = set(np.unique(status))
        assert STATUS_IN_CARDIOID in present
        assert STATUS_IN_BULB in present
        assert STATUS_OUT in present


class TestPgmAndCsv:
    def test_pgm_layout_and_values(self):
        region = (-2.0, 1.0, -1.25, 1.25)
        params = MandelbrotParams(max_iter=256)
        status, iters = classify_grid(region, 64, 64, params)
        pgm = render_pgm(status, iters, params)
        header = b"P5\n64 64\n255\n"
        assert pgm.startswith(header)
        assert len(pgm) == len(header) + 64 * 64

    def test_pgm_pixel_semantics(self):
        params = MandelbrotParams(max_iter=256)
        status, iters = classify_grid((-1.001, -0.999, -0.001, 0.001), 1, 1, params)
        assert render_pgm(status, iters, params)[-1] == 0  # c=-1: in the set
        status, iters = classify_grid((0.999, 1.001, -0.001, 0.001), 1, 1, params)
        value = render_pgm(status, iters, params)[-1]
        assert 0 < value < 10  # c=1: small escape iteration
        # undetermined sentinel maps to 255
        params8 = MandelbrotParams(max_iter=8)
        status, iters = classify_grid((-0.758, -0.75, 0.05, 0.058), 1, 1, params8)
        assert status[0, 0] == STATUS_UNDETERMINED
        assert render_pgm(status, iters, params8)[-1] == 255

    def test_pgm_bytes_reproducible(self):
        region = (-2.0, 1.0, -1.25, 1.25)
        params = MandelbrotParams(max_iter=64)
        out = [
            render_pgm(*classify_grid(region, 32, 32, params, threads=t), params)
            for t in (1, 1, 4)
        ]
        assert out[0] == out[1] == out[2]

    def test_csv_shape_and_statuses(self):
        region = (-2.0, 1.0, -1.0, 1.0)
        status, iters = classify_grid(region, 4, 3, MandelbrotParams(max_iter=32))
        csv = verdict_csv(region, 4, 3, status, iters)
        lines = csv.splitlines()
        assert lines[0] == "x,y,status,iteration"
        assert len(lines) == 1 + 12
        statuses = {line.split(",")[2] for line in lines[1:]}
        assert statuses <= {"certified-in", "certified-out", "undetermined"}


class TestKernels:
    def test_backend_reported(self):
        assert kernel_backend() in ("compiled", "python")

    @needs_compiled
    def test_bit_parity_on_random_points(self):
        rng = np.random.default_rng(3)
        cr = rng.uniform(-2.5, 1.5, 2000)
        ci = rng.uniform(-2.0, 2.0, 2000)
        for cubic in (False, True):
            it_c, esc_c = compiled_escape_many(cr, ci, 400, 4.0, cubic)
            it_p, esc_p = python_escape_many(cr, ci, 400, 4.0, cubic)
            assert np.array_equal(it_c, it_p)
            assert np.array_equal(esc_c, esc_p)

    def test_python_kernel_contract(self):
        it, esc = python_escape_many(np.array([1.0, -1.0]), np.array([0.0, 0.0]), 25, 4.0, False)
        assert esc.tolist() == [1, 0]
        assert it.tolist() == [3, 25]  # escape iteration vs budget spent


class TestLoneParticle:
    def test_duration_and_labels(self):
        m = lone_particle_model_set(5)
        assert len(m) == 1
        w = m.worlds[0]
        assert [w.label_at(t) for t in m.times] == ["x0"] * 5

    def test_strongly_deterministic(self):
        m = lone_particle_model_set(4)
        assert check_strong_determinism(m)

    def test_deterministic_by_implication(self):
        assert check_determinism(lone_particle_model_set(4)).holds

    def test_duration_validated(self):
        with pytest.raises(ValidationError):
            LoneParticleWorld(0)
        with pytest.raises(ValidationError):
            lone_particle_model_set(0)

import numpy as np
import pytest
from numpy.testing import assert_allclose

from detlab.branching import branch_weight_equivalence, decompose, self_location_distribution
from detlab.laws import initial_projection
from detlab.macrostates import partition_by_dims
from detlab.qcore import DensityMatrix, Observable, StateVector, Subspace, random_hamiltonian
from detlab.seeding import split_seed


class TestDecompose:
    def test_single_branch(self):
        p = partition_by_dims(4, [2, 2])
        d = decompose(StateVector([0.6, 0.8, 0.0, 0.0]), p)
        assert len(d) == 1
        assert d.branches[0].cell_index == 0
        assert d.branches[0].weight == pytest.approx(1.0)

    def test_symmetric_split(self):
        p = partition_by_dims(2, [1, 1])
        d = decompose(StateVector([1.0, 1.0] / np.sqrt(2)), p)
        assert [b.weight for b in d.branches] == pytest.approx([0.5, 0.5])

    def test_mixed_block_arithmetic(self):
        # W = I/4 over cells of dims (1, 3): weights (0.25, 0.75),
        # conditional states |e0><e0| and I_3/3 (embedded)
        p = partition_by_dims(4, [1, 3])
        d = decompose(DensityMatrix(np.eye(4) / 4), p)
        assert [b.weight for b in d.branches] == pytest.approx([0.25, 0.75])
        first = np.zeros((4, 4))
        first[0, 0] = 1.0
        second = np.zeros((4, 4))
        second[1:, 1:] = np.eye(3) / 3
        assert_allclose(d.branches[0].state.entries, first, atol=1e-12)
        assert_allclose(d.branches[1].state.entries, second, atol=1e-12)

    def test_branches_live_in_their_cells(self):
        rng = np.random.default_rng(8)
        p = partition_by_dims(6, [2, 2, 2])
        for _ in range(10):
            v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            d = decompose(StateVector(v / np.linalg.norm(v)), p)
            for b in d.branches:
                proj = p.projectors[b.cell_index]
                assert np.linalg.norm(b.state.amplitudes - proj @ b.state.amplitudes) < 1e-9

    def test_zero_weight_cells_omitted(self):
        p = partition_by_dims(4, [1, 1, 2])
        d = decompose(StateVector([1.0, 0.0, 0.0, 0.0]), p)
        assert [b.cell_index for b in d.branches] == [0]


class TestSelfLocation:
    def test_single_branch(self):
        p = partition_by_dims(2, [2])
        d = decompose(StateVector([1.0, 0.0]), p)
        assert self_location_distribution(d) == [("cell0", pytest.approx(1.0))]

    def test_symmetric(self):
        p = partition_by_dims(2, [1, 1], labels=["a", "b"])
        d = decompose(StateVector([1.0, 1.0] / np.sqrt(2)), p)
        dist = self_location_distribution(d)
        assert dist == [("a", pytest.approx(0.5)), ("b", pytest.approx(0.5))]

    def test_mixed_case(self):
        p = partition_by_dims(4, [1, 3], labels=["a", "b"])
        d = decompose(DensityMatrix(np.eye(4) / 4), p)
        assert self_location_distribution(d) == [
            ("a", pytest.approx(0.25)),
            ("b", pytest.approx(0.75)),
        ]

    def test_sums_to_one(self):
        rng = np.random.default_rng(4)
        p = partition_by_dims(5, [2, 2, 1])
        v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        d = decompose(StateVector(v / np.linalg.norm(v)), p)
        assert sum(pr for _, pr in self_location_distribution(d)) == pytest.approx(1.0, abs=1e-9)

    def test_label_permutation_invariance(self):
        psi = StateVector([0.6, 0.0, 0.8, 0.0])
        p1 = partition_by_dims(4, [2, 2], labels=["x", "y"])
        p2 = partition_by_dims(4, [2, 2], labels=["y", "x"])
        d1 = dict(self_location_distribution(decompose(psi, p1)))
        d2 = dict(self_location_distribution(decompose(psi, p2)))
        assert d1["x"] == pytest.approx(d2["y"])
        assert d1["y"] == pytest.approx(d2["x"])


class TestConsistency:
    def test_block_diagonal_observable_linearity(self):
        # expectation(A, state) == sum_nu w_nu expectation(A, state_nu) for A
        # block diagonal with respect to the pointer partition
        rng = np.random.default_rng(17)
        dims = [2, 3, 1]
        p = partition_by_dims(6, dims)
        a = np.zeros((6, 6), dtype=complex)
        off = 0
        for i, d in enumerate(dims):
            a[off:off + d, off:off + d] = random_hamiltonian(d, 30 + i).entries
            off += d
        obs = Observable(a)
        from detlab.qcore import expectation

        for _ in range(10):
            v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            psi = StateVector(v / np.linalg.norm(v))
            d = decompose(psi, p)
            combined = sum(b.weight * expectation(obs, b.state) for b in d.branches)
            assert combined == pytest.approx(expectation(obs, psi), abs=1e-8)

    def test_projection_state_weights_are_dimension_ratios(self):
        # S spanned by pointer-cell basis vectors: weights = dim(cell & S)/dim(S)
        p = partition_by_dims(8, [2, 3, 3])
        s = Subspace.first_k(8, 4)  # overlaps cell0 fully (2), cell1 partially (2)
        d = decompose(initial_projection(s), p)
        w = d.weights_by_cell()
        assert_allclose(w, [2 / 4, 2 / 4, 0.0], atol=1e-9)


class TestBranchWeightEquivalence:
    def test_k1_has_zero_deviation(self):
        p = partition_by_dims(4, [1, 3])
        rep = branch_weight_equivalence(Subspace.first_k(4, 1), p, 50, seed=0)
        assert rep.max_abs_dev < 1e-9

    def test_equal_split_cells(self):
        p = partition_by_dims(4, [2, 2])
        s = Subspace(np.eye(4)[:, [0, 2]].astype(float))  # one direction per cell
        rep = branch_weight_equivalence(s, p, 10_000, seed=1)
        assert rep.weights_wentaculus == pytest.approx([0.5, 0.5])
        assert rep.max_abs_dev < 0.05
        assert rep.ref_scale == pytest.approx(2.0 / 100.0)

    def test_deviation_shrinks_with_samples(self):
        # median over 20 seed batches: dev(M=1e4) / dev(M=1e2) < 0.5
        p = partition_by_dims(4, [2, 2])
        s = Subspace(np.eye(4)[:, [0, 2]].astype(float))
        small, big = [], []
        for b in range(20):
            seed = split_seed(99, b)
            small.append(branch_weight_equivalence(s, p, 100, seed).max_abs_dev)
            big.append(branch_weight_equivalence(s, p, 10_000, seed).max_abs_dev)
        assert np.median(big) / np.median(small) < 0.5

    def test_report_json_schema(self):
        p = partition_by_dims(4, [2, 2], labels=["l", "r"])
        rep = branch_weight_equivalence(Subspace.first_k(4, 2), p, 10, seed=2)
        doc = rep.to_json()
        assert set(doc) == {
            "k", "cells", "M", "weights_wentaculus", "weights_ensemble_mean",
            "max_abs_dev", "ref_scale",
        }
        assert doc["cells"] == ["l", "r"]
        assert doc["M"] == 10

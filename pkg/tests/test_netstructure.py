import numpy as np
import pytest

from oracles import all_graphs, clustering_oracle, random_graph

from netfolio.dependence import DependenceKind, DependenceMatrix, pearson_matrix
from netfolio.errors import DependenceError
from netfolio.netstructure import (
    ThresholdAdjacency,
    build_matrices,
    integrated_clustering,
    local_clustering,
    omega_matrix,
    threshold_adjacency,
)


def dep_from_weights(weights, kind=DependenceKind.PEARSON, value_range=(-1.0, 1.0)):
    w = np.asarray(weights, dtype=float)
    np.fill_diagonal(w, 0.0)
    return DependenceMatrix(kind, w, value_range)


def constant_dep(n, value, **kwargs):
    return dep_from_weights(np.full((n, n), float(value)), **kwargs)


class TestThresholdAdjacency:
    def test_threshold_is_inclusive(self):
        adj = threshold_adjacency(constant_dep(4, 0.5), 0.5)
        expected = np.ones((4, 4)) - np.eye(4)
        assert np.array_equal(adj.adjacency, expected)

    def test_above_all_weights_gives_empty_graph(self):
        adj = threshold_adjacency(constant_dep(4, 0.5), 0.6)
        assert np.array_equal(adj.adjacency, np.zeros((4, 4)))

    def test_mixed_signs_at_zero(self):
        dep = dep_from_weights([[0.0, 0.9, 0.1],
                                [0.9, 0.0, -0.2],
                                [0.1, -0.2, 0.0]])
        adj = threshold_adjacency(dep, 0.0)
        expected = np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]], dtype=float)
        assert np.array_equal(adj.adjacency, expected)

    def test_threshold_outside_range_rejected(self):
        with pytest.raises(DependenceError, match="outside value range"):
            threshold_adjacency(constant_dep(3, 0.5), 1.5)

    def test_monotone_edge_family(self, rng):
        dep = pearson_matrix(rng.standard_normal((40, 6)))
        previous = None
        for s in np.linspace(-1.0, 1.0, 21):
            edges = threshold_adjacency(dep, float(s)).adjacency
            if previous is not None:
                assert np.all(edges <= previous)  # raising s never adds an edge
            previous = edges


class TestLocalClustering:
    def _adj(self, matrix):
        return ThresholdAdjacency(threshold=0.0, adjacency=np.asarray(matrix, dtype=float))

    def test_triangle_graph(self):
        adj = self._adj(np.ones((3, 3)) - np.eye(3))
        assert np.array_equal(local_clustering(adj), np.ones(3))

    def test_path_graph(self):
        adj = self._adj([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
        assert np.array_equal(local_clustering(adj), np.zeros(3))

    def test_complete_minus_one_edge(self):
        # K4 without edge (3,4): nodes 1,2 sit in two of their three
        # neighbor pairs' triangles; nodes 3,4 keep their single pair closed
        a = np.ones((4, 4)) - np.eye(4)
        a[2, 3] = a[3, 2] = 0.0
        got = local_clustering(self._adj(a))
        assert got == pytest.approx([2.0 / 3.0, 2.0 / 3.0, 1.0, 1.0], abs=1e-15)
        assert np.array_equal(got, clustering_oracle(a))

    def test_matches_oracle_on_all_small_graphs(self):
        for n in (2, 3, 4):
            for a in all_graphs(n):
                got = local_clustering(self._adj(a))
                assert np.array_equal(got, clustering_oracle(a))

    def test_matches_oracle_on_random_graphs(self, rng):
        for _ in range(30):
            a = random_graph(6, float(rng.uniform(0.2, 0.9)), rng)
            got = local_clustering(self._adj(a))
            assert np.array_equal(got, clustering_oracle(a))


class TestIntegratedClustering:
    def test_all_zero_weights_average_half(self):
        # integrand is 1 on [-1, 0] and 0 above: the average is 1/2 up to
        # one trapezoid cell at the jump
        for grid_size in (51, 201, 801):
            profile = integrated_clustering(constant_dep(3, 0.0), grid_size=grid_size)
            assert np.all(np.abs(profile.per_asset - 0.5) <= 1.0 / (grid_size - 1))

    def test_all_one_weights_give_one(self):
        profile = integrated_clustering(constant_dep(3, 1.0))
        assert np.array_equal(profile.per_asset, np.ones(3))

    def test_two_assets_have_no_triangles(self):
        profile = integrated_clustering(constant_dep(2, 0.7))
        assert np.array_equal(profile.per_asset, np.zeros(2))

    def test_grid_refinement_converges(self, rng):
        dep = pearson_matrix(rng.standard_normal((30, 5)))
        for g in (101, 201, 401):
            coarse = integrated_clustering(dep, grid_size=g).per_asset
            fine = integrated_clustering(dep, grid_size=2 * g).per_asset
            assert np.all(np.abs(fine - coarse) < 2.0 / g)

    def test_lower_tail_range_is_respected(self, rng):
        from netfolio.dependence import lower_tail_matrix

        dep = lower_tail_matrix(rng.standard_normal((100, 4)), q=0.2)
        profile = integrated_clustering(dep, grid_size=51)
        assert profile.grid[0] == 0.0 and profile.grid[-1] == 1.0

    def test_grid_size_validated(self):
        with pytest.raises(DependenceError, match="grid_size"):
            integrated_clustering(constant_dep(3, 0.0), grid_size=1)

    def test_batched_equals_per_threshold_evaluation(self, rng):
        dep = pearson_matrix(rng.standard_normal((25, 7)))
        profile = integrated_clustering(dep, grid_size=33)
        for i, s in enumerate(profile.grid):
            single = local_clustering(threshold_adjacency(dep, float(s)))
            assert np.array_equal(profile.per_threshold[i], single)


class TestBuildMatrices:
    def _profile(self, dep, grid_size=51):
        return integrated_clustering(dep, grid_size=grid_size)

    def test_delta_normalization(self, rng):
        r = rng.standard_normal((60, 5)) * 0.02
        mats = build_matrices(r, self._profile(pearson_matrix(r)))
        assert float(mats.delta @ mats.delta) == pytest.approx(1.0, abs=1e-12)

    def test_omega_factorization(self, rng):
        r = rng.standard_normal((60, 5)) * 0.02
        mats = build_matrices(r, self._profile(pearson_matrix(r)))
        pi = np.corrcoef(r, rowvar=False)
        reconstructed = pi * np.outer(mats.delta, mats.delta)
        assert np.max(np.abs(mats.omega - reconstructed)) < 1e-10

    def test_degenerate_all_one_profile(self, rng):
        from netfolio.netstructure import ClusteringProfile

        r = rng.standard_normal((40, 4)) * 0.01
        grid = np.linspace(-1, 1, 3)
        profile = ClusteringProfile(np.ones(4), grid, np.ones((3, 4)))
        mats = build_matrices(r, profile)
        assert np.array_equal(mats.c_matrix, np.ones((4, 4)))
        assert np.allclose(mats.h_matrix, np.outer(mats.delta, mats.delta), atol=1e-16)

    def test_degenerate_all_zero_profile(self, rng):
        from netfolio.netstructure import ClusteringProfile

        r = rng.standard_normal((40, 4)) * 0.01
        grid = np.linspace(-1, 1, 3)
        profile = ClusteringProfile(np.zeros(4), grid, np.zeros((3, 4)))
        mats = build_matrices(r, profile)
        assert np.array_equal(mats.c_matrix, np.eye(4))
        assert np.array_equal(mats.h_matrix, np.diag(mats.delta ** 2))

    def test_two_asset_hand_arithmetic(self):
        from netfolio.netstructure import ClusteringProfile

        # sample stds are exactly a*sqrt(2) for columns [-a, a]
        r = np.array([[-0.1, -0.2], [0.1, 0.2]]) / np.sqrt(2.0)
        grid = np.linspace(-1, 1, 3)
        profile = ClusteringProfile(np.array([0.5, 0.4]), grid, np.zeros((3, 2)))
        mats = build_matrices(r, profile)
        sigma = np.sqrt(np.diag(mats.sigma))
        total = (sigma ** 2).sum()
        s1, s2 = sigma / np.sqrt(total)
        assert mats.delta == pytest.approx([s1, s2], abs=1e-15)
        assert mats.h_matrix[0, 1] == pytest.approx(s1 * s2 * 0.2, abs=1e-15)
        assert sigma == pytest.approx([0.1, 0.2], abs=1e-12)

    def test_zero_variance_rejected(self):
        from netfolio.netstructure import ClusteringProfile

        r = np.column_stack([np.array([1.0, 2.0, 3.0]), np.full(3, 5.0)])
        profile = ClusteringProfile(np.zeros(2), np.linspace(-1, 1, 3), np.zeros((3, 2)))
        with pytest.raises(DependenceError, match="zero-variance"):
            build_matrices(r, profile)

    def test_profile_size_mismatch(self, rng):
        r = rng.standard_normal((30, 4))
        profile = self._profile(pearson_matrix(r[:, :3]))
        with pytest.raises(DependenceError, match="profile covers 3"):
            build_matrices(r, profile)

    def test_omega_matrix_shortcut(self, rng):
        r = rng.standard_normal((50, 4)) * 0.01
        omega = omega_matrix(r)
        sigma = np.cov(r, rowvar=False, ddof=1)
        assert np.array_equal(omega, sigma / np.diag(sigma).sum())


class TestPropositionProperties:
    def test_psd_and_pd_on_random_instances(self, rng):
        for _ in range(100):
            n = int(rng.integers(3, 12))
            r = rng.standard_normal((int(rng.integers(25, 60)), n)) * 0.01
            dep = pearson_matrix(r)
            profile = integrated_clustering(dep, grid_size=101)
            mats = build_matrices(r, profile)
            min_c = float(np.linalg.eigvalsh(mats.c_matrix)[0])
            min_h = float(np.linalg.eigvalsh(mats.h_matrix)[0])
            assert min_c >= -1e-10 and min_h >= -1e-10
            off = dep.weights[~np.eye(n, dtype=bool)]
            if off.max() < dep.value_range[1]:
                assert min_c > 0.0 and min_h > 0.0

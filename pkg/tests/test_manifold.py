"""Medians, neighborhood hypergraphs, and empirical curvature estimates."""

import itertools
import math

import numpy as np
import pytest

from hypercurv.errors import (
    CollinearError,
    EmptyHypergraphError,
    EpsilonInvalidError,
    SizeCapExceeded,
)
from hypercurv.manifold import (
    cloud_w1,
    coupled_clouds,
    empirical_coarse_scalar,
    empirical_pair_ricci,
    eps_neighborhood_hypergraph,
    median_objective,
    riemannian_median,
)
from hypercurv.rng import substream
from hypercurv.surfaces import (
    ModelSurface,
    base_point,
    exp_map,
    frame,
    geodesic_distance,
    pairwise_distances,
    sample_ball,
)

SPHERE = ModelSurface.sphere()
TORUS = ModelSurface.flat_torus()
WIDE_TORUS = ModelSurface.flat_torus(4.0)
HYPER = ModelSurface.hyperbolic()


def torus_grid_median(points, period):
    """Two-stage brute-force grid search around the first point (flat geometry)."""
    center = points[0]
    span = 0.35
    best, best_val = None, math.inf
    for _ in range(3):  # refine to ~6e-6 resolution
        xs = np.linspace(-span, span, 141)
        for dx in xs:
            for dy in xs:
                z = np.mod(center + np.array([dx, dy]), period)
                val = median_objective(TORUS, z, points)
                if val < best_val:
                    best, best_val = z, val
        center = best
        span = 2.2 * (xs[1] - xs[0])
    return best, best_val


class TestMedian:
    def test_symmetric_points_on_sphere(self):
        pole = np.array([0.0, 0.0, 1.0])
        e1 = np.array([1.0, 0.0, 0.0])
        e2 = np.array([0.0, 1.0, 0.0])
        pts = np.stack(
            [exp_map(SPHERE, pole, s) for s in (0.2 * e1, -0.2 * e1, 0.2 * e2, -0.2 * e2)]
        )
        res = riemannian_median(SPHERE, pts)
        assert geodesic_distance(SPHERE, res.point, pole) < 1e-6

    def test_objective_never_increases(self):
        pts = sample_ball(SPHERE, base_point(SPHERE), 0.3, 12, substream(3, "med"))
        res = riemannian_median(SPHERE, pts)
        hist = np.array(res.objective_history)
        assert (np.diff(hist) <= 1e-15).all()

    def test_matches_grid_search_on_torus(self):
        pts = sample_ball(TORUS, base_point(TORUS), 0.2, 3, substream(8, "grid"))
        res = riemannian_median(TORUS, pts)
        grid_pt, grid_val = torus_grid_median(pts, TORUS.period)
        assert res.objective <= grid_val + 1e-9
        assert geodesic_distance(TORUS, res.point, grid_pt) < 1e-4

    def test_sample_median_converges_to_ball_median(self):
        # the uniform-ball median on the sphere is the center by symmetry
        center = base_point(SPHERE)
        errs = []
        for n in (10, 100, 1000, 10000):
            pts = sample_ball(SPHERE, center, 0.3, n, substream(12, "lln", n))
            res = riemannian_median(SPHERE, pts)
            errs.append(geodesic_distance(SPHERE, res.point, center))
        assert all(a > b for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 5e-3

    def test_collinear_rejected(self):
        p = base_point(SPHERE)
        e1, _ = frame(SPHERE, p)
        pts = np.stack([exp_map(SPHERE, p, s * e1) for s in (0.05, 0.1, 0.15)])
        with pytest.raises(CollinearError):
            riemannian_median(SPHERE, pts)

    def test_needs_three_points(self):
        pts = sample_ball(TORUS, base_point(TORUS), 0.2, 2, substream(1, "few"))
        with pytest.raises(ValueError):
            riemannian_median(TORUS, pts)

    def test_median_lies_in_the_hull_on_the_torus(self):
        from scipy.spatial import Delaunay

        for seed in range(5):
            pts = sample_ball(TORUS, base_point(TORUS), 0.2, 8, substream(seed, "hull"))
            res = riemannian_median(TORUS, pts)
            # flat geometry far from the wrap: the lift is the plane itself
            hull = Delaunay(pts)
            assert hull.find_simplex(res.point) >= 0

    def test_median_within_point_spread(self):
        for m in (SPHERE, HYPER):
            pts = sample_ball(m, base_point(m), 0.25, 9, substream(2, "spread", m.kind))
            res = riemannian_median(m, pts)
            diam = pairwise_distances(m, pts, pts).max()
            assert pairwise_distances(m, res.point[None, :], pts).max() <= diam


class TestCloudW1:
    def test_matches_exact_transport_oracle(self):
        # uniform empirical clouds: compare the assignment value with the
        # in-repo LP on the same cost matrix via explicit distributions
        from hypercurv.simplex import solve_lp

        X = sample_ball(TORUS, base_point(TORUS), 0.3, 7, substream(2, "cw1"))
        Y = sample_ball(TORUS, base_point(TORUS), 0.3, 7, substream(3, "cw1"))
        cost = pairwise_distances(TORUS, X, Y)
        k = 7
        A = np.zeros((2 * k, k * k))
        for r in range(k):
            A[r, r * k : (r + 1) * k] = 1.0
        for s in range(k):
            A[k + s, s::k] = 1.0
        rhs = np.full(2 * k, 1.0 / k)
        lp = solve_lp(cost.ravel(), A, rhs)
        assert cloud_w1(TORUS, X, Y) == pytest.approx(lp.objective, abs=1e-10)

    def test_size_cap(self):
        X = np.zeros((513, 2)) + 0.5
        with pytest.raises(SizeCapExceeded):
            cloud_w1(TORUS, X, X)

    def test_shape_mismatch(self):
        X = sample_ball(TORUS, base_point(TORUS), 0.3, 4, substream(4, "cw1"))
        with pytest.raises(ValueError):
            cloud_w1(TORUS, X, X[:3])


class TestCoupledClouds:
    @pytest.mark.parametrize("m", (SPHERE, WIDE_TORUS, HYPER), ids=lambda m: m.kind)
    def test_clouds_are_congruent(self, m):
        x = base_point(m)
        e1, _ = frame(m, x)
        y = exp_map(m, x, 0.05 * e1)
        X, Y = coupled_clouds(m, x, y, 0.3, 32, substream(6, "cc", m.kind))
        dx = pairwise_distances(m, X, X)
        dy = pairwise_distances(m, Y, Y)
        assert np.abs(dx - dy).max() < 1e-12
        assert (pairwise_distances(m, Y, y[None, :]) < 0.3).all()


class TestNeighborhoodHypergraph:
    def test_three_close_points(self):
        pts = np.array([[0.5, 0.5], [0.52, 0.5], [0.5, 0.52]])
        h = eps_neighborhood_hypergraph(TORUS, pts, 0.1)
        assert h.num_edges == 1
        assert h.edge_labels(0) == ("p0", "p1", "p2")

    def test_all_far_apart(self):
        pts = np.array([[0.1, 0.1], [0.5, 0.5], [0.9, 0.1]])
        with pytest.raises(EmptyHypergraphError):
            eps_neighborhood_hypergraph(TORUS, pts, 0.05)

    def test_sphere_cloud_edges_verified(self):
        eps = 0.12
        pts = sample_ball(SPHERE, base_point(SPHERE), 0.3, 50, substream(17, "eps-hg"))
        h = eps_neighborhood_hypergraph(SPHERE, pts, eps)
        dist = pairwise_distances(SPHERE, pts, pts)
        index = {lbl: int(lbl[1:]) for lbl in h.labels}
        edges_as_points = [
            [index[lbl] for lbl in h.edge_labels(e)] for e in range(h.num_edges)
        ]
        # every emitted edge respects the diameter bound
        for edge in edges_as_points:
            assert max(dist[i, j] for i in edge for j in edge) < 2 * eps
        # every bounded-diameter pair is covered by some edge
        for i, j in itertools.combinations(range(50), 2):
            if dist[i, j] < 2 * eps:
                assert any(i in e and j in e for e in edges_as_points)
        # maximality: no edge extends by any further vertex
        for edge in edges_as_points:
            for v in range(50):
                if v in edge:
                    continue
                assert max(dist[v, i] for i in edge) >= 2 * eps

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            eps_neighborhood_hypergraph(TORUS, np.array([[0.5, 0.5]]), 0.1)


class TestPairRicci:
    def test_sphere_positive_near_prediction(self):
        est = empirical_pair_ricci(SPHERE, 0.3, 0.05, 256, seed=0)
        assert 0.5 * 0.01125 <= est.estimate <= 1.5 * 0.01125

    def test_torus_exactly_flat(self):
        est = empirical_pair_ricci(WIDE_TORUS, 0.3, 0.05, 256, seed=0)
        assert abs(est.estimate) < 1e-9

    def test_hyperbolic_negative(self):
        est = empirical_pair_ricci(HYPER, 0.3, 0.05, 256, seed=0)
        assert -1.5 * 0.01125 <= est.estimate <= -0.5 * 0.01125

    def test_narrow_torus_rejected(self):
        with pytest.raises(EpsilonInvalidError, match="wraps"):
            empirical_pair_ricci(TORUS, 0.3, 0.05, 64, seed=0)

    def test_delta_validation(self):
        with pytest.raises(ValueError):
            empirical_pair_ricci(SPHERE, 0.3, 0.4, 64, seed=0)

    def test_deterministic(self):
        a = empirical_pair_ricci(SPHERE, 0.3, 0.05, 64, seed=5)
        b = empirical_pair_ricci(SPHERE, 0.3, 0.05, 64, seed=5)
        assert a.estimate == b.estimate


class TestCoarseScalar:
    def test_signs_and_determinism(self):
        sphere = empirical_coarse_scalar(SPHERE, 0.3, 8, 64, 6, seed=11)
        assert sphere.mean > 0
        hyper = empirical_coarse_scalar(HYPER, 0.3, 8, 64, 6, seed=11)
        assert hyper.mean < 0
        torus = empirical_coarse_scalar(WIDE_TORUS, 0.3, 8, 64, 6, seed=11)
        assert abs(torus.mean) < 1e-9
        assert torus.ci_low - 1e-12 <= 0.0 <= torus.ci_high + 1e-12
        again = empirical_coarse_scalar(SPHERE, 0.3, 8, 64, 6, seed=11)
        assert again.kappa_hats == sphere.kappa_hats

    def test_narrow_torus_rejected(self):
        with pytest.raises(EpsilonInvalidError, match="wraps"):
            empirical_coarse_scalar(TORUS, 0.3, 8, 32, 2, seed=0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            empirical_coarse_scalar(SPHERE, 0.3, 2, 32, 2, seed=0)
        with pytest.raises(ValueError):
            empirical_coarse_scalar(SPHERE, 0.3, 8, 32, 0, seed=0)

    def test_record_fields(self):
        res = empirical_coarse_scalar(SPHERE, 0.3, 6, 32, 3, seed=4)
        assert len(res.records) == 3
        for rec in res.records:
            assert rec["median_cost"] > 0
            assert rec["w_upper"] > 0
            assert rec["kappa_hat"] == pytest.approx(
                1.0 - rec["w_upper"] / rec["median_cost"], abs=1e-12
            )

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geometry import (
    Dataset, CenterSet, dist, cost, assign, clamp_to_ball, clamp_rows_to_ball,
    cover_ball, lattice_spacing, lattice_size_bound, distance_matrix
)
from utils.errors import ValidationError

coords = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)


def points_of(dim):
    return st.lists(coords, min_size=dim, max_size=dim)


def test_dist_examples():
    assert dist([0, 0], [0, 0]) == 0.0
    assert dist([0, 0], [3, 4]) == 5.0


def test_dist_dimension_mismatch():
    with pytest.raises(ValidationError):
        dist([0, 0], [1, 2, 3])


@given(points_of(3), points_of(3))
def test_dist_symmetric(p, q):
    assert dist(p, q) == dist(q, p)


@given(points_of(2), points_of(2), points_of(2))
def test_triangle_inequality(p, q, r):
    assert dist(p, r) <= dist(p, q) + dist(q, r) + 1e-9


def test_cost_examples():
    data = Dataset.from_points([[0, 0], [2, 0]])
    assert cost(data, CenterSet.from_points([[0, 0]])) == 2.0
    assert cost(data, CenterSet.from_points([[0, 0], [2, 0]])) == 0.0


def test_cost_uses_weights():
    data = Dataset.from_points([[0.0], [3.0]], weights=[2.0, 0.5])
    assert cost(data, CenterSet.from_points([[1.0]])) == pytest.approx(2.0 * 1 + 0.5 * 2)


def test_cost_empty_centers_rejected():
    data = Dataset.from_points([[0, 0]])
    with pytest.raises(ValidationError):
        cost(data, CenterSet.from_points(np.zeros((0, 2)), dim=2))


def test_assign_ties_go_to_lowest_index():
    data = Dataset.from_points([[0.0], [1.0]])
    a = assign(data, CenterSet.from_points([[-1.0], [1.0], [-1.0]]))
    assert a.owner.tolist() == [0, 1]
    a = assign(Dataset.from_points([[0.0]]), CenterSet.from_points([[1.0], [-1.0]]))
    assert a.owner.tolist() == [0]


def test_assign_counts_sum_to_total_weight():
    gen = np.random.default_rng(3)
    data = Dataset.from_points(gen.normal(size=(30, 2)), weights=gen.uniform(0, 2, 30))
    centers = CenterSet.from_points(gen.normal(size=(4, 2)))
    a = assign(data, centers)
    assert a.per_center_count.sum() == pytest.approx(data.total_weight)
    assert float(np.dot(data.weights, a.distances)) == pytest.approx(cost(data, centers))


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=10_000))
def test_cost_monotone_under_added_centers(seed):
    gen = np.random.default_rng(seed)
    data = Dataset.from_points(gen.normal(size=(15, 3)))
    small = gen.normal(size=(2, 3))
    extra = gen.normal(size=(3, 3))
    S = CenterSet.from_points(small)
    S_plus = CenterSet.from_points(np.vstack([small, extra]))
    assert cost(data, S_plus) <= cost(data, S)


def test_dataset_validates_input():
    with pytest.raises(ValidationError):
        Dataset.from_points([[0.0, np.nan]])
    with pytest.raises(ValidationError):
        Dataset.from_points([[0.0], [1.0]], weights=[1.0])
    with pytest.raises(ValidationError):
        Dataset.from_points([[0.0]], weights=[-1.0])


def test_dataset_does_not_freeze_caller_array():
    raw = np.zeros((3, 2))
    Dataset.from_points(raw)
    raw[0, 0] = 1.0
    assert raw[0, 0] == 1.0


def test_clamp_examples():
    assert np.allclose(clamp_to_ball([0.1, 0.2], 1.0), [0.1, 0.2])
    assert np.allclose(clamp_to_ball([3, 4], 1.0), [0.6, 0.8])
    assert np.allclose(clamp_to_ball([0, 0], 5.0), [0, 0])


@given(points_of(3), st.floats(min_value=0.01, max_value=50))
def test_clamp_norm_and_idempotent(p, radius):
    once = clamp_to_ball(p, radius)
    assert np.linalg.norm(once) <= radius + 1e-12
    assert np.allclose(clamp_to_ball(once, radius), once)


def test_clamp_rows_matches_single_point_version():
    pts = np.array([[3.0, 4.0], [0.1, 0.1], [0.0, -9.0]])
    rows = clamp_rows_to_ball(pts, 1.0)
    for p, r in zip(pts, rows):
        assert np.allclose(clamp_to_ball(p, 1.0), r)


def test_cover_ball_one_dimensional_example():
    C = cover_ball([0.0], 1.0, 0.5)
    assert sorted(C[:, 0].tolist()) == [-1.0, 0.0, 1.0]
    xs = np.linspace(-1, 1, 20001)[:, None]
    assert distance_matrix(xs, C).min(axis=1).max() <= 0.5 + 1e-12


def test_cover_ball_contains_center_and_respects_bound():
    center = [0.3, -0.2]
    C = cover_ball(center, 2.0, 0.5)
    assert np.any(np.all(np.isclose(C, center), axis=1))
    assert C.shape[0] <= lattice_size_bound(2.0, 0.5, 2)
    assert lattice_spacing(0.5, 2) == pytest.approx(1 / math.sqrt(2))


def test_cover_radius_at_least_radius_keeps_center():
    C = cover_ball([1.0, 1.0], 0.5, 2.0)
    assert np.any(np.all(C == [1.0, 1.0], axis=1))


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_cover_ball_covers_uniform_samples(dim):
    gen = np.random.default_rng(dim)
    center = gen.normal(size=dim)
    radius, cover_radius = 1.0, 0.3
    directions = gen.normal(size=(10_000, dim))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    samples = center + directions * radius * gen.uniform(size=(10_000, 1)) ** (1 / dim)
    C = cover_ball(center, radius, cover_radius)
    assert distance_matrix(samples, C).min(axis=1).max() <= cover_radius + 1e-9


def test_cover_ball_rejects_bad_radius():
    with pytest.raises(ValidationError):
        cover_ball([0.0], 1.0, 0.0)
    with pytest.raises(ValidationError):
        cover_ball([0.0], -1.0, 0.5)

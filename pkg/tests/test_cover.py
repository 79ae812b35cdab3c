import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cover import (
    ThresholdSet, build_thresholds, threshold_cover, verify_cover_bound,
    lattice_point_count, dedup_rows
)
from geometry import Dataset, CenterSet, cost, distance_matrix
from kmedian import exact_kmedian_oracle, local_search_kmedian
from utils.errors import ValidationError


def test_thresholds_example():
    T = build_thresholds(1.0, 0.5, 4)
    assert T.thresholds == pytest.approx([0.5, 0.75, 1.125, 1.6875, 2.53125, 3.796875, 5.6953125])
    assert len(T) == 7 == ThresholdSet.expected_size(0.5, 4)


def test_thresholds_empty_for_zero_cost():
    assert len(build_thresholds(0.0, 0.5, 10)) == 0


@pytest.mark.parametrize("eps", [0.0, -0.1, 0.51, 1.0])
def test_thresholds_reject_bad_eps(eps):
    with pytest.raises(ValidationError):
        build_thresholds(1.0, eps, 4)


@settings(max_examples=100)
@given(st.floats(min_value=1e-3, max_value=1e3), st.sampled_from([0.25, 0.5]), st.integers(min_value=1, max_value=200))
def test_threshold_recurrence_and_count(R, eps, n):
    T = build_thresholds(R, eps, n).thresholds
    assert T[0] == pytest.approx(eps * R)
    for a, b in zip(T, T[1:]):
        assert b == pytest.approx((1 + eps) * a)
    assert T[-1] >= n * R
    assert all(t < n * R for t in T[:-1])
    assert len(T) == ThresholdSet.expected_size(eps, n)


def test_cover_with_zero_cost_returns_reference():
    ref = CenterSet.from_points([[0.0, 0.0], [1.0, 1.0]])
    S = threshold_cover(ref, 0.0, 0.5, 10)
    assert np.array_equal(S.centers, ref.centers)


def test_cover_one_dimensional_example():
    ref = CenterSet.from_points([[0.0]])
    S = threshold_cover(ref, 1.0, 0.5, 4)
    T = build_thresholds(1.0, 0.5, 4).thresholds
    # 每个阈值 t：格距 t，覆盖 {-t, 0, t}
    expected = {0.0}
    for t in T:
        expected.update({-t, t})
    assert sorted(S.centers[:, 0].tolist()) == pytest.approx(sorted(expected))
    assert S.centers[0, 0] == 0.0


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("eps", [0.25, 0.5])
def test_cover_size_matches_closed_form(dim, eps):
    gen = np.random.default_rng(dim)
    ref = CenterSet.from_points(gen.normal(size=(1, dim)))
    R, n = 0.7, 9
    S = threshold_cover(ref, R, eps, n)
    size_T = len(build_thresholds(R, eps, n))
    assert S.k == 1 + size_T * (lattice_point_count(dim, eps) - 1)
    per_axis = 2 * math.ceil(math.sqrt(dim) / (2 * eps)) + 1
    assert S.k <= 1 + size_T * per_axis ** dim


def test_reference_centers_come_first():
    ref = CenterSet.from_points([[0.2, 0.1], [-0.5, 0.4]])
    S = threshold_cover(ref, 0.3, 0.5, 6)
    assert np.array_equal(S.centers[:2], ref.centers)


def test_dedup_keeps_first_occurrence():
    pts = np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0], [3.0, 3.0]])
    assert dedup_rows(pts).tolist() == [[1.0, 2.0], [0.0, 0.0], [3.0, 3.0]]


def test_verify_zero_cost_instance():
    data = Dataset.from_points([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
    ref = CenterSet.from_points([[0.0, 0.0], [1.0, 1.0]])
    S = threshold_cover(ref, 0.0, 0.5, 3)
    report = verify_cover_bound(data, ref, S, 0.5)
    assert report.cover_cost == 0.0
    assert report.bound_3enR == 0.0
    assert report.passed and report.per_point_ok


def test_ring_instance_points_between_thresholds():
    eps, n = 0.5, 8
    # 单位圆上的点，距离 1 落在阈值 0.75 与 1.125 之间
    angles = np.linspace(0, 2 * np.pi, n, endpoint=False)
    data = Dataset.from_points(np.c_[np.cos(angles), np.sin(angles)])
    ref = CenterSet.from_points([[0.0, 0.0]])
    R = cost(data, ref) / n
    S = threshold_cover(ref, R, eps, n)
    report = verify_cover_bound(data, ref, S, eps)
    assert report.passed
    assert report.per_point_ok
    assert report.max_point_ratio <= 1.0 + 1e-9


def _random_cover_instances():
    gen = np.random.default_rng(20240601)
    for i in range(200):
        n = int(gen.integers(8, 41))
        dim = int(gen.choice([1, 2, 3]))
        k = int(gen.choice([1, 2, 3]))
        eps = float(gen.choice([0.25, 0.5]))
        yield i, Dataset.from_points(gen.uniform(-1, 1, size=(n, dim))), k, eps


def test_cover_bound_on_random_instances():
    for i, data, k, eps in _random_cover_instances():
        if data.n <= 12:
            ref = exact_kmedian_oracle(data, k)
        else:
            ref = local_search_kmedian(data, k, CenterSet.from_points(data.points))
        R = ref.cost / data.n
        S = threshold_cover(ref.centers, R, eps, data.n)
        report = verify_cover_bound(data, ref.centers, S, eps)
        assert report.passed, f"instance {i}: {report}"
        assert report.cover_cost <= 3 * eps * ref.cost + 1e-9
        assert report.per_point_ok, f"instance {i}"
        d_ref = distance_matrix(data.points, ref.centers.centers).min(axis=1)
        d_S = distance_matrix(data.points, S.centers).min(axis=1)
        assert np.all(d_S <= d_ref + 1e-9)

import numpy as np
import pytest
from scipy.spatial.distance import pdist

from data import load_dataset, separated_mixture, uniform_ball, mixture_centers
from dp import SeededRng
from utils.errors import DatasetParseError, ValidationError


def write(tmp_path, text, name="points.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_zeros_without_header(tmp_path):
    loaded = load_dataset(write(tmp_path, "0,0\n0,0\n0,0\n"))
    assert loaded.dataset.n == 3
    assert np.all(loaded.dataset.points == 0.0)
    assert loaded.columns == ["x0", "x1"]


def test_weight_column(tmp_path):
    loaded = load_dataset(write(tmp_path, "x,y,weight\n0,1,2\n1,1,0.5\n3,0,4\n"))
    assert loaded.dataset.dim == 2
    assert loaded.dataset.total_weight == pytest.approx(6.5)
    assert loaded.columns == ["x", "y"]


def test_normalize_preserves_distance_ratios(tmp_path):
    gen = np.random.default_rng(0)
    pts = gen.normal(size=(30, 3))
    pts *= 10.0 / np.linalg.norm(pts, axis=1).max()
    text = "\n".join(",".join(repr(float(v)) for v in row) for row in pts) + "\n"
    loaded = load_dataset(write(tmp_path, text), normalize=True)
    X = np.asarray(loaded.dataset.points)
    assert np.linalg.norm(X, axis=1).max() == pytest.approx(1.0)
    before, after = pdist(pts), pdist(X)
    assert np.allclose(after / after[0], before / before[0])
    assert np.allclose(loaded.to_original(X), pts)


def test_blank_lines_are_skipped(tmp_path):
    loaded = load_dataset(write(tmp_path, "1,2\n\n3,4\n"))
    assert loaded.dataset.n == 2


def test_ragged_row_reports_line(tmp_path):
    with pytest.raises(DatasetParseError) as info:
        load_dataset(write(tmp_path, "1,2\n3,4\n5,6,7\n"))
    assert info.value.row == 3


def test_non_numeric_field_reports_line(tmp_path):
    with pytest.raises(DatasetParseError) as info:
        load_dataset(write(tmp_path, "a,b\n1,2\n\n3,oops\n"))
    assert info.value.row == 4


def test_empty_file(tmp_path):
    with pytest.raises(DatasetParseError) as info:
        load_dataset(write(tmp_path, "\n\n"))
    assert info.value.row == 0


def test_header_only(tmp_path):
    with pytest.raises(DatasetParseError):
        load_dataset(write(tmp_path, "x,y\n"))


def test_negative_weight(tmp_path):
    with pytest.raises(DatasetParseError) as info:
        load_dataset(write(tmp_path, "x,weight\n1,1\n2,-1\n"))
    assert info.value.row == 3


def test_parse_error_is_validation_error(tmp_path):
    with pytest.raises(ValidationError):
        load_dataset(str(tmp_path / "missing.csv"))


def test_fixture_loads(twelve_points_csv):
    loaded = load_dataset(twelve_points_csv)
    assert loaded.dataset.n == 12
    assert np.linalg.norm(loaded.dataset.points, axis=1).max() < 1.0


def test_mixture_is_in_unit_ball_and_balanced():
    data, labels = separated_mixture(400, 5, 4, SeededRng(0))
    assert np.linalg.norm(data.points, axis=1).max() <= 1.0 + 1e-12
    assert np.bincount(labels).tolist() == [100] * 4
    assert mixture_centers(2, 4, 0.8).tolist() == [[0.8, 0.0], [0.0, 0.8], [-0.8, 0.0], [0.0, -0.8]]
    with pytest.raises(ValidationError):
        mixture_centers(1, 3, 0.8)


def test_uniform_ball_inside():
    data = uniform_ball(500, 4, SeededRng(1), radius=2.0)
    assert np.linalg.norm(data.points, axis=1).max() <= 2.0 + 1e-12

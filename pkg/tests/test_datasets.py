import numpy as np
import pytest

from ocuniv.datasets import (
    Dataset,
    DatasetError,
    GaussianSpec,
    LabeledTestSet,
    UniversumSet,
    generate_gaussian,
    generate_noise_universum,
    load_csv,
    save_csv,
    scale_to_range,
    synthetic_preset,
)


def test_generate_gaussian_paper_shape():
    spec = GaussianSpec(mu=(1.0, 1.0), sigma=(0.25, 1.0), count=10, seed=0)
    data = generate_gaussian(spec)
    assert data.x.shape == (10, 2)


def test_generate_gaussian_mean_concentration():
    # empirical mean within 3*sigma/sqrt(count) of mu per coordinate
    spec = GaussianSpec(mu=(0.25, 1.0), sigma=(0.25, 1.0), count=10000, seed=7)
    data = generate_gaussian(spec)
    tol = 3.0 * np.asarray(spec.sigma) / np.sqrt(spec.count)
    assert np.all(np.abs(data.x.mean(axis=0) - spec.mu) < tol)


def test_generate_gaussian_tiny_sigma_concentrates_on_mu():
    spec = GaussianSpec(mu=(2.0, -3.0), sigma=(1e-12, 1e-12), count=500, seed=1)
    data = generate_gaussian(spec)
    assert np.allclose(data.x.mean(axis=0), spec.mu, atol=1e-10)


def test_generate_gaussian_deterministic():
    spec = GaussianSpec(mu=(0.0,), sigma=(1.0,), count=50, seed=42)
    a = generate_gaussian(spec)
    b = generate_gaussian(spec)
    assert np.array_equal(a.x, b.x)


@pytest.mark.parametrize("bad", [
    dict(mu=(0.0,), sigma=(0.0,), count=5, seed=0),
    dict(mu=(0.0,), sigma=(-1.0,), count=5, seed=0),
    dict(mu=(0.0,), sigma=(1.0,), count=0, seed=0),
    dict(mu=(0.0, 1.0), sigma=(1.0,), count=5, seed=0),
])
def test_gaussian_spec_rejects_invalid(bad):
    with pytest.raises(DatasetError):
        GaussianSpec(**bad)


def test_noise_universum_uniform_in_unit_interval():
    univ = generate_noise_universum(200, 3, "uniform01", seed=3)
    assert univ.x.shape == (200, 3)
    assert np.all((univ.x >= 0.0) & (univ.x <= 1.0))


def test_noise_universum_gaussian_moments():
    univ = generate_noise_universum(10000, 10, "gaussian01", seed=5)
    flat = univ.x.ravel()
    assert abs(flat.mean()) < 0.02
    assert abs(flat.var() - 1.0) < 0.05


def test_noise_universum_deterministic_single_value():
    a = generate_noise_universum(1, 1, "gaussian01", seed=11)
    b = generate_noise_universum(1, 1, "gaussian01", seed=11)
    assert a.x[0, 0] == b.x[0, 0]


def test_noise_universum_rejects_bad_args():
    with pytest.raises(DatasetError):
        generate_noise_universum(0, 2, "gaussian01", seed=0)
    with pytest.raises(DatasetError):
        generate_noise_universum(2, 2, "triangular", seed=0)


def test_scale_endpoints_map_to_endpoints():
    scaled, _ = scale_to_range(np.array([[0.0], [1.0]]), -1.0, 1.0)
    assert scaled.tolist() == [[-1.0], [1.0]]


def test_scale_constant_column_maps_to_midpoint():
    scaled, _ = scale_to_range(np.array([[5.0], [5.0], [5.0]]), -1.0, 1.0)
    assert np.all(scaled == 0.0)


def test_scale_affine_interior_point():
    scaled, _ = scale_to_range(np.array([[2.0], [4.0], [6.0]]), -1.0, 1.0)
    assert scaled.ravel().tolist() == [-1.0, 0.0, 1.0]


def test_scale_roundtrip_non_constant_columns():
    rng = np.random.default_rng(0)
    data = rng.normal(size=(40, 6)) * rng.uniform(0.5, 20.0, size=6)
    scaled, params = scale_to_range(data, -1.0, 1.0)
    back = params.invert(scaled)
    assert np.all(np.abs(back - data) <= 1e-12 * np.maximum(1.0, np.abs(data)))


def test_scale_params_reuse_on_new_data():
    train = np.array([[0.0, 10.0], [2.0, 30.0]])
    _, params = scale_to_range(train, 0.0, 1.0)
    test = params.apply(np.array([[1.0, 20.0]]))
    assert test.ravel().tolist() == [0.5, 0.5]


def test_scale_rejects_bad_range():
    with pytest.raises(DatasetError):
        scale_to_range(np.ones((2, 2)), 1.0, 1.0)


def test_csv_roundtrip_full_precision(tmp_path):
    rng = np.random.default_rng(123)
    data = rng.normal(scale=1e3, size=(50, 7))
    path = tmp_path / "d.csv"
    save_csv(path, data)
    loaded = load_csv(path)
    assert isinstance(loaded, Dataset)
    assert np.array_equal(loaded.x, data)


def test_csv_label_column_dispatch(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("x0,x1,label\n1.0,2.0,1\n3.0,4.0,-1\n")
    loaded = load_csv(path)
    assert isinstance(loaded, LabeledTestSet)
    assert loaded.y.tolist() == [1.0, -1.0]


def test_csv_plain_numeric_file(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("x0,x1\n1.0,2.0\n3.0,4.0\n")
    loaded = load_csv(path)
    assert isinstance(loaded, Dataset)
    assert loaded.x.tolist() == [[1.0, 2.0], [3.0, 4.0]]


def test_csv_errors_name_offending_row(tmp_path):
    ragged = tmp_path / "r.csv"
    ragged.write_text("x0,x1\n1.0,2.0\n3.0\n")
    with pytest.raises(DatasetError, match="row 2"):
        load_csv(ragged)

    nonnum = tmp_path / "n.csv"
    nonnum.write_text("x0\n1.0\nabc\n")
    with pytest.raises(DatasetError, match="row 2"):
        load_csv(nonnum)

    badlabel = tmp_path / "b.csv"
    badlabel.write_text("x0,label\n1.0,2\n")
    with pytest.raises(DatasetError, match="row 1"):
        load_csv(badlabel)


def test_labeled_roundtrip(tmp_path):
    rng = np.random.default_rng(9)
    x = rng.normal(size=(20, 3))
    y = np.where(rng.uniform(size=20) < 0.5, -1.0, 1.0)
    path = tmp_path / "l.csv"
    save_csv(path, x, labels=y)
    loaded = load_csv(path)
    assert np.array_equal(loaded.x, x)
    assert np.array_equal(loaded.y, y)


def test_types_validate():
    with pytest.raises(DatasetError):
        Dataset(np.array([[np.nan]]))
    with pytest.raises(DatasetError):
        UniversumSet(np.empty((0, 2)))
    with pytest.raises(DatasetError):
        LabeledTestSet(np.ones((2, 2)), [1.0, 0.5])
    with pytest.raises(DatasetError):
        LabeledTestSet(np.ones((2, 2)), [1.0])


def test_preset_block_shapes_and_labels():
    train, test, univ = synthetic_preset(0)
    assert train.x.shape == (10, 2)
    assert test.x.shape == (2000, 2)
    assert univ.x.shape == (1000, 2)
    assert np.array_equal(test.y[:1000], np.ones(1000))
    assert np.array_equal(test.y[1000:], -np.ones(1000))


def test_preset_deterministic_per_seed():
    a = synthetic_preset(7)
    b = synthetic_preset(7)
    c = synthetic_preset(8)
    assert all(np.array_equal(x.x, y.x) for x, y in zip(a, b))
    assert not np.array_equal(a[0].x, c[0].x)


def test_preset_population_locations():
    train, test, univ = synthetic_preset(3)
    assert np.allclose(train.x.mean(axis=0), [1.0, 1.0], atol=1.0)
    assert np.allclose(test.x[1000:].mean(axis=0), [0.25, 1.0], atol=0.15)
    assert np.allclose(univ.x.mean(axis=0), [0.75, 6.0], atol=0.15)

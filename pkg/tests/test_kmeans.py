import numpy as np
import pytest

from c4cluster.errors import ConfigError, KOutOfRangeError
from c4cluster.kmeans import KMeansConfig, kmeans


def test_separated_blobs():
    rng = np.random.default_rng(0)
    centers = np.array([[0, 0], [10, 0], [0, 10]])
    x = np.repeat(centers, 20, axis=0) + 0.1 * rng.normal(size=(60, 2))
    labels, found, inertia = kmeans(x, 3, KMeansConfig(seed=1))
    assert len(set(labels[:20])) == len(set(labels[20:40])) == len(set(labels[40:])) == 1
    assert len(set(labels)) == 3
    assert inertia < 60 * 0.1**2 * 2 * 2


def test_restarts_never_worse():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(80, 3))
    one = kmeans(x, 5, KMeansConfig(restarts=1, seed=3))[2]
    many = kmeans(x, 5, KMeansConfig(restarts=10, seed=3))[2]
    # the first restart of the 10-run sequence equals the single run
    assert many <= one


def test_deterministic_for_seed():
    x = np.random.default_rng(2).normal(size=(50, 2))
    a = kmeans(x, 4, KMeansConfig(seed=11))
    b = kmeans(x, 4, KMeansConfig(seed=11))
    np.testing.assert_array_equal(a[0], b[0])
    assert a[2] == b[2]


def test_k_equals_n():
    x = np.random.default_rng(3).normal(size=(6, 2))
    labels, _, inertia = kmeans(x, 6, KMeansConfig(seed=0))
    assert inertia == pytest.approx(0.0, abs=1e-20)
    assert len(set(labels)) == 6


def test_config_validation():
    with pytest.raises(ConfigError):
        KMeansConfig(restarts=0)
    with pytest.raises(ConfigError):
        KMeansConfig(tol=0)
    with pytest.raises(KOutOfRangeError):
        kmeans(np.zeros((3, 2)), 4)

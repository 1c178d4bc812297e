from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c4cluster.errors import LengthMismatchError
from c4cluster.graph import Partition, WeightedGraph
from c4cluster.metrics import (
    adjusted_rand_index,
    community_summary,
    density_table,
    node_strength,
    relabel_by_size,
)


def brute_force_ari(a, b):
    """Hubert-Arabie ARI from explicit pair enumeration."""
    a, b = list(a), list(b)
    n = len(a)
    pairs = list(combinations(range(n), 2))
    both = sum(a[i] == a[j] and b[i] == b[j] for i, j in pairs)
    same_a = sum(a[i] == a[j] for i, j in pairs)
    same_b = sum(b[i] == b[j] for i, j in pairs)
    expected = same_a * same_b / comb(n, 2)
    denom = 0.5 * (same_a + same_b) - expected
    if denom == 0:
        return 1.0
    return (both - expected) / denom


def test_hand_case():
    assert adjusted_rand_index([1, 1, 2, 2], [1, 2, 1, 2]) == pytest.approx(-0.5, abs=1e-15)
    assert brute_force_ari([1, 1, 2, 2], [1, 2, 1, 2]) == pytest.approx(-0.5, abs=1e-15)


def test_identical_and_relabeled():
    a = [1, 1, 2, 3, 3, 3]
    assert adjusted_rand_index(a, a) == 1.0
    assert adjusted_rand_index(a, [9, 9, 4, 7, 7, 7]) == 1.0


def test_degenerate_cases():
    assert adjusted_rand_index([1, 1, 1], [2, 2, 2]) == 1.0
    assert adjusted_rand_index([1, 2, 3], [3, 1, 2]) == 1.0
    with pytest.raises(LengthMismatchError):
        adjusted_rand_index([1, 2], [1, 2, 3])


@settings(max_examples=100, deadline=None)
@given(
    data=st.data(),
    n=st.integers(2, 30),
    ka=st.integers(1, 6),
    kb=st.integers(1, 6),
)
def test_matches_brute_force(data, n, ka, kb):
    a = data.draw(st.lists(st.integers(1, ka), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(1, kb), min_size=n, max_size=n))
    ours = adjusted_rand_index(a, b)
    assert ours == pytest.approx(brute_force_ari(a, b), abs=1e-12)
    assert ours == pytest.approx(adjusted_rand_index(b, a), abs=1e-15)
    assert ours <= 1.0 + 1e-15


def test_node_strength():
    assert np.all(node_strength(WeightedGraph(np.zeros((3, 3)))) == 0)
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = 3
    np.testing.assert_array_equal(node_strength(WeightedGraph(w)), [3, 3, 0])
    rng = np.random.default_rng(0)
    m = np.triu(rng.random((7, 7)), 1)
    assert node_strength(WeightedGraph(m + m.T)).sum() == pytest.approx(2 * m.sum())


def test_density_complete_and_cliques():
    n = 6
    full = WeightedGraph(np.ones((n, n)) - np.eye(n))
    d = density_table(full, Partition(np.array([1, 1, 2, 2, 2, 3]))).densities
    assert np.all(d[np.triu_indices(3, 1)] == 1)
    assert d[0, 0] == 1 and d[1, 1] == 1
    w = np.zeros((5, 5))
    w[:2, :2] = 1
    w[2:, 2:] = 2.5
    np.fill_diagonal(w, 0)
    d = density_table(WeightedGraph(w), Partition(np.array([1, 1, 2, 2, 2]))).densities
    np.testing.assert_array_equal(d, [[1, 0], [0, 1]])


def test_density_matches_enumeration():
    rng = np.random.default_rng(4)
    n = 25
    a = np.triu((rng.random((n, n)) < 0.3).astype(float), 1)
    a = a + a.T
    labels = rng.integers(1, 5, n)
    part = Partition.from_labels(labels)
    d = density_table(WeightedGraph(a), part).densities
    lab = part.labels
    for p in range(1, part.k_realized + 1):
        for q in range(p, part.k_realized + 1):
            if p == q:
                pairs = [(i, j) for i, j in combinations(range(n), 2) if lab[i] == lab[j] == p]
            else:
                pairs = [(i, j) for i in range(n) for j in range(n) if lab[i] == p and lab[j] == q]
            expected = sum(a[i, j] > 0 for i, j in pairs) / len(pairs) if pairs else 0.0
            assert d[p - 1, q - 1] == pytest.approx(expected)


def test_community_summary():
    w = np.zeros((5, 5))
    w[0, 1] = w[1, 0] = 1
    w[1, 2] = w[2, 1] = 5
    w[3, 4] = w[4, 3] = 2
    g = WeightedGraph(w)
    part = Partition(np.array([2, 2, 2, 1, 1]))
    recs = community_summary(g, part, [10, 20, 30, 40, 50], list("abcde"))
    assert [r.size for r in recs] == [3, 2]
    assert recs[0].largest_node == "b" and recs[0].median_covariate == 20
    assert recs[1].median_covariate == 45  # even-sized: mean of the two central values
    one = community_summary(g, Partition(np.ones(5, dtype=int)), [3.0] * 5, list("abcde"))
    assert len(one) == 1 and one[0].size == 5 and one[0].median_covariate == 3.0


def test_relabel_by_size():
    p = relabel_by_size(Partition(np.array([1, 2, 2, 3, 3, 3])))
    np.testing.assert_array_equal(p.labels, [3, 2, 2, 1, 1, 1])

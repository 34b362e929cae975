"""Tests for PCA/MDS population embeddings and the dataset generators."""

import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform

from shapecurrents.curve import circle
from shapecurrents.embed import (Embedding, build_dataset, class_separation,
                                 fish_family, mds_stress, pca,
                                 random_shape_population,
                                 three_class_population)
from shapecurrents.errors import ConfigurationError
from shapecurrents.gram import GramOperator
from shapecurrents.space import build_space


def test_pca_recovers_planar_configuration(rng):
    # rows that are exactly rank 2: PCA coordinates reproduce all pairwise
    # distances up to a rigid motion
    n, dim = 12, 30
    basis = np.linalg.qr(rng.standard_normal((dim, 2)))[0]
    plane = rng.standard_normal((n, 2)) @ basis.T
    ds = _dataset_from_rows(plane)
    emb = pca(ds, k=2)
    assert emb.method == "PCA"
    assert emb.mean_abs_error < 1e-10
    assert emb.stress < 1e-18
    d_emb = squareform(pdist(emb.coords))
    np.testing.assert_allclose(d_emb, ds.distance_matrix(), atol=1e-10)


def test_pca_deterministic_sign_convention(rng):
    rows = rng.standard_normal((8, 20))
    ds = _dataset_from_rows(rows)
    a = pca(ds, k=2).coords
    b = pca(ds, k=2).coords
    np.testing.assert_array_equal(a, b)
    # negating every row flips the centered data, yet the sign convention
    # still yields a reproducible embedding
    c = pca(_dataset_from_rows(-rows), k=2).coords
    np.testing.assert_allclose(np.abs(c), np.abs(a), atol=1e-10)


def test_pca_explained_variance_ordering(rng):
    rows = rng.standard_normal((10, 15)) * np.linspace(5, 0.1, 15)
    emb = pca(_dataset_from_rows(rows), k=3)
    ev = emb.explained_variance
    assert len(ev) == 3
    assert ev[0] >= ev[1] >= ev[2] > 0


def test_pca_rejects_tiny_datasets(rng):
    with pytest.raises(ConfigurationError):
        pca(_dataset_from_rows(rng.standard_normal((1, 5))), k=2)
    with pytest.raises(ConfigurationError):
        pca(_dataset_from_rows(rng.standard_normal((3, 5))), k=4)


def test_mds_exact_on_embeddable_distances(rng):
    # distances from an actual planar point set: stress minimum is zero
    pts = rng.standard_normal((10, 2))
    dist = squareform(pdist(pts))
    init = pca(_dataset_from_rows(pts + 0.01 * rng.standard_normal((10, 2))), k=2)
    emb = mds_stress(dist, init)
    assert emb.method == "MDS"
    assert emb.stress < 1e-12
    assert emb.mean_abs_error < 1e-7


def test_mds_improves_on_pca_init(rng):
    rows = rng.standard_normal((12, 25))
    ds = _dataset_from_rows(rows)
    dist = ds.distance_matrix()
    init = pca(ds, k=2)
    emb = mds_stress(dist, init)
    assert emb.stress <= init.stress + 1e-12


def test_mds_validates_distance_matrix(rng):
    init = Embedding(coords=rng.standard_normal((3, 2)), stress=0.0, method="PCA")
    with pytest.raises(ConfigurationError):
        mds_stress(np.ones((3, 4)), init)
    bad = np.ones((3, 3)) - np.eye(3)
    bad[0, 1] = 2.0
    with pytest.raises(ConfigurationError):
        mds_stress(bad, init)
    with pytest.raises(ConfigurationError):
        mds_stress(np.ones((3, 3)), init)


def test_class_separation_separable_and_mixed(rng):
    coords = np.concatenate([rng.standard_normal((10, 2)) + [6.0, 0.0],
                             rng.standard_normal((10, 2)) - [6.0, 0.0]])
    emb = Embedding(coords=coords, stress=0.0, method="PCA")
    tags = ["a"] * 10 + ["b"] * 10
    sep = class_separation(emb, tags)
    assert sep["pairs"]["a|b"] == 1.0
    assert sep["min_accuracy"] == 1.0
    # fully overlapping classes cannot be separated perfectly
    mixed = Embedding(coords=np.tile(rng.standard_normal((10, 2)), (2, 1)),
                      stress=0.0, method="PCA")
    sep2 = class_separation(mixed, tags)
    assert sep2["min_accuracy"] <= 0.5 + 1e-12
    assert class_separation(emb, ["a"] * 20)["degenerate"]


def test_build_dataset_rows_give_dual_distances():
    space = build_space("lagrange", M=10, degree=1, domain=(-1.0, 1.0, -1.0, 1.0))
    G = GramOperator(space)
    curves = [circle(0.3, n=128), circle(0.35, n=128), circle(0.4, n=128)]
    ds = build_dataset(curves, space, G, s=1, labels=["a", "b", "c"])
    assert ds.labels == ["a", "b", "c"]
    assert ds.whitened.shape[0] == 3
    dist = ds.distance_matrix()
    assert dist[0, 2] > dist[0, 1] > 0
    np.testing.assert_allclose(dist, dist.T)


def test_random_shape_population_seeded():
    curves, labels = random_shape_population(n_shapes=5, n_points=64, seed=7)
    again, _ = random_shape_population(n_shapes=5, n_points=64, seed=7)
    assert len(curves) == len(labels) == 5
    for c, d in zip(curves, again):
        np.testing.assert_array_equal(c.points, d.points)
    other, _ = random_shape_population(n_shapes=5, n_points=64, seed=8)
    assert not np.allclose(curves[0].points, other[0].points)


def test_fish_family_linear_in_parameter():
    curves, labels = fish_family(n_shapes=5, n_points=64)
    assert labels[0] == "0.0000" and labels[-1] == "1.0000"
    # phi(a) = phi(0) + a (phi(1) - phi(0)) for a linear family
    mid = curves[0].points + 0.5 * (curves[-1].points - curves[0].points)
    np.testing.assert_allclose(curves[2].points, mid, atol=1e-12)


def test_three_class_population_tags():
    curves, labels, tags = three_class_population(per_class=4, n_points=64)
    assert len(curves) == 12
    assert sorted(set(tags)) == [0, 1, 2]
    assert tags.count(0) == tags.count(1) == tags.count(2) == 4
    assert all(c.closed for c in curves)


def _dataset_from_rows(rows):
    from shapecurrents.embed import ShapeDataset
    rows = np.asarray(rows, dtype=float)
    return ShapeDataset(labels=[str(i) for i in range(rows.shape[0])],
                        whitened=rows)

import os

import numpy as np
import pytest

import adfcm

DATA = os.environ.get("ADFCM_TEST_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "data"))

WORKED = np.array(
    [
        [0.1, 0.8, 0.0, 0.1],
        [0.6, 0.1, 0.2, 0.9],
        [0.3, 0.1, 0.8, 0.0],
    ]
)


def test_p_matrix_and_certainty():
    p = adfcm.p_matrix(WORKED)
    np.testing.assert_allclose(p, [[0.25, 0.55, 0.7], [0.75, 0.45, 0.7], [0.75, 0.55, 0.3]], atol=1e-12)
    cf = adfcm.certainty_factors(WORKED)
    np.testing.assert_allclose(cf, [1.435 / 3, 1.325 / 3, 1.43 / 3, 1.78 / 3], rtol=1e-12)


def test_classify():
    out = adfcm.classify(WORKED, 0.5)
    assert out["ambiguous"] == [True, True, True, False]
    assert out["dominant_cluster"][3] == 1
    assert not any(adfcm.classify(WORKED, 0.0)["ambiguous"])


def test_fcm_and_sweep_on_blobs():
    x, labels, centers = adfcm.make_blobs(3, 50, 0.03, [(0.0, 1.0), (0.0, 1.0)], seed=2)
    assert x.shape == (150, 2)
    model = adfcm.fcm(x, 3, seed=1)
    u = model["memberships"]
    assert u.shape == (3, 150)
    np.testing.assert_allclose(u.sum(axis=0), 1.0, atol=1e-9)
    assert adfcm.center_error(centers, model["centroids"]) < 0.1
    rows = adfcm.sweep(u, labels, [0.0, 0.4, 0.5])
    assert rows[0]["nar"] == 0
    assert all(r["nar"] + r["ntr"] + r["nfr"] == r["n"] for r in rows)


def test_load_csv_and_select_features():
    x, labels, names = adfcm.load_csv(os.path.join(DATA, "pima.csv"), label_column="class")
    assert x.shape == (768, 8)
    assert set(labels) == {"positive", "negative"}
    ranking = adfcm.select_features(x, labels, 3, names=names)
    assert len(ranking["selected"]) == 3
    assert ranking["ranked"][0]["feature"] == "plas"


def test_privacy_experiment():
    x, _, _ = adfcm.make_blobs(3, 40, 0.03, [(0.0, 1.0), (0.0, 1.0)], seed=4)
    rep = adfcm.privacy_experiment(x, 0.3, 3, [0.4, 0.5], seed=4)
    assert rep["noise_records"] == 36
    assert len(rep["rows"]) == 2


def test_errors_are_raised():
    with pytest.raises(adfcm.AdfcmError):
        adfcm.classify(WORKED, 1.5)
    with pytest.raises(adfcm.AdfcmError):
        adfcm.p_matrix(np.array([[0.5, 0.5], [0.6, 0.5]]))

import numpy as np
import pytest
from sklearn.base import clone

from midlayer.errors import InvalidParameter, NotIndependent
from midlayer.estimators import FEATURE_NAMES, MISFeaturizer, TypicalStructureClassifier, to_indicator
from midlayer.matching_assign import classify_typical


def test_featurizer_shapes(b53, mis_b53):
    feat = MISFeaturizer(d=3).fit(mis_b53)
    out = feat.transform(mis_b53)
    assert out.shape == (187, len(FEATURE_NAMES))
    assert list(feat.get_feature_names_out()) == list(FEATURE_NAMES)
    assert np.array_equal(out, feat.transform(to_indicator(b53, mis_b53)))


def test_featurizer_values(b32):
    row = MISFeaturizer(d=2).fit_transform([b32.vset_of((1,), (2, 3))])[0]
    assert list(row) == [2, 1, 2, 1.0, 1.0]


def test_classifier_matches_functional_core(b53, mis_b53):
    clf = TypicalStructureClassifier(d=3).fit(mis_b53)
    pred = clf.predict(mis_b53)
    assert list(pred) == [classify_typical(b53, s) or 0 for s in mis_b53]
    assert clf.score(mis_b53, pred) == 1.0
    assert clf.typical_in(mis_b53[:3], [1, 2, 3]).dtype == bool


def test_sklearn_protocol():
    est = MISFeaturizer(d=4)
    assert clone(est).get_params() == {"d": 4}
    clf = TypicalStructureClassifier(d=3).set_params(d=2)
    assert clf.get_params()["d"] == 2


def test_validation(b32):
    with pytest.raises(InvalidParameter):
        MISFeaturizer(d=1).fit([0])
    with pytest.raises(NotIndependent):
        MISFeaturizer(d=2).fit([b32.vset_of((1,), (1, 2))])
    with pytest.raises(ValueError):
        MISFeaturizer(d=2).fit([1 << 40])
    with pytest.raises(ValueError):
        MISFeaturizer(d=2).fit(np.zeros((1, 5), dtype=int))

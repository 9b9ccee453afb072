import io
import json

import numpy as np
import pytest

import oracles
from ivfs.clustering import KMeansConfig, interval_kmeans
from ivfs.dataset import synthesize_dataset, transpose_by_class
from ivfs.exceptions import ConfigurationError, FormatError, ValidationError
from ivfs.selection import (
    SimilarityMatrix,
    average_similarity,
    build_knowledgebase,
    cluster_representative,
    identity_knowledgebase,
    load_knowledgebase,
    representatives,
    save_knowledgebase,
    select_class_features,
    similarity_matrix,
)


def sm(values, ids=None):
    values = np.asarray(values, dtype=float)
    return SimilarityMatrix(values, tuple(ids or range(1, len(values) + 1)))


def test_similarity_matrix_small_cases():
    f = np.asarray([[(0, 2), (0, 4)], [(1, 3), (2, 6)]], dtype=float)
    m = similarity_matrix(f, [4, 7])
    assert m.values.tolist() == [[1.0, 0.5], [0.5, 1.0]] and m.feature_ids == (4, 7)
    assert similarity_matrix(f[:1], [2]).values.tolist() == [[1.0]]


def test_similarity_matrix_matches_recomputation():
    rng = np.random.default_rng(8)
    lo = rng.uniform(0, 5, size=(5, 6))
    f = np.stack([lo, lo + rng.uniform(0, 3, size=lo.shape)], -1)
    m = similarity_matrix(f, range(1, 6))
    rows = [tuple(map(tuple, r)) for r in f.tolist()]
    for a in range(5):
        for b in range(5):
            assert m.values[a, b] == oracles.ssk(rows[a], rows[b])
    assert np.array_equal(m.values, m.values.T) and np.all(np.diag(m.values) == 1.0)


def test_average_similarity_examples():
    assert average_similarity(sm([[1, 0.5], [0.5, 1]])) == [0.75, 0.75]
    assert average_similarity(sm([[1]])) == [1.0]
    three = sm([[1, 0.8, 0.6], [0.8, 1, 0.2], [0.6, 0.2, 1]])
    assert average_similarity(three) == pytest.approx([0.8, 2 / 3, 0.6], abs=1e-15)


def test_representative_examples():
    three = sm([[1, 0.8, 0.6], [0.8, 1, 0.2], [0.6, 0.2, 1]], ids=[5, 2, 9])
    assert cluster_representative(three) == 5
    assert cluster_representative(sm([[1]], ids=[3])) == 3
    tie = sm([[1, 0.5], [0.5, 1]], ids=[8, 3])
    assert cluster_representative(tie) == 3


def test_representatives_match_brute_force_on_iris(iris):
    for sub in transpose_by_class(iris):
        for k in (2, 3, 4):
            for seed in range(5):
                model = interval_kmeans(sub, KMeansConfig(k, seed=seed))
                reps = representatives(sub, model)
                for q, rep in enumerate(reps):
                    rows = model.members(q)
                    feats = [tuple(map(tuple, sub.features[r].tolist())) for r in rows]
                    ids = [sub.original_feature_indices[r] for r in rows]
                    assert rep == oracles.representative(feats, ids)


def test_select_k_equals_d_returns_every_feature(iris):
    sub = transpose_by_class(iris)[0]
    reps, _ = select_class_features(sub, KMeansConfig(4, seed=0))
    assert sorted(reps) == [1, 2, 3, 4]


def test_select_recovers_planted_feature():
    m, planted = synthesize_dataset(2, 10, 6, 2, 10.0, 0.5, seed=4)
    for sub in transpose_by_class(m):
        reps, model = select_class_features(sub, KMeansConfig(2, seed=1))
        assert set(reps) & set(planted[sub.class_id])
        # the planted pair forms its own cluster
        q = model.assignments[planted[sub.class_id][0] - 1]
        members = {int(i) + 1 for i in model.members(q)}
        assert members == set(planted[sub.class_id])


def test_knowledgebase_counts_and_projection(iris):
    kb = build_knowledgebase(iris, KMeansConfig(2, seed=3))
    assert kb.class_names == iris.class_names
    assert sum(len(c.indices) for c in kb.classes) == 3 * 2
    for c in kb.classes:
        assert len(set(c.indices)) == 2 and all(1 <= i <= 4 for i in c.indices)
        expected = iris.class_data(c.label)[:, np.asarray(c.indices) - 1]
        assert np.array_equal(c.train_projections, expected)
    assert kb == build_knowledgebase(iris, KMeansConfig(2, seed=3))


def test_knowledgebase_rejects_k_above_d(iris):
    with pytest.raises(ConfigurationError):
        build_knowledgebase(iris, KMeansConfig(5))


def test_identity_knowledgebase(iris):
    kb = identity_knowledgebase(iris)
    assert kb.k == 4 and all(c.indices == (1, 2, 3, 4) for c in kb.classes)


def round_trip(kb):
    buf = io.StringIO()
    save_knowledgebase(kb, buf)
    return buf.getvalue()


def test_save_load_round_trip(iris):
    kb = build_knowledgebase(iris, KMeansConfig(3, seed=2))
    text = round_trip(kb)
    assert load_knowledgebase(io.StringIO(text)) == kb
    doc = json.loads(text)
    assert doc["schema_version"] == 1 and doc["k"] == 3 and len(doc["classes"]) == 3
    assert set(doc["classes"][0]) >= {"label", "indices", "train_projections"}


def test_load_truncated_reports_location(iris):
    text = round_trip(build_knowledgebase(iris, KMeansConfig(2, seed=0)))
    with pytest.raises(FormatError, match=r"line \d+, column \d+"):
        load_knowledgebase(io.StringIO(text[: len(text) // 2]))


def test_load_rejects_out_of_range_index(iris):
    doc = json.loads(round_trip(build_knowledgebase(iris, KMeansConfig(2, seed=0))))
    doc["classes"][1]["indices"][0] = 9
    with pytest.raises(ValidationError, match="outside 1..4"):
        load_knowledgebase(io.StringIO(json.dumps(doc)))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("classes"),
    lambda d: d.update(schema_version=99),
    lambda d: d["classes"][0].update(indices=["a", "b"]),
    lambda d: d["classes"][0].update(train_projections=[1, 2]),
])
def test_load_rejects_malformed(iris, mutate):
    doc = json.loads(round_trip(build_knowledgebase(iris, KMeansConfig(2, seed=0))))
    mutate(doc)
    with pytest.raises(FormatError):
        load_knowledgebase(io.StringIO(json.dumps(doc)))

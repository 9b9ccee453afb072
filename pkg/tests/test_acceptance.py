"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import random
import subprocess
import sys
import time

import numpy as np

import oracles
from conftest import make_matrix
from ivfs.classify import ClassifierConfig, accuracy, predict
from ivfs.clustering import KMeansConfig, interval_kmeans
from ivfs.dataset import stratified_split, synthesize_dataset, transpose_by_class
from ivfs.harness import ExperimentConfig, emit_report, run_experiment
from ivfs.interval_core import IntervalVector, isv_pairs, sim_arrays, ssk, ssk_pairs
from ivfs.selection import build_knowledgebase, cluster_representative, identity_knowledgebase, \
    similarity_matrix

FRACTIONS = (0.3, 0.4, 0.5, 0.6, 0.7)


def random_pairs(rng, n_pairs, max_len=50):
    """Seeded interval-vector pairs grouped by length; ~20% point intervals."""
    lengths = rng.integers(1, max_len + 1, size=n_pairs)
    for length in np.unique(lengths):
        n = int((lengths == length).sum())

        def draw():
            lo = rng.uniform(-10, 10, size=(n, length))
            width = rng.uniform(0, 5, size=(n, length)) * (rng.random((n, length)) > 0.2)
            return np.stack([lo, lo + width], -1)

        yield draw(), draw()


def test_criterion_1_kernel_properties(criterion):
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    checked, ok = 0, True
    for a, b in random_pairs(rng, 10_000):
        s_ab, s_ba = ssk_pairs(a, b), ssk_pairs(b, a)
        sims = sim_arrays(a[..., 0], a[..., 1], b[..., 0], b[..., 1])
        iv = isv_pairs(a, b)
        ok &= bool(np.array_equal(s_ab, s_ba))
        ok &= bool(np.all(ssk_pairs(a, a) == 1.0) and np.all(ssk_pairs(b, b) == 1.0))
        ok &= bool(np.all((sims >= 0) & (sims <= 1)))
        ok &= bool(np.all((s_ab >= 0) & (s_ab <= 1)))
        ok &= bool(np.all((iv[:, 0] >= 0) & (iv[:, 0] <= iv[:, 1]) & (iv[:, 1] <= 1)))
        checked += len(a)
    elapsed = time.perf_counter() - start
    anchor = ssk(IntervalVector([(0, 2), (0, 4)]), IntervalVector([(1, 3), (2, 6)]))
    passed = ok and checked == 10_000 and anchor == 0.5 and elapsed < 1.0
    criterion(1, "kernel properties", passed,
              f"{checked} pairs, anchor={anchor}, {elapsed:.3f}s")
    assert checked == 10_000
    assert ok
    assert anchor == 0.5
    assert elapsed < 1.0


def _clusters_agree(sub, model):
    agree = total = 0
    for q in range(model.k):
        rows = model.members(q)
        ids = [sub.original_feature_indices[r] for r in rows]
        got = cluster_representative(similarity_matrix(sub.features[rows], ids))
        feats = [tuple(map(tuple, sub.features[r].tolist())) for r in rows]
        agree += got == oracles.representative(feats, ids)
        total += 1
    return agree, total


def test_criterion_2_representative_oracle(criterion, iris):
    start = time.perf_counter()
    agree = total = 0
    for sub in transpose_by_class(iris):
        for k in (2, 3):
            for seed in range(10):
                a, t = _clusters_agree(sub, interval_kmeans(sub, KMeansConfig(k, seed=seed)))
                agree, total = agree + a, total + t
    synth, _ = synthesize_dataset(3, 20, 10, 2, 10.0, 0.5, seed=0)
    for sub in transpose_by_class(synth):
        for k in (2, 3, 5):
            for seed in range(2):
                a, t = _clusters_agree(sub, interval_kmeans(sub, KMeansConfig(k, seed=seed)))
                agree, total = agree + a, total + t
    elapsed = time.perf_counter() - start
    criterion(2, "representative oracle", agree == total and elapsed < 1.0,
              f"{agree}/{total} clusters agree, {elapsed:.3f}s")
    assert agree == total
    assert elapsed < 1.0


TWO_GROUPS = [(2, 2), (1, 3), (3, 5), (4, 4), (2, 6), (1, 7), (3, 3)]


def test_criterion_3_clustering_recovery(criterion):
    start = time.perf_counter()
    runs = recovered = 0
    max_iter = 0
    for n, sizes in enumerate(TWO_GROUPS):
        rows, truth = oracles.grouped_features(sizes, length=5, rng=random.Random(n))
        x = np.asarray(rows)
        for seed in range(20):
            m = interval_kmeans(x, KMeansConfig(2, seed=seed))
            runs += 1
            recovered += oracles.partitions_equal(m.assignments.tolist(), truth)
            max_iter = max(max_iter, m.iterations_run)
    elapsed = time.perf_counter() - start

    # Informational: with three or more groups random initialisation can
    # place two seeds in one group (a K-Means local optimum); not asserted.
    info = []
    for sizes in [(2, 3, 3), (2, 2, 2, 2)]:
        rows, truth = oracles.grouped_features(sizes, length=5, rng=random.Random(99))
        hits = sum(oracles.partitions_equal(
            interval_kmeans(np.asarray(rows), KMeansConfig(len(sizes), seed=s)).assignments.tolist(), truth)
            for s in range(20))
        info.append(f"{sizes}:{hits}/20")

    passed = recovered == runs and max_iter <= 100 and elapsed < 1.0
    criterion(3, "clustering recovery", passed,
              f"two-group {recovered}/{runs}, max iterations {max_iter}, {elapsed:.3f}s; "
              f"info (more groups, not asserted) {' '.join(info)}")
    assert recovered == runs
    assert max_iter <= 100
    assert elapsed < 1.0


def test_criterion_4_planted_recovery(criterion):
    start = time.perf_counter()
    hits = 0
    accs = {"c1": [], "c2": []}
    for seed in range(20):
        ifm, planted = synthesize_dataset(3, 20, 10, 2, 10.0, 0.5, seed=seed)
        split = stratified_split(ifm, 0.5, seed)
        kb = build_knowledgebase(split.train, KMeansConfig(2, seed=seed))
        hits += all(set(c.indices) & set(planted[c.label]) for c in kb.classes)
        for kind in accs:
            preds = predict(split.test.data, kb, ClassifierConfig(kind))
            accs[kind].append(accuracy(preds, list(split.test.labels)))
    elapsed = time.perf_counter() - start
    mean = {k: float(np.mean(v)) for k, v in accs.items()}
    passed = hits >= 18 and min(mean.values()) >= 0.95 and elapsed < 10.0
    criterion(4, "planted-feature recovery", passed,
              f"{hits}/20 seeds, mean WFS accuracy c1={mean['c1']:.4f} c2={mean['c2']:.4f}, {elapsed:.2f}s")
    assert hits >= 18
    assert mean["c1"] >= 0.95 and mean["c2"] >= 0.95
    assert elapsed < 10.0


def test_criterion_5_iris_reproduction(criterion):
    start = time.perf_counter()
    report = run_experiment(ExperimentConfig("iris", "c2", fractions=FRACTIONS, k_min=2, k_max=3,
                                             repetitions=20, seed=0))
    elapsed = time.perf_counter() - start
    lines, ok = [], True
    for f in FRACTIONS:
        accs = [c.wfs_accuracy for c in report.cells(f)]
        best, mean = max(accs), float(np.mean(accs))
        ok &= best == 1.0 and mean >= 0.90
        lines.append(f"{round(f * 100)}%: best={best:.3f} mean={mean:.3f}")
    c1 = run_experiment(ExperimentConfig("iris", "c1", fractions=FRACTIONS, k_min=2, k_max=3,
                                         repetitions=20, seed=0))
    c1_best = min(max(c.wfs_accuracy for c in c1.cells(f)) for f in FRACTIONS)
    criterion(5, "Iris reproduction (C-2, K in {2,3}, 20 seeds)", ok and elapsed < 10.0,
              "; ".join(lines) + f"; {elapsed:.2f}s; info C-1 min best={c1_best:.3f}")
    assert ok, lines
    assert elapsed < 10.0


def _check_kb(kb, train, k):
    assert kb.k == k and len(kb.classes) == train.n_classes
    for c in kb.classes:
        assert len(set(c.indices)) == k and all(1 <= i <= train.n_features for i in c.indices)
        assert np.array_equal(c.train_projections, train.class_data(c.label)[:, np.asarray(c.indices) - 1])


def _degenerate_cases():
    points = make_matrix([[(i, i), (2 * i, 2 * i), (1, 1)] for i in range(6)], ["a"] * 3 + ["b"] * 3)
    same = make_matrix([[(0, 1), (2, 3), (4, 5)]] * 6, ["a", "b", "c"] * 2)
    single = make_matrix([[(i, i + 1)] for i in range(6)], ["a"] * 3 + ["b"] * 3)
    pairs = make_matrix([[(i, i + 2), (0, i), (i, i)] for i in range(6)], ["a", "a", "b", "b", "c", "c"])
    return {"point intervals": points, "identical samples": same, "single feature": single,
            "two-sample classes": pairs}


def test_criterion_6_degenerate_inputs(criterion):
    done = []
    for name, ifm in _degenerate_cases().items():
        for kind in ("c1", "c2"):
            report = run_experiment(ExperimentConfig(classifier=kind, repetitions=2, seed=3), data=ifm)
            assert report.rows
            for r in report.rows:
                assert 0 <= r.wfs_accuracy <= 1 and 0 <= r.wofs_accuracy <= 1
                assert all(len(ix) == r.k for ix in r.indices)
            emit_report(report, "table")
            emit_report(report, "csv")
        d = ifm.n_features
        if d >= 2:
            for k in range(2, d + 1):  # includes K = d
                kb = build_knowledgebase(ifm, KMeansConfig(k, seed=1))
                _check_kb(kb, ifm, k)
                for sub in transpose_by_class(ifm):
                    m = interval_kmeans(sub, KMeansConfig(k, seed=1))
                    assert sorted(set(m.assignments.tolist())) == list(range(k))
                    assert np.all(m.centroids[..., 0] <= m.centroids[..., 1])
        else:
            _check_kb(identity_knowledgebase(ifm), ifm, 1)
        done.append(name)
    criterion(6, "degenerate-input suite", True, ", ".join(done))


def test_criterion_7_determinism(criterion, tmp_path):
    outputs = []
    for fmt in ("table", "csv"):
        for run in range(2):
            out = tmp_path / f"{fmt}{run}.txt"
            proc = subprocess.run([sys.executable, "-m", "ivfs.cli", "experiment", "--dataset", "iris",
                                   "--classifier", "c2", "--seed", "7", "--reps", "3", "--format", fmt,
                                   "--out", str(out)], capture_output=True)
            assert proc.returncode == 0, proc.stderr
            outputs.append(out.read_bytes())
    same = outputs[0] == outputs[1] and outputs[2] == outputs[3]
    criterion(7, "determinism", same, f"table {len(outputs[0])} bytes, csv {len(outputs[2])} bytes")
    assert same

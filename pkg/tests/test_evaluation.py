import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import make_clean_records
from sentiga.errors import EmptyEvaluationError, ShapeMismatchError, StratificationError
from sentiga.features import TfidfConfig
from sentiga.evaluation import (
    ConfusionMatrix,
    confusion,
    default_model_specs,
    report,
    run_benchmark,
    stratified_split,
)

# one completion of the reference per-class metrics (rows true, cols predicted)
REFERENCE_CM = [[26, 0, 12], [2, 7, 3], [7, 4, 81]]


def labels_from_counts(counts):
    return np.repeat([0, 1, 2], counts)


class TestStratifiedSplit:
    def test_reference_counts(self):
        # counts given per class ordinal: negative 188, neutral 60, positive 459
        labels = labels_from_counts([188, 60, 459])
        split = stratified_split(labels, 0.2, seed=42)
        assert len(split.test_indices) == 142
        assert len(split.train_indices) == 565
        test_labels = labels[split.test_indices]
        assert np.sum(test_labels == 2) == 92
        assert np.sum(test_labels == 0) == 38
        assert np.sum(test_labels == 1) == 12

    def test_exact_halves(self):
        labels = labels_from_counts([10, 10, 10])
        split = stratified_split(labels, 0.5, seed=0)
        test_labels = labels[split.test_indices]
        assert [np.sum(test_labels == c) for c in range(3)] == [5, 5, 5]

    def test_seeds_change_membership_not_counts(self):
        labels = labels_from_counts([20, 15, 25])
        a = stratified_split(labels, 0.2, seed=1)
        b = stratified_split(labels, 0.2, seed=2)
        for c in range(3):
            assert np.sum(labels[a.test_indices] == c) == np.sum(labels[b.test_indices] == c)
        assert not np.array_equal(a.test_indices, b.test_indices)

    def test_deterministic_for_fixed_seed(self):
        labels = labels_from_counts([20, 15, 25])
        a = stratified_split(labels, 0.2, seed=9)
        b = stratified_split(labels, 0.2, seed=9)
        assert np.array_equal(a.test_indices, b.test_indices)
        assert np.array_equal(a.train_indices, b.train_indices)

    def test_small_class_raises(self):
        with pytest.raises(StratificationError):
            stratified_split([0, 0, 1, 2, 2], 0.5, seed=0)

    def test_bad_fraction_raises(self):
        with pytest.raises(StratificationError):
            stratified_split([0, 0, 1, 1, 2, 2], 1.5, seed=0)

    @given(
        counts=st.tuples(
            st.integers(2, 40), st.integers(2, 40), st.integers(2, 40)
        ),
        fraction=st.floats(0.05, 0.95),
        seed=st.integers(0, 1000),
    )
    def test_partition_property(self, counts, fraction, seed):
        labels = labels_from_counts(counts)
        split = stratified_split(labels, fraction, seed)
        combined = np.concatenate([split.train_indices, split.test_indices])
        assert len(combined) == len(labels)
        assert np.array_equal(np.sort(combined), np.arange(len(labels)))


class TestConfusion:
    def test_perfect_predictions_are_diagonal(self):
        y = labels_from_counts([38, 12, 92])
        cm = confusion(y, y)
        assert np.array_equal(np.diag(cm.counts), [38, 12, 92])
        assert cm.counts.sum() == cm.total == 142

    def test_single_off_diagonal_entry(self):
        cm = confusion([0], [2])
        assert cm.counts[0, 2] == 1
        assert cm.counts.sum() == 1

    def test_reference_matrix_is_consistent(self):
        cm = ConfusionMatrix(counts=np.array(REFERENCE_CM))
        assert cm.supports.tolist() == [38, 12, 92]
        assert cm.total == 142

    def test_length_mismatch_raises(self):
        with pytest.raises(ShapeMismatchError):
            confusion([0, 1], [0])


class TestReport:
    def test_reference_per_class_metrics(self):
        rep = report(ConfusionMatrix(counts=np.array(REFERENCE_CM)))
        expected = {
            "negative": (0.7429, 0.6842, 0.7123, 38),
            "neutral": (0.6364, 0.5833, 0.6087, 12),
            "positive": (0.8438, 0.8804, 0.8617, 92),
        }
        for metrics in rep.per_class:
            precision, recall, f1, support = expected[metrics.name]
            assert metrics.precision == pytest.approx(precision, abs=1e-4)
            assert metrics.recall == pytest.approx(recall, abs=1e-4)
            assert metrics.f1 == pytest.approx(f1, abs=1e-4)
            assert metrics.support == support

    def test_reference_aggregates(self):
        rep = report(ConfusionMatrix(counts=np.array(REFERENCE_CM)))
        assert rep.accuracy == pytest.approx(0.8028, abs=1e-4)
        assert rep.macro_f1 == pytest.approx(0.7276, abs=1e-4)
        assert rep.weighted_f1 == pytest.approx(0.8003, abs=1e-4)

    def test_diagonal_matrix_is_perfect(self):
        rep = report(ConfusionMatrix(counts=np.diag([5, 7, 9])))
        assert rep.accuracy == 1.0 and rep.macro_f1 == 1.0 and rep.weighted_f1 == 1.0
        assert all(m.precision == m.recall == m.f1 == 1.0 for m in rep.per_class)

    def test_zero_division_yields_zero(self):
        counts = np.zeros((3, 3), dtype=int)
        counts[0, 0] = 4
        counts[1, 0] = 2  # neutral never predicted, positive absent entirely
        rep = report(ConfusionMatrix(counts=counts))
        by_name = {m.name: m for m in rep.per_class}
        assert by_name["neutral"].precision == 0.0
        assert by_name["neutral"].recall == 0.0
        assert by_name["neutral"].f1 == 0.0
        assert by_name["positive"].f1 == 0.0

    def test_all_zero_matrix_raises(self):
        with pytest.raises(EmptyEvaluationError):
            report(ConfusionMatrix(counts=np.zeros((3, 3), dtype=int)))

    def test_macro_equals_weighted_for_equal_supports(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            counts = rng.integers(0, 10, size=(3, 3))
            counts += np.diag([1, 1, 1])  # avoid all-zero rows
            target = counts.sum(axis=1).max()
            for c in range(3):
                counts[c, c] += target - counts[c].sum()
            rep = report(ConfusionMatrix(counts=counts))
            assert rep.macro_f1 == pytest.approx(rep.weighted_f1, abs=1e-12)

    def test_weighted_f1_reconstruction(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            counts = rng.integers(0, 30, size=(3, 3))
            if counts.sum() == 0:
                counts[0, 0] = 1
            rep = report(ConfusionMatrix(counts=counts))
            total = counts.sum()
            recon = sum(m.support * m.f1 for m in rep.per_class) / total
            assert rep.weighted_f1 == pytest.approx(recon, abs=1e-12)

    def test_precision_colsum_identity(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            counts = rng.integers(0, 30, size=(3, 3))
            if counts.sum() == 0:
                counts[1, 1] = 2
            rep = report(ConfusionMatrix(counts=counts))
            col_sums = counts.sum(axis=0)
            lhs = sum(m.precision * col_sums[i] for i, m in enumerate(rep.per_class))
            assert lhs == pytest.approx(rep.accuracy * counts.sum(), abs=1e-9)


class TestBenchmark:
    def test_three_rows_on_shared_split(self):
        records = make_clean_records(n_per_class=(14, 14, 14), seed=4)
        rows = run_benchmark(records, seed=42, test_fraction=0.25,
                             tfidf_config=TfidfConfig(min_df=1, max_df=1.0))
        assert len(rows) == 3
        assert {row.model for row in rows} == {
            "Logistic Regression",
            "MLPClassifier",
            "Linear SVM",
        }
        accuracies = [row.accuracy for row in rows if not row.failed]
        assert accuracies == sorted(accuracies, reverse=True)

    def test_empty_spec_list(self):
        records = make_clean_records()
        assert run_benchmark(records, model_specs=[]) == []

    def test_failing_model_is_isolated(self):
        # 6 records: enough for LR and SVM, below the MLP early-stopping minimum
        small = make_clean_records(n_per_class=(2, 2, 2), seed=5)
        rows = run_benchmark(small, seed=0, test_fraction=0.4,
                             tfidf_config=TfidfConfig(min_df=1, max_df=1.0))
        by_model = {row.model: row for row in rows}
        assert by_model["MLPClassifier"].failed
        assert by_model["MLPClassifier"].error
        assert not by_model["Logistic Regression"].failed
        assert not by_model["Linear SVM"].failed
        assert rows[-1].failed  # failed rows sort last

    def test_default_specs_cover_reference_models(self):
        specs = default_model_specs()
        assert [s.kind for s in specs] == ["logreg", "mlp", "svm"]
        assert specs[1].family == "Neural baseline"

    def test_reference_corpus_rows_share_the_142_row_test_split(self):
        from sentiga.corpus import load_raw, prepare_corpus
        from sentiga.datasets import reference_corpus_path

        records = prepare_corpus(load_raw(reference_corpus_path()))
        rows = run_benchmark(records, seed=42)
        assert len(rows) == 3
        assert not any(row.failed for row in rows)
        assert all(row.report.confusion.total == 142 for row in rows)

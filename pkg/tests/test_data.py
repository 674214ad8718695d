import itertools

import numpy as np
import pytest

from elmprune.data import (
    CvPlan,
    Dataset,
    LabelValueError,
    MalformedRowError,
    MissingLabelColumnError,
    NonNumericCellError,
    SingleClassError,
    SplitSpec,
    add_junk_features,
    gen_two_moons,
    largest_remainder,
    load_csv,
    make_cv_splits,
    split,
    split_indices,
    standardize,
    write_csv,
)
from elmprune.elm import predict_labels, train_elm
from elmprune.metrics import accuracy


class TestTwoMoons:
    def test_noise_free_points_lie_on_arcs(self):
        d = gen_two_moons(100, 0.0, seed=3)
        pos = d.X[:, d.y == 1]
        neg = d.X[:, d.y == -1]
        np.testing.assert_allclose(np.hypot(pos[0], pos[1]), 1.0, atol=1e-12)
        assert np.all(pos[1] >= 0)
        np.testing.assert_allclose(np.hypot(neg[0] - 1.0, neg[1] - 0.5), 1.0, atol=1e-12)
        assert np.all(neg[1] <= 0.5)

    def test_deterministic(self):
        a, b = gen_two_moons(100, 0.1, seed=9), gen_two_moons(100, 0.1, seed=9)
        assert a.X.tobytes() == b.X.tobytes() and a.y.tobytes() == b.y.tobytes()

    def test_shape_and_balance(self):
        d = gen_two_moons(7, 0.1, seed=0)
        assert d.X.shape == (2, 14)
        assert (d.y == 1).sum() == 7

    def test_separable_enough_for_small_elm(self):
        accs = []
        for seed in range(20):
            d = gen_two_moons(200, 0.1, seed=seed)
            tr, _, te = split(d, SplitSpec(0.5, 0.0, 0.5, seed=seed))
            accs.append(accuracy(predict_labels(train_elm(tr, 50, seed=seed), te.X), te.y))
        assert np.mean(accs) >= 0.95


class TestJunkFeatures:
    def test_zero_is_identity(self):
        d = gen_two_moons(10, 0.1, seed=0)
        assert add_junk_features(d, 0, seed=1) is d

    def test_appends_rows(self):
        d = gen_two_moons(10, 0.1, seed=0)
        j = add_junk_features(d, 3, seed=1)
        assert j.n_features == 5
        assert j.X[:2].tobytes() == d.X.tobytes()
        np.testing.assert_array_equal(j.y, d.y)
        assert np.all(np.abs(j.X[2:]) <= 1)

    def test_gaussian_option(self):
        j = add_junk_features(gen_two_moons(200, 0.1, seed=0), 2, seed=1, distribution="gaussian")
        assert np.abs(j.X[2:]).max() > 1.0

    def test_uncorrelated_with_labels(self):
        for seed in range(20):
            j = add_junk_features(gen_two_moons(100, 0.1, seed=seed), 3, seed=seed + 1)
            for row in j.X[2:]:
                assert abs(np.corrcoef(row, j.y)[0, 1]) < 0.3

    def test_negative(self):
        with pytest.raises(ValueError):
            add_junk_features(gen_two_moons(5, 0.1), -1)


class TestSplit:
    def test_largest_remainder_sizes(self):
        assert largest_remainder(10, (0.7, 0.2, 0.1)) == [7, 2, 1]
        assert largest_remainder(11, (0.7, 0.2, 0.1)) == [8, 2, 1]
        assert sum(largest_remainder(301, (1 / 3, 0, 2 / 3))) == 301

    def test_unstratified_sizes(self):
        y = np.array([1, -1] * 5, dtype=float)
        parts = split_indices(y, SplitSpec(0.7, 0.2, 0.1, seed=0, stratified=False))
        assert [len(p) for p in parts] == [7, 2, 1]

    @pytest.mark.parametrize("stratified", [True, False])
    def test_partition(self, stratified):
        d = gen_two_moons(30, 0.1, seed=2)
        parts = split_indices(d.y, SplitSpec(seed=4, stratified=stratified))
        allidx = np.concatenate(parts)
        assert sorted(allidx.tolist()) == list(range(d.n_samples))
        for a, b in itertools.combinations(parts, 2):
            assert not set(a) & set(b)

    def test_stratified_ratio_exhaustive(self):
        # every 60/40 label arrangement of 10 samples, over several seeds
        spec = SplitSpec(0.5, 0.2, 0.3)
        for pos in itertools.combinations(range(10), 6):
            y = -np.ones(10)
            y[list(pos)] = 1
            for seed in range(3):
                parts = split_indices(y, spec.with_seed(seed))
                for p, frac in zip(parts, spec.fractions):
                    n_pos = (y[p] == 1).sum()
                    n_neg = (y[p] == -1).sum()
                    assert abs(n_pos - 6 * frac) < 1 and abs(n_neg - 4 * frac) < 1

    def test_deterministic(self):
        d = gen_two_moons(40, 0.1, seed=2)
        a = split_indices(d.y, SplitSpec(seed=8))
        b = split_indices(d.y, SplitSpec(seed=8))
        for p, q in zip(a, b):
            np.testing.assert_array_equal(p, q)

    def test_too_small(self):
        with pytest.raises(ValueError, match="too small"):
            split(gen_two_moons(3, 0.1, seed=0), SplitSpec(0.7, 0.2, 0.1))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SplitSpec(0.5, 0.2, 0.2)
        with pytest.raises(ValueError):
            SplitSpec(1.0, 0.0, 0.0)

    def test_no_validation_part(self):
        tr, va, te = split(gen_two_moons(30, 0.1, seed=0), SplitSpec(1 / 3, 0.0, 2 / 3))
        assert va is None and tr.n_samples == 20 and te.n_samples == 40


class TestCv:
    def test_single_seed_matches_split(self):
        d = gen_two_moons(40, 0.1, seed=1)
        spec = SplitSpec()
        (triple,) = make_cv_splits(d, CvPlan((5,)), spec)
        ref = split(d, spec.with_seed(5))
        for a, b in zip(triple, ref):
            np.testing.assert_array_equal(a.X, b.X)

    def test_distinct_seeds_distinct_partitions(self):
        d = gen_two_moons(40, 0.1, seed=1)
        splits = make_cv_splits(d, CvPlan(tuple(range(20))), SplitSpec())
        keys = {tr.fingerprint() for tr, _, _ in splits}
        assert len(keys) == 20
        for tr, va, te in splits:
            assert tr.n_samples + va.n_samples + te.n_samples == d.n_samples

    def test_plan_rejects_duplicates(self):
        with pytest.raises(ValueError):
            CvPlan((1, 1))


class TestStandardize:
    def test_uses_train_statistics(self):
        tr = gen_two_moons(20, 0.1, seed=0)
        te = gen_two_moons(20, 0.1, seed=1)
        s_tr, s_te = standardize(tr, te)
        np.testing.assert_allclose(s_tr.X.mean(axis=1), 0, atol=1e-12)
        np.testing.assert_allclose(s_tr.X.std(axis=1), 1, atol=1e-12)
        assert not np.allclose(s_te.X.mean(axis=1), 0, atol=1e-3)


class TestCsv:
    def test_basic(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b,label\n0.5,1,1\n2,3,-1\n4,5,1\n")
        d = load_csv(f, "label")
        assert d.n_samples == 3 and d.n_features == 2
        np.testing.assert_array_equal(d.y, [1, -1, 1])
        np.testing.assert_array_equal(d.X[:, 0], [0.5, 1.0])

    def test_headerless_with_index(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,0.1,0.2\n0,0.3,0.4\n")
        d = load_csv(f, 0)
        np.testing.assert_array_equal(d.y, [1, -1])
        assert d.n_features == 2

    def test_non_numeric_cell_cites_row(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2,1\n3,x,-1\n")
        with pytest.raises(NonNumericCellError) as err:
            load_csv(f, -1)
        assert err.value.row == 2
        assert "row 2" in str(err.value)

    def test_malformed_row(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b,label\n1,2,1\n3,-1\n")
        with pytest.raises(MalformedRowError) as err:
            load_csv(f, "label")
        assert err.value.row == 3

    def test_missing_label_column(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b,y\n1,2,1\n3,4,-1\n")
        with pytest.raises(MissingLabelColumnError):
            load_csv(f, "label")
        with pytest.raises(MissingLabelColumnError):
            load_csv(f, 7)

    def test_single_class(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,label\n1,1\n2,1\n")
        with pytest.raises(SingleClassError):
            load_csv(f, "label")

    def test_bad_label(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,label\n1,1\n2,3\n")
        with pytest.raises(LabelValueError) as err:
            load_csv(f, "label")
        assert err.value.row == 3

    def test_non_finite_rejected(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,label\n1,1\nnan,-1\n")
        with pytest.raises(NonNumericCellError):
            load_csv(f, "label")

    def test_round_trip(self, tmp_path):
        d = add_junk_features(gen_two_moons(15, 0.1, seed=4), 2, seed=5)
        f = write_csv(d, tmp_path / "d.csv")
        back = load_csv(f, "label")
        assert back.X.tobytes() == d.X.tobytes() and back.y.tobytes() == d.y.tobytes()
        write_csv(back, tmp_path / "e.csv")
        assert (tmp_path / "e.csv").read_bytes() == f.read_bytes()


class TestDataset:
    def test_label_values(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((1, 2)), [0.0, 1.0])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((1, 3)), [1.0, -1.0])

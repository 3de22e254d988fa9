"""Loading, encoding, and cleaning behavior."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_dataset
from solvency.dataset import (
    CATEGORICAL,
    DEFAULT_CODEBOOK,
    NUMERIC,
    ClassDistribution,
    CodeBook,
    Dataset,
    FeatureSpec,
    OutlierRule,
    Schema,
    apply_codebook,
    class_distribution,
    clean,
    load_csv,
    read_header,
    schema_from_header,
    write_csv,
)
from solvency.errors import (
    EmptyDistributionError,
    EmptyResultError,
    HeaderMismatchError,
    MissingFileError,
    RaggedRowError,
    UnknownLabelError,
)


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestSchema:
    def test_duplicate_feature_names_rejected(self):
        with pytest.raises(ValueError):
            Schema([FeatureSpec("a", NUMERIC), FeatureSpec("a", NUMERIC)],
                   "TARGET")

    def test_target_cannot_be_a_feature(self):
        with pytest.raises(ValueError):
            Schema([FeatureSpec("a", NUMERIC)], "a")

    def test_indices_follow_declaration_order(self):
        s = Schema([FeatureSpec("a", NUMERIC),
                    FeatureSpec("b", CATEGORICAL, levels=3)], "y")
        assert [f.index for f in s.features] == [0, 1]
        assert s["b"].levels == 3

    def test_fingerprint_changes_with_kind(self):
        a = Schema([FeatureSpec("a", NUMERIC)], "y")
        b = Schema([FeatureSpec("a", CATEGORICAL, levels=2)], "y")
        assert a.fingerprint() != b.fingerprint()

    def test_categorical_needs_two_levels(self):
        with pytest.raises(ValueError):
            FeatureSpec("a", CATEGORICAL, levels=1)


class TestCodeBook:
    def test_bundled_binary_convention(self):
        # first-listed label of a two-level variable carries code 1
        assert DEFAULT_CODEBOOK.encode("CODE_GENDER", "F") == 1
        assert DEFAULT_CODEBOOK.encode("CODE_GENDER", "M") == 0
        assert DEFAULT_CODEBOOK.encode("NAME_CONTRACT_TYPE", "Cash loans") == 1
        assert DEFAULT_CODEBOOK.encode("FLAG_OWN_CAR", "N") == 0

    def test_bundled_multilevel_codes(self):
        book = DEFAULT_CODEBOOK
        assert book.encode("NAME_INCOME_TYPE", "State servant") == 1
        assert book.encode("NAME_INCOME_TYPE", "Pensioner") == 4
        assert book.encode("NAME_EDUCATION_TYPE", "Lower secondary") == 4
        assert book.encode("NAME_HOUSING_TYPE", "Rented apartment") == 6
        assert book.encode("NAME_FAMILY_STATUS", "Widow") == 5
        assert book.levels("NAME_HOUSING_TYPE") == 6

    def test_decode_inverts_encode(self):
        for feature in DEFAULT_CODEBOOK.features():
            for label in DEFAULT_CODEBOOK.mappings[feature]:
                code = DEFAULT_CODEBOOK.encode(feature, label)
                assert DEFAULT_CODEBOOK.decode(feature, code) == label

    def test_save_load_round_trip(self, tmp_path):
        path = tmp_path / "codes.csv"
        DEFAULT_CODEBOOK.save(str(path))
        assert CodeBook.load(str(path)) == DEFAULT_CODEBOOK

    def test_load_missing_file(self):
        with pytest.raises(MissingFileError):
            CodeBook.load("/no/such/codebook.csv")

    def test_duplicate_codes_rejected(self):
        with pytest.raises(ValueError):
            CodeBook({"x": {"a": 1, "b": 1}})

    def test_infer_first_appearance_order(self):
        data = make_dataset(
            {"color": ["red", "blue", "red", "green"]},
            [0, 1, 0, 1],
            kinds={"color": CATEGORICAL},
            levels={"color": 3},
        )
        book = CodeBook.infer(data)
        assert book.mappings["color"] == {"red": 1, "blue": 2, "green": 3}

    def test_infer_binary_convention(self):
        data = make_dataset(
            {"flag": ["Y", "N", "Y"]},
            [0, 1, 0],
            kinds={"flag": CATEGORICAL},
        )
        assert CodeBook.infer(data).mappings["flag"] == {"Y": 1, "N": 0}


class TestLoadCsv:
    def test_columns_match_by_name_any_order(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["TARGET,b,a", "1,2.0,3.0", "0,4.0,5.0"])
        schema = Schema([FeatureSpec("a", NUMERIC),
                         FeatureSpec("b", NUMERIC)], "TARGET")
        data = load_csv(str(p), schema)
        assert data.rows == [[3.0, 2.0, 1.0], [5.0, 4.0, 0.0]]

    def test_header_mismatch(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["a,c,TARGET", "1,2,0"])
        schema = Schema([FeatureSpec("a", NUMERIC),
                         FeatureSpec("b", NUMERIC)], "TARGET")
        with pytest.raises(HeaderMismatchError):
            load_csv(str(p), schema)

    def test_ragged_row(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["a,TARGET", "1,0", "2"])
        schema = Schema([FeatureSpec("a", NUMERIC)], "TARGET")
        with pytest.raises(RaggedRowError):
            load_csv(str(p), schema)

    def test_missing_tokens_become_none(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["a,TARGET", ",1", "NA,0", "N/A,1", "7.5,0"])
        schema = Schema([FeatureSpec("a", NUMERIC)], "TARGET")
        data = load_csv(str(p), schema)
        assert [r[0] for r in data.rows] == [None, None, None, 7.5]

    def test_unparseable_and_nonfinite_numerics_become_none(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["a,TARGET", "oops,1", "inf,0", "nan,1", "2,0"])
        schema = Schema([FeatureSpec("a", NUMERIC)], "TARGET")
        data = load_csv(str(p), schema)
        assert [r[0] for r in data.rows] == [None, None, None, 2.0]

    def test_encoded_categorical_cells_read_as_codes(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["c,TARGET", "2,1", "1,0"])
        schema = Schema([FeatureSpec("c", CATEGORICAL, levels=3)], "TARGET")
        data = load_csv(str(p), schema, encoded=True)
        assert [r[0] for r in data.rows] == [2, 1]
        assert all(isinstance(r[0], int) for r in data.rows)

    def test_target_optional_mode(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["a", "1.5", "2.5"])
        schema = Schema([FeatureSpec("a", NUMERIC)], "TARGET")
        data = load_csv(str(p), schema, target_optional=True)
        assert [r[-1] for r in data.rows] == [None, None]

    def test_missing_file(self):
        schema = Schema([FeatureSpec("a", NUMERIC)], "TARGET")
        with pytest.raises(MissingFileError):
            load_csv("/no/such/file.csv", schema)

    def test_write_then_load_round_trip(self, tmp_path):
        data = make_dataset(
            {"a": [1.5, -2.0, 3.25], "c": [1, 2, 1]},
            [0, 1, 0],
            kinds={"c": CATEGORICAL},
        )
        p = tmp_path / "out.csv"
        write_csv(data, str(p))
        again = load_csv(str(p), data.schema, encoded=True)
        assert again.rows == data.rows


class TestApplyCodebook:
    def test_table_one_row_encodes_exactly(self):
        data = make_dataset(
            {
                "NAME_CONTRACT_TYPE": ["Cash loans", "Revolving loans"],
                "CODE_GENDER": ["F", "M"],
                "NAME_EDUCATION_TYPE": ["Higher education",
                                        "Secondary / secondary special"],
            },
            [1, 0],
            kinds={name: CATEGORICAL for name in (
                "NAME_CONTRACT_TYPE", "CODE_GENDER", "NAME_EDUCATION_TYPE")},
            levels={"NAME_CONTRACT_TYPE": 2, "CODE_GENDER": 2,
                    "NAME_EDUCATION_TYPE": 4},
        )
        encoded = apply_codebook(data, DEFAULT_CODEBOOK)
        assert encoded.rows[0][:3] == [1, 1, 1]
        assert encoded.rows[1][:3] == [0, 0, 3]

    def test_unknown_label_names_feature_and_row(self):
        data = make_dataset(
            {"CODE_GENDER": ["F", "X"]},
            [0, 1],
            kinds={"CODE_GENDER": CATEGORICAL},
        )
        with pytest.raises(UnknownLabelError) as err:
            apply_codebook(data, DEFAULT_CODEBOOK)
        assert err.value.feature == "CODE_GENDER"
        assert err.value.label == "X"
        assert err.value.row == 1

    def test_missing_markers_pass_through(self):
        data = make_dataset(
            {"CODE_GENDER": ["F", None]},
            [0, 1],
            kinds={"CODE_GENDER": CATEGORICAL},
        )
        encoded = apply_codebook(data, DEFAULT_CODEBOOK)
        assert encoded.rows[1][0] is None


class TestClean:
    def test_missing_rows_dropped_first_offender_logged(self):
        data = make_dataset(
            {"a": [1.0, None, 3.0], "b": [5.0, 6.0, None]},
            [0, 1, 0],
        )
        cleaned, log = clean(data, OutlierRule("off"))
        assert cleaned.n == 1
        assert log.entries == [(1, "missing:a"), (2, "missing:b")]

    def test_missing_target_logged(self):
        data = make_dataset({"a": [1.0, 2.0]}, [0, None])
        cleaned, log = clean(data, OutlierRule("off"))
        assert cleaned.n == 1
        assert log.entries == [(1, "missing:TARGET")]

    def test_planted_outlier_dropped_by_iqr_fences(self):
        # 12 evenly spread values plus one far excursion; quartiles of
        # the bulk put the fence well inside 500
        values = [float(v) for v in range(1, 13)] + [500.0]
        data = make_dataset({"a": values}, [0, 1] * 6 + [0])
        cleaned, log = clean(data)
        assert cleaned.n == 12
        assert log.entries == [(12, "outlier:a")]

    def test_clean_is_idempotent(self):
        rng = np.random.default_rng(5)
        values = np.concatenate([rng.uniform(0, 1, 40), [9.0, -7.0]])
        data = make_dataset({"a": values.tolist()},
                            rng.integers(0, 2, 42).tolist())
        once, log1 = clean(data)
        twice, log2 = clean(once)
        assert len(log2) == 0
        assert twice.rows == once.rows

    def test_fences_reapplied_until_stable(self):
        # dropping the extreme value tightens the fences enough to
        # expose the next one, so a single pass would under-clean
        values = [10.0, 10.2, 10.4, 10.6, 10.8, 11.0, 25.0, 3000.0]
        data = make_dataset({"a": values}, [0, 1, 0, 1, 0, 1, 0, 1])
        cleaned, log = clean(data)
        reasons = {i for i, _ in log.entries}
        assert reasons == {6, 7}
        assert cleaned.n == 6

    def test_zscore_rule(self):
        values = [0.0] * 10 + [100.0]
        data = make_dataset({"a": values}, [0, 1] * 5 + [0])
        cleaned, _ = clean(data, OutlierRule("zscore", z_threshold=3.0))
        assert cleaned.n == 10

    def test_everything_dropped_raises(self):
        data = make_dataset({"a": [None, None]}, [0, 1])
        with pytest.raises(EmptyResultError):
            clean(data, OutlierRule("off"))

    def test_quartiles_use_linear_interpolation(self):
        # for 1..5 plus an outlier at 100: q1/q3 of the full column are
        # interpolated, not nearest-rank; the fence (iqr*1.5) keeps 1..5
        values = [1.0, 2.0, 3.0, 4.0, 5.0, 100.0]
        q1, q3 = np.percentile(values, [25.0, 75.0])
        assert q1 == 2.25 and q3 == 4.75
        data = make_dataset({"a": values}, [0, 1, 0, 1, 0, 1])
        cleaned, _ = clean(data)
        assert [r[0] for r in cleaned.rows] == [1.0, 2.0, 3.0, 4.0, 5.0]


class TestSplitAndDistribution:
    def test_split_is_seeded_partition(self):
        data = make_dataset({"a": [float(i) for i in range(20)]},
                            [i % 2 for i in range(20)])
        train1, hold1 = data.split(0.25, seed=3)
        train2, hold2 = data.split(0.25, seed=3)
        assert train1.rows == train2.rows and hold1.rows == hold2.rows
        assert hold1.n == 5 and train1.n == 15
        together = sorted(r[0] for r in train1.rows + hold1.rows)
        assert together == [float(i) for i in range(20)]

    def test_split_changes_with_seed(self):
        data = make_dataset({"a": [float(i) for i in range(40)]},
                            [i % 2 for i in range(40)])
        _, hold_a = data.split(0.5, seed=1)
        _, hold_b = data.split(0.5, seed=2)
        assert hold_a.rows != hold_b.rows

    def test_split_keeps_row_order(self):
        data = make_dataset({"a": [float(i) for i in range(10)]},
                            [0] * 10)
        train, hold = data.split(0.3, seed=0)
        assert [r[0] for r in train.rows] == sorted(r[0] for r in train.rows)
        assert [r[0] for r in hold.rows] == sorted(r[0] for r in hold.rows)

    def test_class_distribution_counts(self):
        data = make_dataset({"a": [1.0, 2.0, 3.0]}, [0, 1, 1])
        dist = class_distribution(data)
        assert dist.counts == (1, 2)
        assert dist.total == 3
        assert dist.proportions == (1 / 3, 2 / 3)

    def test_empty_distribution_raises(self):
        with pytest.raises(EmptyDistributionError):
            ClassDistribution((0, 0))


class TestSchemaFromHeader:
    def test_codebook_columns_become_categorical(self):
        header = ["AMT_CREDIT", "CODE_GENDER", "TARGET"]
        schema = schema_from_header(header, "TARGET", DEFAULT_CODEBOOK)
        assert schema["AMT_CREDIT"].kind == NUMERIC
        assert schema["CODE_GENDER"].kind == CATEGORICAL
        assert schema["CODE_GENDER"].levels == 2

    def test_target_must_be_present(self):
        with pytest.raises(HeaderMismatchError):
            schema_from_header(["a", "b"], "TARGET")

    def test_read_header(self, tmp_path):
        p = tmp_path / "d.csv"
        write_lines(p, ["a, b ,TARGET", "1,2,0"])
        assert read_header(str(p)) == ["a", "b", "TARGET"]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(min_value=-1e6, max_value=1e6,
                       allow_nan=False), min_size=4, max_size=40),
    st.integers(min_value=0, max_value=2 ** 32 - 1),
)
def test_clean_idempotence_property(values, seed):
    """clean(clean(x)) == clean(x) for dense numeric data."""
    rng = np.random.default_rng(seed)
    target = rng.integers(0, 2, len(values)).tolist()
    data = make_dataset({"a": list(values)}, target)
    try:
        once, _ = clean(data)
    except EmptyResultError:
        return
    twice, log = clean(once)
    assert len(log) == 0
    assert twice.rows == once.rows

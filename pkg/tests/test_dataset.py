import numpy as np
import pytest

from fuzzy_reduct import CsvSchema, DatasetError, DecisionSystem, FeatureKind, load_csv, save_csv
from fuzzy_reduct.dataset import dumps_csv, loads_csv

from .conftest import DATA, random_system


def test_table1_shape(table1):
    assert table1.object_count == 8
    assert table1.feature_names == ("a", "b", "c", "d")
    assert set(table1.label_set) == {"0", "1", "2"}
    assert all(k is FeatureKind.NOMINAL for k in table1.feature_kinds)


def test_table1_inferred_real_without_override():
    ds = load_csv(DATA / "table1.csv")
    assert all(k is FeatureKind.REAL for k in ds.feature_kinds)


def test_table2_values_and_stats(table2):
    assert table2.feature_kinds == (FeatureKind.REAL,) * 3
    assert table2.value(1, "a") == -0.2
    assert table2.labels == ("0", "1", "0", "0", "1", "1")
    assert table2.feature_range[1] == pytest.approx(0.7)
    assert table2.feature_std()[1] == pytest.approx(np.std([-0.3, -0.5, -0.4, 0.1, -0.1, -0.6]))
    assert table2.feature_std(1)[1] == pytest.approx(np.std([-0.3, -0.5, -0.4, 0.1, -0.1, -0.6], ddof=1))


def test_constant_column_flagged(tmp_path):
    text = (DATA / "table2.csv").read_text().splitlines()
    lines = ["a,b,c,k,q"] + [",".join(r.split(",")[:3] + ["0.5", r.split(",")[3]]) for r in text[1:]]
    path = tmp_path / "t.csv"
    path.write_text("\n".join(lines) + "\n")
    ds = load_csv(path)
    assert ds.constant_features == ("k",)
    assert ds.feature_range[3] == 0


@pytest.mark.parametrize("text, message", [
    ("", "fewer than 2 rows"),
    ("a,q\n1,0\n", "fewer than 2 rows"),
    ("a,q\n1,0\n,1\n", "missing cell at row 2, column 1"),
    ("a,b,q\n1,2,0\n3,1\n", "missing cell at row 2, column 3"),
    ("a,a,q\n1,2,0\n3,4,1\n", "duplicate feature name"),
])
def test_load_errors(text, message):
    with pytest.raises(DatasetError, match=message):
        loads_csv(text)


def test_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(DatasetError, match="fewer than 2 rows"):
        load_csv(path)


def test_non_numeric_in_real_column():
    with pytest.raises(DatasetError, match="non-numeric value 'x' in real column 'a' at row 2"):
        loads_csv("a,q\n1,0\nx,1\n", CsvSchema(kind_overrides={"a": "real"}))


def test_decision_column_by_name_and_tsv():
    ds = loads_csv("q\ta\tb\n0\t1.5\tu\n1\t2.5\tv\n", CsvSchema("\t", "q"))
    assert ds.feature_names == ("a", "b")
    assert ds.feature_kinds == (FeatureKind.REAL, FeatureKind.NOMINAL)
    assert ds.labels == ("0", "1")


def test_decision_column_missing():
    with pytest.raises(DatasetError, match="not found"):
        loads_csv("a,q\n1,0\n2,1\n", CsvSchema(decision_column="z"))


def test_non_finite_is_nominal():
    ds = loads_csv("a,q\nnan,0\n1,1\n")
    assert ds.feature_kinds == (FeatureKind.NOMINAL,)


def test_decision_stays_nominal_even_if_numeric(table2):
    assert table2.labels[0] == "0"
    with pytest.raises(DatasetError):
        loads_csv("a,q\n1,0\n2,1\n", CsvSchema(kind_overrides={"q": "real"}))


def test_row_and_column_order_preserved():
    ds = loads_csv("z,y,x,label\n3,b,1.0,p\n1,a,2.0,n\n2,c,0.5,p\n")
    assert ds.feature_names == ("z", "y", "x")
    assert [ds.value(i, "y") for i in range(3)] == ["b", "a", "c"]
    assert ds.decision_name == "label"


@pytest.mark.parametrize("seed", range(10))
def test_round_trip(tmp_path, seed):
    ds = random_system(np.random.default_rng(seed))
    path = tmp_path / "rt.csv"
    save_csv(ds, path)
    back = load_csv(path, ds.csv_schema())
    assert back.feature_kinds == ds.feature_kinds
    assert back.labels == ds.labels
    assert [back.row(i) for i in range(back.object_count)] == [ds.row(i) for i in range(ds.object_count)]
    assert dumps_csv(back) == dumps_csv(ds)


def test_system_is_immutable(table2):
    with pytest.raises(ValueError):
        table2.data[0, 0] = 1.0


def test_from_table_rejects_single_row():
    with pytest.raises(DatasetError, match="fewer than 2 rows"):
        DecisionSystem.from_table(["a"], [[1.0]], ["0"])

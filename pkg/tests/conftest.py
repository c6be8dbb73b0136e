from pathlib import Path

import numpy as np
import pytest

from fuzzy_reduct import CsvSchema, DecisionSystem, load_csv

DATA = Path(__file__).parent / "data"


@pytest.fixture
def table1():
    return load_csv(DATA / "table1.csv", CsvSchema(kind_overrides={"*": "nominal"}))


@pytest.fixture
def table2():
    return load_csv(DATA / "table2.csv")


def random_system(rng, n_obj=None, n_feat=None, kinds="mixed", n_labels=None) -> DecisionSystem:
    """Small random decision system; values drawn from a short grid so ties and duplicates occur."""
    n_obj = n_obj or int(rng.integers(3, 9))
    n_feat = n_feat or int(rng.integers(1, 7))
    n_labels = n_labels or int(rng.integers(2, 4))
    names = [chr(ord("a") + f) for f in range(n_feat)]
    if kinds == "mixed":
        kind_list = [("real", "nominal")[int(k)] for k in rng.integers(0, 2, n_feat)]
    else:
        kind_list = [kinds] * n_feat
    rows = []
    for _ in range(n_obj):
        row = []
        for kind in kind_list:
            if kind == "real":
                row.append(float(rng.integers(-5, 6)) / 10)
            else:
                row.append("xyz"[int(rng.integers(0, 3))])
        rows.append(row)
    labels = [str(int(v)) for v in rng.integers(0, n_labels, n_obj)]
    return DecisionSystem.from_table(names, rows, labels, kind_list)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

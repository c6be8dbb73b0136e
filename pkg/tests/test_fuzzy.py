import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzy_reduct import Connectives, DecisionSystem, Kernel, similarity, similarity_matrix
from fuzzy_reduct.fuzzy import pair_degrees

from .conftest import random_system
from .golden import MU_A, MU_C, MU_Q

unit = st.floats(0.0, 1.0, allow_nan=False)
LUK = Connectives("lukasiewicz", "lukasiewicz")
MINMAX = Connectives("minimum", "maximum")


def test_range_linear_entry(table2):
    assert similarity(table2, "a", 0, 1) == pytest.approx(1 - 4 * (0.1 / 0.6))
    assert round(similarity(table2, "a", 0, 1), 2) == 0.33


def test_reflexive(table2):
    for kernel in Kernel:
        for f in ("a", "b", "c"):
            assert similarity(table2, f, 3, 3, kernel) == 1.0


def test_stddev_triangular_hand_value(table2):
    # direct evaluation of the triangular membership with population sigma of b:
    # sigma = 0.23804761428476165, xi = -0.3, xj = -0.4
    assert similarity(table2, "b", 0, 2, Kernel.STDDEV_TRIANGULAR) == pytest.approx(0.579915974791597, abs=1e-12)


def test_stddev_triangular_sample_sigma(table2):
    b = [-0.3, -0.5, -0.4, 0.1, -0.1, -0.6]
    sigma = float(np.std(b, ddof=1))
    expected = max(min((b[2] - (b[0] - sigma)) / sigma, ((b[0] + sigma) - b[2]) / sigma), 0)
    assert similarity(table2, "b", 0, 2, Kernel.STDDEV_TRIANGULAR, ddof=1) == pytest.approx(expected)


@pytest.mark.parametrize("feature, printed", [("a", MU_A), ("c", MU_C)])
def test_printed_similarity_matrices(table2, feature, printed):
    sm = similarity_matrix(table2, feature)
    assert np.max(np.abs(sm.degrees - np.array(printed))) <= 0.005


def test_decision_matrix(table2):
    sm = similarity_matrix(table2, "q", Kernel.CRISP_EQUALITY)
    assert sm.degrees.tolist() == MU_Q
    assert sm.degrees[0].tolist() == [1, 0, 1, 1, 0, 0]


def test_b_matrix_follows_formula_not_print(table2):
    # b range is 0.7; the pair (x_0, x_1) differs by 0.2, beyond a quarter of the range
    sm = similarity_matrix(table2, "b")
    assert sm.degrees[0, 1] == 0.0
    assert sm.degrees[0, 2] == pytest.approx(1 - 4 * 0.1 / 0.7)


def test_constant_feature_all_ones():
    ds = DecisionSystem.from_table(["k", "x"], [[0.5, 1.0], [0.5, 2.0], [0.5, 3.0]], ["0", "1", "0"],
                                   ["real", "real"])
    for kernel in (Kernel.RANGE_LINEAR, Kernel.STDDEV_TRIANGULAR):
        assert np.all(similarity_matrix(ds, "k", kernel).degrees == 1.0)


def test_nominal_uses_equality(table1):
    sm = similarity_matrix(table1, "a", Kernel.RANGE_LINEAR)
    assert sm.kernel is Kernel.CRISP_EQUALITY
    assert sm.degrees[0, 3] == 1.0 and sm.degrees[0, 1] == 0.0


def test_range_linear_cutoff(table2):
    for f in range(3):
        col = table2.data[:, f]
        span = col.max() - col.min()
        for i, j in itertools.combinations(range(6), 2):
            if abs(col[i] - col[j]) > 0.25 * span:
                assert similarity(table2, f, i, j) == 0.0


def test_pair_degrees_agree_pointwise(rng):
    for _ in range(20):
        ds = random_system(rng)
        i, j = np.triu_indices(ds.object_count, 1)
        for kernel in Kernel:
            block = pair_degrees(ds, i, j, kernel)
            for k in range(i.size):
                for f in range(ds.feature_count):
                    assert block[k, f] == similarity(ds, f, int(i[k]), int(j[k]), kernel)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=8),
       st.sampled_from(list(Kernel)), st.integers(0, 1))
def test_similarity_symmetry_bounds(values, kernel, ddof):
    n = len(values)
    ds = DecisionSystem.from_table(["x"], [[v] for v in values], [str(k % 2) for k in range(n)], ["real"])
    sm = similarity_matrix(ds, "x", kernel, ddof).degrees
    assert np.array_equal(sm, sm.T)
    assert np.all(np.diag(sm) == 1.0)
    assert np.all((sm >= 0) & (sm <= 1))


# -- connectives ----------------------------------------------------------------


@given(unit)
def test_boundary_identities(x):
    for conn in (LUK, MINMAX):
        assert conn.t(x, 1.0) == pytest.approx(x, abs=1e-12)
        assert conn.t(x, 0.0) == 0.0
        assert conn.s(x, 0.0) == pytest.approx(x, abs=1e-12)
        assert conn.s(x, 1.0) == 1.0
    assert Connectives.negation(Connectives.negation(x)) == pytest.approx(x, abs=1e-12)


def test_connective_algebra_dense_grid():
    g = np.linspace(0, 1, 401)
    x, y = np.meshgrid(g, g)
    for conn in (LUK, MINMAX):
        assert np.all(conn.t(x, y) <= np.minimum(x, y) + 1e-12)
        assert np.all(conn.s(x, y) >= np.maximum(x, y) - 1e-12)
        assert np.all((conn.t(x, y) >= 0) & (conn.t(x, y) <= 1))
        assert np.all((conn.s(x, y) >= 0) & (conn.s(x, y) <= 1))
    assert np.max(np.abs(LUK.t(x, y) - np.maximum(x + y - 1, 0))) <= 1e-12
    assert np.max(np.abs(LUK.s(x, y) - np.minimum(x + y, 1))) <= 1e-12
    assert np.max(np.abs(LUK.implicator(x, y) - np.minimum(1 - x + y, 1))) <= 1e-12


def test_fold_is_order_independent(rng):
    for conn in (LUK, MINMAX):
        for _ in range(100):
            v = rng.uniform(0, 0.4, size=6)
            folds = {round(float(conn.s_fold(np.array(p))), 12) for p in itertools.permutations(v)}
            assert len(folds) == 1
    assert LUK.s_fold([]) == 0.0 and MINMAX.s_fold([]) == 0.0


def test_bad_connective_name():
    with pytest.raises(ValueError):
        Connectives("product", "maximum")

import pytest
from hypothesis import given, strategies as st

from oracle import tangent_dim
from quotlab.catalog import (ATOMS, UNSETTLED, WITNESS_NAMES, component_dimension, concatenation_witness,
                             disjoint_points, enumerate_components, enumerate_quot_components, parse_descriptor,
                             principal_dimension, quot_component_dimension, quot_principal_dimension,
                             replay_tables, second_concatenation_witness, square_zero_dimension, verify_witness,
                             witness)
from quotlab.errors import NotFoundError, OutOfCatalogError
from quotlab.tuples import tangent_dimension

# rows n = 1..7 as printed (n <= 2 and n >= 7 rows repeated), columns d = 1..7
COMMUTING_ROWS = {
    1: [1, 1, 1, 1, 1, 1, 1], 2: [1, 1, 1, 1, 1, 1, 1], 3: [1, 1, 1, 1, 1, 1, 1],
    4: [1, 1, 1, 2, 2, 2, 2], 5: [1, 1, 1, 2, 4, 4, 8], 6: [1, 1, 1, 2, 4, 7, 11],
    7: [1, 1, 1, 2, 4, 7, 13],
}
QUOT_ROWS = {
    4: {4: (1, 2), 5: (1, 2), 6: (1, 2), 7: (1, 2)},
    5: {4: (1, 2), 5: (1, 3, 4), 6: (1, 3, 4), 7: (1, 4, 7, 8)},
    6: {4: (1, 2), 5: (1, 3, 4), 6: (1, 4, 6, 7), 7: (1, 5, 9, 11)},
    7: {4: (1, 2), 5: (1, 3, 4), 6: (1, 4, 6, 7), 7: (1, 6, 10, 12, 13)},
}


@pytest.mark.parametrize("n", range(1, 8))
def test_commuting_table_row(n):
    assert [enumerate_components(n, d)[0] for d in range(1, 8)] == COMMUTING_ROWS[n]


@pytest.mark.parametrize("n", range(1, 8))
def test_quot_table_row(n):
    for d in range(1, 8):
        want = QUOT_ROWS.get(n, {}).get(d, (1,))
        got = tuple(enumerate_quot_components(n, d, r) for r in range(1, len(want) + 1))
        assert got == want
        assert enumerate_quot_components(n, d, 7) == want[-1]


def test_table_replay_is_clean():
    assert replay_tables().ok


def test_large_n_is_stable():
    assert enumerate_components(12, 7)[0] == 13


def test_beyond_catalog():
    with pytest.raises(OutOfCatalogError):
        enumerate_components(4, 8)


def test_component_labels():
    _, comps = enumerate_components(5, 5)
    assert sorted(c.label for c in comps) == sorted(["pt+pt+pt+pt+pt", "sq(4,2)+pt", "sq(5,2)", "sq(5,3)"])
    assert parse_descriptor("pt+sq(4,2)").label == "sq(4,2)+pt"


def test_unsettled_cases_are_flagged():
    assert (4, 7, 3) in UNSETTLED and (4, 7, 4) in UNSETTLED
    assert all(a.minN == 5 for a in ATOMS if a.kind == "square-zero" and a.d == 7 and a.m in (3, 4))


@given(st.integers(1, 9), st.integers(1, 7))
def test_principal_dimension_from_points(n, d):
    assert component_dimension("+".join(["pt"] * d), n) == principal_dimension(n, d)


@given(st.integers(1, 9), st.integers(1, 7), st.integers(1, 7))
def test_quot_principal_dimension(n, d, r):
    assert quot_component_dimension("+".join(["pt"] * d), n, r) == quot_principal_dimension(n, d, r)


@pytest.mark.parametrize("name", [w for w in WITNESS_NAMES if w.startswith("sq")])
def test_square_zero_witness_dimensions(name):
    e = witness(name)
    m = e.d - e.rank
    assert e.tangent == square_zero_dimension(e.n, e.d, m) == component_dimension(e.atom, e.n)
    if e.quot_dim is not None:
        assert e.quot_dim == e.rank * e.d - e.d ** 2 + e.tangent


def test_w332_atom_dimension():
    assert component_dimension("w332", 5) == 71 == witness("w332").tangent


def test_quot_dimensions_of_witnesses():
    assert [witness(w).quot_dim for w in ["sq-5-2", "sq-6-3", "sq-6-2", "sq-7-3-n5", "sq-7-2-n7"]] == \
        [31, 51, 50, 56, 73]


@pytest.mark.parametrize("n", range(1, 7))
def test_disjoint_points(n):
    t = disjoint_points(list(range(n)), [x + 1 for x in range(n)])
    assert tangent_dimension(t) == 2 + 2 * n == tangent_dim(t.rows)


def test_concatenation_witnesses():
    assert tangent_dimension(concatenation_witness()) == 66
    assert tangent_dimension(concatenation_witness(2)) == 66
    assert tangent_dimension(second_concatenation_witness()) == 66
    assert component_dimension("sq(4,2)+pt+pt+pt", 4) == 66


@pytest.mark.parametrize("name", WITNESS_NAMES)
def test_verify_witness(name):
    rep = verify_witness(name)
    assert rep.ok, rep.checks


def test_unknown_witness():
    with pytest.raises(NotFoundError):
        witness("nope")

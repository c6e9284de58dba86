import pytest
from hypothesis import given, strategies as st
from gmpy2 import mpq

from oracle import rank_qq
from quotlab.errors import ArithmeticDomainError, ShapeError, SingularMatrixError
from quotlab.field import Fp, QQ, parse_field, prime_field
from quotlab.linalg import (Echelon, ExactMatrix, LinearSolver, dense_rank_mod_p, inverse, kernel_basis,
                            mat_vec, rank, sparse_rank)

matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rational_parsing():
    assert QQ("3/6") == mpq(1, 2)
    assert QQ(" -2 ") == -2
    with pytest.raises(ArithmeticDomainError):
        QQ(0.5)


def test_prime_field_basics():
    f = prime_field(7)
    assert f("1/2") == 4
    assert f(-1) == 6
    assert f.inv(3) * 3 % 7 == 1
    with pytest.raises(ArithmeticDomainError):
        f("1/7")
    with pytest.raises(ArithmeticDomainError):
        parse_field({"prime": 2})
    with pytest.raises(ArithmeticDomainError):
        parse_field("p:9")


def test_fp_mixing_rejected():
    with pytest.raises(ArithmeticDomainError):
        Fp(1, 5) + Fp(1, 7)
    with pytest.raises(ArithmeticDomainError):
        QQ(Fp(1, 5))


def test_json_scalars():
    assert QQ.to_json(mpq(-3, 4)) == "-3/4"
    assert QQ.to_json(mpq(5)) == "5"
    assert prime_field(11).to_json(-1) == 10
    assert prime_field(11).evidence() == "char-p evidence"


@given(matrices)
def test_rank_matches_sympy(rows):
    m = ExactMatrix.from_rows(rows, QQ)
    assert rank(m) == rank_qq(rows, len(rows[0]))


@given(matrices)
def test_kernel_is_kernel(rows):
    m = ExactMatrix.from_rows(rows, QQ)
    ker = kernel_basis(m)
    assert len(ker) == m.ncols - rank(m)
    for v in ker:
        assert all(x == 0 for x in mat_vec(m, v))


@given(matrices)
def test_dense_modular_rank_agrees(rows):
    p = 2147483647
    sparse = [{c: x % p for c, x in enumerate(r) if x % p} for r in rows]
    assert dense_rank_mod_p(sparse, len(rows[0]), p) == sparse_rank(sparse, p)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse(rows):
    m = ExactMatrix.from_rows(rows, QQ)
    if rank(m) < 3:
        with pytest.raises(SingularMatrixError):
            inverse(m)
        return
    prod = m @ inverse(m)
    assert prod.rows() == ExactMatrix.identity(3).rows()


@given(matrices, st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_solver_finds_solutions(rows, u):
    ncols = len(rows[0])
    cols = [{r: QQ(rows[r][c]) for r in range(len(rows)) if rows[r][c]} for c in range(ncols)]
    b = {}
    for c in range(ncols):
        for r, x in cols[c].items():
            b[r] = b.get(r, 0) + x * u[c]
    b = {k: v for k, v in b.items() if v}
    sol = LinearSolver(cols, len(rows), QQ).solve(b)
    assert sol is not None
    back = {}
    for c, x in sol.items():
        for r, y in cols[c].items():
            back[r] = back.get(r, 0) + x * y
    assert {k: v for k, v in back.items() if v} == b


def test_echelon_complement():
    e = Echelon(QQ, [{0: QQ(1), 1: QQ(1)}])
    comp = e.complement_in([{0: QQ(1)}, {1: QQ(1)}, {0: QQ(2), 1: QQ(2)}])
    assert len(comp) == 1
    assert e.add({2: QQ(1)}) and not e.add({2: QQ(3)})


def test_shape_errors():
    with pytest.raises(ShapeError):
        ExactMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ArithmeticDomainError):
        ExactMatrix.from_rows([[Fp(1, 5)]], prime_field(7))

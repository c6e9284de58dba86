import random

import pytest
from hypothesis import given, settings, strategies as st

from quotlab.catalog import witness
from quotlab.config import CertificateConfig, QuadricConfig, VerdictConfig
from quotlab.deform import HomComplex
from quotlab.errors import PreconditionError
from quotlab.field import QQ, prime_field
from quotlab.modules import ModulePresentation
from quotlab.obstruct import (INCONCLUSIVE, NONREDUCED, ObstructionCalculator, ObstructionQuadrics,
                              brute_force_vanishes, dim_upper_certificate, graded_quotient_dims,
                              nonreducedness_verdict, obstruction_identities, obstruction_quadrics,
                              primary_obstruction)
from quotlab.poly import _monomials


@pytest.fixture(scope="module")
def nonreduced_calc():
    return ObstructionCalculator(witness("nonreduced-8").module())


@pytest.fixture(scope="module")
def nonreduced_quadrics(nonreduced_calc):
    return obstruction_quadrics(nonreduced_calc)


# ---------------------------------------------------------------- identities

@pytest.mark.parametrize("name,e1,e2", [("sq-4-2", -1, -1), ("sq-4-2", -1, 0), ("sq-4-2", 0, 0),
                                        ("sq-5-2", 0, -1), ("sq-6-2", -1, -1)])
def test_identities_on_square_zero_witnesses(name, e1, e2):
    rep = obstruction_identities(witness(name).module(), e1, seed=1, max_pairs=30, other_degree=e2)
    assert rep.ok, rep
    assert rep.pairs > 0


def test_identities_on_nonreduced_witness(nonreduced_calc):
    rep = obstruction_identities(nonreduced_calc, -1, seed=0, max_pairs=25)
    assert rep.ok and rep.pairs == 25
    # the perturbation actually moved the lifts, so lift independence is not vacuous
    assert rep.perturbed > 0
    mixed = obstruction_identities(nonreduced_calc, -1, seed=2, max_pairs=10, other_degree=0)
    assert mixed.ok


def one_variable_module():
    # F = S e1 + S e2(-1), K = (y^3 e1, y e2 - y^2 e1) over k[y]
    return ModulePresentation(1, (0, 1), ({(0, (3,)): QQ(1)}, {(1, (1,)): QQ(1), (0, (2,)): QQ(-1)}))


def test_one_variable_obstruction_vanishes():
    pres = one_variable_module()
    calc = ObstructionCalculator(pres)
    hc = calc.hc
    for e in hc.hom_window():
        assert hc.ext_dim(2 * e) == 0
        q = obstruction_quadrics(calc, e)
        assert all(not quad for quad in q.quadrics)
        basis = hc.hom(e)
        for a in basis[:3]:
            for b in basis[:3]:
                assert not any(primary_obstruction(calc, e, a, e, b))


def test_quadrics_refuse_characteristic_two():
    with pytest.raises(Exception):
        prime_field(2)
    # a module over F_3 is fine
    pres = ModulePresentation(2, (0,), ({(0, (2, 0)): 1}, {(0, (1, 1)): 1}, {(0, (0, 2)): 1}), prime_field(3))
    obstruction_quadrics(pres, -1)


def test_quadric_count_for_nonreduced_witness(nonreduced_quadrics):
    q = nonreduced_quadrics
    assert q.nvars == 16 and len(q) == 64
    assert q.ext_degree == -2


def test_diagonal_convention_only_rescales_squares(nonreduced_calc, nonreduced_quadrics):
    two = obstruction_quadrics(nonreduced_calc, config=QuadricConfig("two"))
    for a, b in zip(nonreduced_quadrics.quadrics, two.quadrics):
        assert {k: v for k, v in a.items() if k[0] != k[1]} == {k: v for k, v in b.items() if k[0] != k[1]}
        assert {k: 4 * v for k, v in a.items() if k[0] == k[1]} == {k: v for k, v in b.items() if k[0] == k[1]}


# ---------------------------------------------------------------- certificate

def test_empty_quadrics_need_all_forms():
    q = ObstructionQuadrics(16, (), QQ)
    assert dim_upper_certificate(q, 16).verdict
    assert not dim_upper_certificate(q, 15, config=CertificateConfig(retries=1, max_degree=4)).verdict


def test_union_of_two_hyperplanes():
    q = ObstructionQuadrics(16, ({(0, 1): QQ(1)},), QQ)
    yes = dim_upper_certificate(q, 15, self_check=True)
    assert yes.verdict and yes.selfCheck is True
    no = dim_upper_certificate(q, 14, config=CertificateConfig(retries=2, max_degree=5))
    assert not no.verdict and no.attempts == 3


def test_certificate_exact_and_modular_agree():
    rng = random.Random(5)
    quads = tuple({(i, j): QQ(rng.randint(-2, 2)) for i in range(6) for j in range(i, 6) if rng.random() < 0.3}
                  for _ in range(5))
    q = ObstructionQuadrics(6, quads, QQ)
    for target in (1, 2, 3):
        a = dim_upper_certificate(q, target, seed=3, config=CertificateConfig(retries=0, modular=False))
        b = dim_upper_certificate(q, target, seed=3, config=CertificateConfig(retries=0))
        # reduction mod p can only shrink Hilbert function values
        assert all(x <= y for x, y in zip(b.hilbert, a.hilbert))
        if b.verdict:
            assert a.verdict or a.vanishingDegree is None


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6))
def test_hilbert_function_of_complete_intersection(seed):
    # k regular quadrics in k variables: Hilbert function binomial(k, i)
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    field = prime_field(32003)
    polys = []
    for i in range(k):
        e = [0] * k
        e[i] = 2
        poly = {tuple(e): 1}
        for a in range(i + 1, k):
            f = [0] * k
            f[i] += 1
            f[a] += 1
            poly[tuple(f)] = rng.randint(0, 5)
        polys.append({m: c for m, c in poly.items() if c})
    dims = graded_quotient_dims(polys, k, field, k + 1)
    from math import comb
    assert dims == [comb(k, i) for i in range(k + 1)] + [0]


def test_certificate_invariant_under_ext_basis_change(nonreduced_quadrics):
    q = nonreduced_quadrics
    rng = random.Random(11)
    n = len(q)
    # random unimodular upper-triangular change of the Ext basis
    coeffs = [[(1 if i == j else rng.randint(-2, 2)) if j >= i else 0 for j in range(n)] for i in range(n)]
    new = []
    for i in range(n):
        acc = {}
        for j in range(n):
            c = coeffs[i][j]
            if c:
                for key, v in q.quadrics[j].items():
                    acc[key] = acc.get(key, 0) + c * v
        new.append({k: v for k, v in acc.items() if v})
    q2 = ObstructionQuadrics(q.nvars, tuple(new), q.field)
    a = dim_upper_certificate(q, 4, seed=0, config=CertificateConfig(retries=0))
    b = dim_upper_certificate(q2, 4, seed=0, config=CertificateConfig(retries=0))
    assert a.hilbert == b.hilbert and a.verdict and b.verdict


def test_brute_force_agrees(nonreduced_quadrics):
    cert = dim_upper_certificate(nonreduced_quadrics, 4, seed=1, config=CertificateConfig(retries=0))
    assert cert.verdict and cert.vanishingDegree == 3
    assert brute_force_vanishes(nonreduced_quadrics, cert.linearFormsUsed, 3)
    assert not brute_force_vanishes(nonreduced_quadrics, cert.linearFormsUsed, 2)


# ---------------------------------------------------------------- verdict

def test_nonreduced_witness_verdict():
    rep = nonreducedness_verdict(witness("nonreduced-8").module(), seed=0)
    assert rep.assumption1 and rep.betti1 == {1: 12}
    assert rep.assumption2 and rep.tangent_dims == {-1: 16, 0: 48}
    assert rep.assumption3 and rep.certificate.hilbert == (1, 12, 20, 0)
    assert rep.obstruction_dims == {-2: 64}
    assert rep.bound == 52 and rep.verdict == NONREDUCED


def linear_generation_failure():
    """K1 spanned by y_i e_j (j = 1..3), plus e4 times every quadric: HS 4 + 4T, K not linear."""
    lin = [{(j, m): QQ(1)} for j in range(3) for m in _monomials(4, 1)]
    quads = [{(3, m): QQ(1)} for m in _monomials(4, 2)]
    return ModulePresentation(4, (0, 0, 0, 0), tuple(lin + quads))


def test_linear_generation_failure_is_inconclusive():
    rep = nonreducedness_verdict(linear_generation_failure())
    assert not rep.assumption1
    assert rep.betti1 == {1: 12, 2: 10}
    assert rep.assumption3 is None and rep.certificate is None
    assert rep.verdict == INCONCLUSIVE


def tangent_size_failure():
    """First sampled K1 (12 rows of three +-1 terms) with HS 4 + 4T, linear K and tangent above 64."""
    lin = [(g, m) for g in range(4) for m in _monomials(4, 1)]
    quads = [{(g, m): QQ(1)} for g in range(4) for m in _monomials(4, 2)]
    for seed in range(100):
        rng = random.Random(seed)
        K1 = [{k: QQ(rng.choice([1, -1])) for k in rng.sample(lin, 3)} for _ in range(12)]
        pres = ModulePresentation(4, (0, 0, 0, 0), tuple(K1 + quads))
        if pres.graded.dims != {0: 4, 1: 4}:
            continue
        hc = HomComplex(pres)
        if set(hc.res.degrees[1]) == {1} and hc.hom_dim(-1) + hc.hom_dim(0) > 64:
            return pres
    raise AssertionError("no sample found")


def test_tangent_size_failure_is_inconclusive():
    rep = nonreducedness_verdict(tangent_size_failure())
    assert rep.assumption1
    assert not rep.assumption2 and rep.tangent_total > 64
    assert rep.certificate is None
    assert rep.verdict == INCONCLUSIVE


def test_verdict_precondition():
    with pytest.raises(PreconditionError):
        nonreducedness_verdict(witness("sq-4-2").module())


def test_verdict_over_prime_field_is_evidence_only():
    pres = witness("nonreduced-8").module()
    f = prime_field(65537)
    pres_p = ModulePresentation(4, pres.degrees, tuple({k: f(v) for k, v in el.items()} for el in pres.elements()), f)
    rep = nonreducedness_verdict(pres_p, config=VerdictConfig())
    assert rep.verdict == NONREDUCED and rep.evidence == "char-p evidence"

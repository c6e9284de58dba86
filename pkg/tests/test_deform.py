import pytest
from hypothesis import assume, given, settings

from conftest import commuting_tuples
from quotlab.admodules import StablePair, quot_point
from quotlab.catalog import witness
from quotlab.deform import (INCONCLUSIVE, SMOOTH, HomComplex, bb_graded_data, elementary_smoothness, ext1_graded,
                            family_dimension_bound, has_trivial_negative_tangents, hom_graded, local_tangent_report,
                            negative_tangent_dim)
from quotlab.errors import GradingError
from quotlab.tuples import tangent_dimension

SQUARE_ZERO = ["sq-4-2", "sq-5-2", "sq-6-3", "sq-6-2", "sq-7-3-n5", "sq-7-2-n7"]


def test_hom_and_ext_of_4x4_example():
    pres = witness("sq-4-2").module()
    assert hom_graded(pres).nonzero() == {-1: 4, 0: 12}
    assert ext1_graded(pres).nonzero() == {-2: 16}


@pytest.mark.parametrize("name", SQUARE_ZERO)
def test_square_zero_hom_total_matches_tuple_side(name):
    e = witness(name)
    pres = e.module()
    # Quot tangent = r d - d^2 + tangent of the commuting variety
    assert hom_graded(pres).total == e.rank * e.d - e.d ** 2 + tangent_dimension(e.tuple)
    assert negative_tangent_dim(pres) == e.n
    assert elementary_smoothness(pres) == SMOOTH


@pytest.mark.parametrize("name", ["sq-4-2", "sq-7-2-n7"])
def test_filtered_route_agrees_with_graded_route(name):
    e = witness(name)
    rep = local_tangent_report(e.pair())
    h = hom_graded(e.module())
    assert rep.hom_total == h.total
    assert rep.negative == negative_tangent_dim(e.module())


def test_w332_filtered_tangents():
    e = witness("w332")
    rep = local_tangent_report(e.pair())
    assert (rep.hom_total, rep.nonnegative, rep.negative) == (36, 31, 5)
    assert rep.trivial_negative_tangents
    assert family_dimension_bound(e.tuple, e.family_directions()) == 71


def test_w332_graded_route_refuses():
    with pytest.raises(GradingError):
        hom_graded(witness("w332").module())


def test_nonreduced_witness_fails_tnt():
    pres = witness("nonreduced-8").module()
    assert hom_graded(pres).nonzero() == {-1: 16, 0: 48}
    assert not has_trivial_negative_tangents(pres)
    assert elementary_smoothness(pres) == INCONCLUSIVE
    assert ext1_graded(pres).nonzero() == {-2: 64}


def test_bb_data_splits_hom():
    pres = witness("sq-5-2").module()
    pos = bb_graded_data(pres, "+")
    neg = bb_graded_data(pres, "-")
    h = hom_graded(pres).nonzero()
    assert pos.tangent_total + neg.tangent_total - h.get(0, 0) == hom_graded(pres).total
    assert pos.tangent == {e: v for e, v in h.items() if e >= 0}


def test_ext_representatives_are_cocycles():
    hc = HomComplex(witness("sq-4-2").module())
    reps, _ = hc.ext(-2)
    assert len(reps) == 16
    assert all(hc.is_cocycle(-2, v) for v in reps)


@settings(max_examples=30)
@given(commuting_tuples(nilpotent=True, max_d=4))
def test_hom_total_matches_tuple_side(t):
    pres = quot_point(StablePair.from_basis_indices(t, list(range(t.d))))
    assume(pres.is_graded)
    assert hom_graded(pres).total == t.d * t.d - t.d * t.d + tangent_dimension(t)

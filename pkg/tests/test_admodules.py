import pytest
from hypothesis import assume, given, settings

from conftest import commuting_tuples, dual_generators
from quotlab.admodules import (StablePair, apolar_span, dual_gens_of_module, hilbert_function, is_stable,
                               minimal_dual_generators, module_from_tuple, pairs_to_zero, perp_of_dual_gens,
                               quot_point, tuple_from_module)
from quotlab.catalog import witness
from quotlab.deform import quot_tangent_consistency
from quotlab.errors import GradingError, StabilityError
from quotlab.field import QQ
from quotlab.modules import ModulePresentation
from quotlab.poly import DualElement
from quotlab.tuples import CommTuple, tangent_dimension


def same_submodule(a, b):
    """K_a = K_b for homogeneous presentations of the same free module."""
    if a.graded.dims != b.graded.dims:
        return False
    return all(b.graded.contains(k) for k in a.elements()) and all(a.graded.contains(k) for k in b.elements())


def Y(i, g, c=1):
    m = [0, 0, 0, 0]
    m[i - 1] = 1
    return {(g, tuple(m)): QQ(c)}


def add(*terms):
    out = {}
    for t in terms:
        for k, v in t.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


# relations of the 4x4 example, with e3 -> generator 0 and e4 -> generator 1
SIX_RELATIONS = [Y(1, 1), Y(2, 0), add(Y(2, 1), Y(1, 0, -1)), Y(3, 1), Y(4, 0), add(Y(4, 1), Y(3, 0, -1))]


def test_generators_and_relations_of_4x4_example():
    t = witness("sq-4-2").tuple
    pres = quot_point(StablePair.from_basis_indices(t, [2, 3]))
    expected = ModulePresentation(4, (0, 0), tuple(SIX_RELATIONS))
    assert len(pres.kgens) == 6
    assert same_submodule(pres, expected)
    assert hilbert_function(pres).values == (2, 2)


def test_inverse_system_of_4x4_example():
    z = lambda i: tuple(1 if k == i - 1 else 0 for k in range(4))  # noqa: E731
    sig1 = DualElement.make(4, 2, {(0, z(1)): QQ(1), (1, z(2)): QQ(1)})
    sig2 = DualElement.make(4, 2, {(0, z(3)): QQ(1), (1, z(4)): QQ(1)})
    pres = perp_of_dual_gens([sig1, sig2], 4, 2)
    assert same_submodule(pres, ModulePresentation(4, (0, 0), tuple(SIX_RELATIONS)))
    assert pairs_to_zero(pres, [sig1, sig2])


@settings(max_examples=120)
@given(dual_generators())
def test_apolarity_round_trip(data):
    n, r, sigmas = data
    K = perp_of_dual_gens(sigmas, n, r)
    ech, _ = apolar_span(sigmas, n)
    # degree of F/K equals the dimension of the dual module
    assert K.degree == ech.dim
    assert pairs_to_zero(K, sigmas)
    # (K^perp)^perp = K
    K2 = perp_of_dual_gens(dual_gens_of_module(K), n, r)
    assert same_submodule(K, K2)
    # minimal dual generators span the same module
    K3 = perp_of_dual_gens(minimal_dual_generators(sigmas, n), n, r)
    assert same_submodule(K, K3)


def test_principal_ideal_dual():
    # z1^2 + z2^2 has apolar ideal (y1^2 - y2^2, y1 y2)
    s = DualElement.make(2, 1, {(0, (2, 0)): QQ(1), (0, (0, 2)): QQ(1)})
    K = perp_of_dual_gens([s], 2, 1)
    assert hilbert_function(K).values == (1, 2, 1)


@settings(max_examples=40)
@given(commuting_tuples(nilpotent=True, max_d=4))
def test_quot_tangent_formula(t):
    """dim Hom(K, M) = r d - d^2 + dim T C_n(M_d) for graded pairs."""
    gens = list(range(t.d))
    pair = StablePair.from_basis_indices(t, gens)
    pres = quot_point(pair)
    assume(pres.is_graded)
    assert quot_tangent_consistency(pres, t)


@settings(max_examples=40)
@given(commuting_tuples(nilpotent=True, max_d=4))
def test_module_tuple_round_trip(t):
    pair = StablePair.from_basis_indices(t, list(range(t.d)))
    pres = quot_point(pair)
    t2, vecs = tuple_from_module(pres)
    assert t2.d == t.d
    assert tangent_dimension(t2) == tangent_dimension(t)
    assert quot_point(StablePair(t2, tuple(vecs))).degree == pres.degree


def test_unstable_pair_rejected():
    t = CommTuple.from_rows([[[0, 1], [0, 0]]])
    bad = StablePair.from_basis_indices(t, [0])
    assert not is_stable(bad)
    with pytest.raises(StabilityError):
        quot_point(bad)
    assert is_stable(StablePair.from_basis_indices(t, [1]))


def test_inhomogeneous_module_has_no_graded_hilbert_function():
    pres = witness("w332").module()
    assert not pres.is_graded
    with pytest.raises(GradingError):
        hilbert_function(pres)
    assert pres.degree == 7


def test_finite_module_dimension():
    m = module_from_tuple(witness("sq-5-2").tuple)
    assert m.dim == 5
    assert m.min_generator_count() == 3

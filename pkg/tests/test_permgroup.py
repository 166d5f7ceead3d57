import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lrgroups.permgroup import (
    GroupTooLarge,
    Permutation,
    closure,
    is_dihedral_of_order_8,
    is_elementary_abelian_2,
    is_intransitive_klein,
)


def sym4():
    return closure([Permutation([1, 2, 3, 0]), Permutation([1, 0, 2, 3])])


def test_permutation_basics():
    p = Permutation.parse("(1 2 3)(4 5)")
    assert p.images == (1, 2, 0, 4, 3)
    assert p.order() == 6
    assert p.cycle_string() == "(1 2 3)(4 5)"
    q = Permutation.parse("[1, 0, 2, 3, 4]")
    # right action: apply p then q
    assert (p * q)(0) == q(p(0))
    assert (p * p.inverse()).is_identity()
    assert p ** 6 == Permutation.identity(5)


def test_closure_and_lookup():
    G = sym4()
    assert G.order == 24
    assert np.array_equal(G.elements[0], np.arange(4))
    for i in range(G.order):
        assert G.index(G.perm(i)) == i
    inv = G.inverses
    assert all(int(G.mul(i, inv[i])) == 0 for i in range(G.order))
    with pytest.raises(GroupTooLarge):
        closure([Permutation.parse("(1 2 3 4 5 6 7 8)"), Permutation.parse("(1 2)", 8)], cap=1000)


def test_subgroup_classes_of_sym4():
    G = sym4()
    classes = G.subgroup_classes()
    assert sorted(H.order for H in classes) == [1, 2, 2, 3, 4, 4, 4, 6, 8, 12, 24]
    two = G.subgroup_classes(p=2)
    assert sorted(H.order for H in two) == [1, 2, 2, 4, 4, 4, 8]


def test_structure_predicates():
    V = closure([Permutation.parse("(1 2)", 4), Permutation.parse("(3 4)", 4)])
    assert is_intransitive_klein(V) and is_elementary_abelian_2(V)
    Vn = closure([Permutation.parse("(1 2)(3 4)"), Permutation.parse("(1 3)(2 4)")])
    assert not is_intransitive_klein(Vn)
    D = closure([Permutation.parse("(1 2 3 4)"), Permutation.parse("(1 3)", 4)])
    assert is_dihedral_of_order_8(D)
    G = sym4()
    sub = G.generated([G.index(p) for p in (Permutation.parse("(1 2 3 4)"), Permutation.parse("(1 3)", 4))])
    assert G.normalizer(sub).order == 8
    assert G.is_normal(G.generated([G.index(p) for p in (Permutation.parse("(1 2)(3 4)"),
                                                         Permutation.parse("(1 3)(2 4)"))]))


def test_stabilisers_and_orbits():
    G = sym4()
    assert G.point_stabilizer(0).order == 6
    assert G.setwise_stabilizer([0, 1]).order == 4
    assert G.is_transitive()


@st.composite
def perm_lists(draw):
    n = draw(st.integers(2, 5))
    k = draw(st.integers(1, 3))
    return [Permutation(draw(st.permutations(range(n)))) for _ in range(k)]


@settings(max_examples=50, deadline=None)
@given(perm_lists())
def test_closure_is_a_group(gens):
    G = closure(gens)
    M = G.mul(np.repeat(np.arange(G.order), G.order), np.tile(np.arange(G.order), G.order))
    assert set(np.asarray(M).tolist()) == set(range(G.order))
    assert G.order % len(G.orbits()[0]) == 0
    assert all(G.index(g) >= 0 for g in gens)


@settings(max_examples=25, deadline=None)
@given(perm_lists())
def test_class_sizes_sum_to_subgroup_count(gens):
    G = closure(gens)
    classes = G.subgroup_classes()
    # orbit-stabiliser: class size = |G : N(H)|
    total = sum(G.order // G.normalizer(H).order for H in classes)
    assert total >= len(classes)
    assert all(G.order % H.order == 0 for H in classes)
    assert sorted(H.order for H in classes)[0] == 1
    assert sorted(H.order for H in classes)[-1] == G.order


@pytest.mark.parametrize("gens,count", [
    (["(1 2 3)", "(1 2)"], 6),
    (["(1 2 3 4)", "(1 3)"], 10),
    (["(1 2 3)", "(1 2)(3 4)"], 10),
    (["(1 2 3 4)", "(1 2)"], 30),
    (["(1 2)", "(3 4)", "(5 6)"], 16),
    (["(1 2 3 4 5)", "(1 2)"], 156),
])
def test_total_subgroup_counts(gens, count):
    n = 6
    G = closure([Permutation.parse(g, n) for g in gens])
    assert sum(G.order // G.normalizer(H).order for H in G.subgroup_classes()) == count

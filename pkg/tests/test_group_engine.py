from math import factorial

import pytest
from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics.named_groups import SymmetricGroup

from fixpoint_sets.errors import CapExceeded, NotPGroup
from fixpoint_sets.group_engine import (GroupHandle, conjugator, element_centralizer,
                                        is_conjugate_subgroup, orbits, permutation_isomorphism,
                                        subgroups_up_to_conjugacy, sylow_p, sylow_sym, sym_centralizer,
                                        symmetric_group, wreath_product)
from fixpoint_sets.perm_core import IDENTITY, Permutation, product


def P(text):
    return Permutation.parse(text)


def to_sympy(x, n):
    """The same permutation on 0..n-1."""
    return SymPerm([x(i + 1) - 1 for i in range(n)])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_symmetric_group_order(n):
    G = symmetric_group(range(1, n + 1))
    assert len(G.enumerate()) == factorial(n)


@pytest.mark.parametrize("text, n", [
    ("(1 2)(3 4)", 4),
    ("(1 2)(3 4)(5 6)", 6),
    ("(1 2 3)(4 5 6)", 6),
    ("(1 2)(3 4)(5 6)(7 8)", 8),
    ("(1 2 3)", 5),
])
def test_element_centralizer_matches_sympy(text, n):
    x = P(text)
    C = element_centralizer(x, range(1, n + 1))
    elements = C.enumerate()
    assert all(g.commutes_with(x) for g in elements)
    assert len(elements) == SymmetricGroup(n).centralizer(to_sympy(x, n)).order()


@pytest.mark.parametrize("q, n", [(2, 2), (2, 3), (2, 4), (3, 2)])
def test_fixed_point_free_centralizer_is_wreath_product(q, n):
    x = Permutation.from_cycles([range(i * q + 1, (i + 1) * q + 1) for i in range(n)])
    assert element_centralizer(x).order() == q ** n * factorial(n)
    assert len(element_centralizer(x).enumerate()) == q ** n * factorial(n)


@pytest.mark.parametrize("gens, n", [
    (["(1 2)(3 4)"], 6),
    (["(1 2)(3 4)", "(1 3)(2 4)"], 4),
    (["(1 2)(3 4)(5 6)(7 8)", "(1 3)(2 4)(5 7)(6 8)"], 8),
    (["(1 2 3)(4 5 6)"], 7),
    (["(1 2)", "(3 4 5)"], 6),
    (["(1 2 3 4)", "(1 3)"], 8),
])
def test_sym_centralizer_matches_filtering(gens, n):
    H = GroupHandle([P(g) for g in gens])
    C = sym_centralizer(H, range(1, n + 1))
    expected = {g for g in symmetric_group(range(1, n + 1)).enumerate()
                if all(g.commutes_with(h) for h in H.generators)}
    assert C.order() == len(expected)
    assert set(C.enumerate()) == expected


@pytest.mark.parametrize("n, p", [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3), (5, 5)])
def test_sylow_sym_order_matches_sympy(n, p):
    P_ = sylow_sym(n, p)
    assert len(P_.enumerate()) == SymmetricGroup(n).sylow_subgroup(p).order()
    assert P_.is_p_group(p)


def test_sylow_p_of_filtered_group():
    G = symmetric_group(range(1, 6))
    S2 = sylow_p(G, 2)
    assert S2.order() == 8
    assert G.cached_sylow(2) is S2
    assert sylow_p(G, 5).order() == 5


def test_word_reconstructs_element():
    G = symmetric_group(range(1, 5))
    for g in G.enumerate():
        word = G.word(g)
        assert product(G.generators[i] for i in word) == g
    assert G.word(IDENTITY) == []


def test_orbits():
    G = GroupHandle([P("(1 2)"), P("(3 4 5)")], domain=range(1, 7))
    assert orbits(G).sizes == (1, 2, 3)
    assert orbits(G).block_of(4) == frozenset({3, 4, 5})


def test_conjugation_orbits_of_involutions():
    G = symmetric_group(range(1, 5))
    involutions = [g for g in G.enumerate() if g.order() == 2]
    assert orbits(G, involutions, "conjugation").sizes == (3, 6)


def test_enumeration_cap():
    with pytest.raises(CapExceeded) as exc:
        symmetric_group(range(1, 9)).enumerate(cap=100)
    assert exc.value.cap == 100
    with pytest.raises(CapExceeded):
        GroupHandle([P("(1 2 3 4 5 6 7)"), P("(1 2)")]).enumerate(cap=50)


def test_conjugator():
    x, y = P("(1 2)(3 4)"), P("(1 3)(2 4)")
    assert x.conjugate(conjugator(x, y)) == y
    with pytest.raises(ValueError):
        conjugator(x, P("(1 2 3)"))


def test_subgroups_of_dihedral_sylow_up_to_conjugacy():
    reps = subgroups_up_to_conjugacy(sylow_sym(4, 2), symmetric_group(range(1, 5)), 2)
    assert sorted(R.order() for R in reps) == [1, 2, 2, 4, 4, 4, 8]
    S4 = symmetric_group(range(1, 5))
    for i, R in enumerate(reps):
        for T in reps[i + 1:]:
            assert not is_conjugate_subgroup(R, T, S4)


def test_conjugate_subgroups_are_recognised():
    S4 = symmetric_group(range(1, 5))
    V = GroupHandle([P("(1 2)(3 4)"), P("(1 3)(2 4)")])
    K = GroupHandle([P("(1 2)"), P("(3 4)")])
    assert is_conjugate_subgroup(GroupHandle([P("(1 2)")]), GroupHandle([P("(3 4)")]), S4)
    assert is_conjugate_subgroup(K, GroupHandle([P("(1 3)"), P("(2 4)")]), S4)
    assert not is_conjugate_subgroup(V, K, S4)
    assert not is_conjugate_subgroup(GroupHandle([P("(1 2)")]), GroupHandle([P("(1 2)(3 4)")]), S4)


def test_subgroups_need_a_p_group():
    with pytest.raises(NotPGroup):
        subgroups_up_to_conjugacy(symmetric_group(range(1, 4)), symmetric_group(range(1, 4)), 2)


@pytest.mark.parametrize("m, u, order", [(2, 2, 8), (3, 2, 72), (2, 3, 48)])
def test_wreath_product_order(m, u, order):
    W, points = wreath_product(symmetric_group(range(1, m + 1)), u, p=2)
    assert points == list(range(1, m + 1))
    assert len(W.enumerate()) == order
    assert W.cached_sylow(2).order() == _p_part(order, 2)


def _p_part(n, p):
    result = 1
    while n % p == 0:
        n //= p
        result *= p
    return result


def test_permutation_isomorphism_found_for_relabeled_group():
    G = GroupHandle([P("(1 2 3)"), P("(1 2)")], domain=range(1, 5))
    H = GroupHandle([P("(2 3 4)"), P("(2 4)")], domain=range(1, 5))
    f = permutation_isomorphism(G, H)
    assert f is not None
    assert {g.relabel(f) for g in G.enumerate()} == set(H.enumerate())


def test_permutation_isomorphism_respects_orbits():
    G = GroupHandle([P("(1 2)(3 4)")], domain=range(1, 5))
    H = GroupHandle([P("(1 2)")], domain=range(1, 5))
    assert permutation_isomorphism(G, H) is None

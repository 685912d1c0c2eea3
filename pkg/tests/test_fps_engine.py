import itertools
import random
from math import factorial

import pytest

from fixpoint_sets.config import DEFAULT_CAPS
from fixpoint_sets.errors import BudgetExhausted, CapExceeded, InvalidSet, TheoremViolation
from fixpoint_sets.fps_engine import (ambient, broue_oracle, central_witness, check_closed_identities,
                                      check_coprime_structure, check_reduction, closure,
                                      coprime_by_normalizer, frattini_holds, is_closed, is_exact,
                                      is_fixed_point_set, is_projective_set, kappa, kappa_trajectory,
                                      normalizer_N, orbit_factorization, quotient_M, quotient_module,
                                      stab_S, structure_orders, vertex_Q)
from fixpoint_sets.group_engine import permutation_isomorphism, symmetric_group
from fixpoint_sets.modlin import wreath_power_module
from fixpoint_sets.perm_core import Permutation
from fixpoint_sets.setalg import (PermSet, SqSet, coprime, delta, equivalent, fixed_point_free_class,
                                  irreducible_factors, is_irreducible, star, star_power)

XI = "{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }"


def S(text):
    return SqSet.parse(text)


def test_structure_of_full_class(xi24):
    assert stab_S(xi24).order() == 4
    assert normalizer_N(xi24).order() == 24
    assert quotient_M(xi24).order() == 6
    assert vertex_Q(xi24, 2).order() == 4
    assert vertex_Q(xi24, 3).is_trivial


def test_structure_of_single_element():
    X = S("{(1 2)(3 4)}")
    assert stab_S(X).order() == 8
    assert normalizer_N(X).order() == 8
    assert quotient_M(X).order() == 1


@pytest.mark.parametrize("q, n", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 2)])
def test_ambient_class_and_centralizer_sizes(q, n):
    x = Permutation.from_cycles([range(i * q + 1, (i + 1) * q + 1) for i in range(n)])
    amb = ambient(SqSet([x], q))
    assert len(amb) == amb.expected_size(q, q * n)
    centralizer_size = sum(1 for g in symmetric_group(range(1, q * n + 1)).enumerate() if g.commutes_with(x))
    assert centralizer_size == q ** n * factorial(n)
    assert centralizer_size * len(amb) == normalizer_N(amb.as_set()).order()


def test_ambient_support_cap():
    with pytest.raises(CapExceeded):
        ambient(S("{(1 2)(3 4)}"), DEFAULT_CAPS.with_overrides(support_cap=2))


def test_plain_sets_are_rejected():
    with pytest.raises(InvalidSet):
        is_fixed_point_set(PermSet.parse("{(1 2), (1 2 3)}"), 2)


def test_closure():
    X = S("{(1 2)(3 4)}")
    assert is_closed(X, 2)
    assert closure(X, 3) == S("{(1 2)(3 4), (1 3)(2 4), (1 4)(2 3)}")
    pair = S("{(1 2)(3 4), (1 3)(2 4)}")
    assert not is_closed(pair, 2)
    assert len(closure(pair, 2)) == 3
    assert pair <= closure(pair, 2)


@pytest.mark.parametrize("text, p", [
    ("{(1 2)(3 4), (1 3)(2 4)}", 2),
    ("{(1 2)(3 4), (1 3)(2 4)}", 3),
    ("{ (1 2)(3 4)(5 6), (1 3)(2 4)(5 6), (1 4)(2 3)(5 6) }", 3),
    ("{(1 2 3)(4 5 6)}", 3),
])
def test_closure_is_idempotent(text, p):
    c = closure(S(text), p)
    assert closure(c, p) == c


def test_exactness_and_projectivity(xi24):
    assert is_exact(S("{(1 2)}"), 2)
    assert is_exact(xi24, 2)
    assert not is_exact(xi24, 3)
    assert is_projective_set(xi24, 3)
    assert not is_projective_set(xi24, 2)


def test_closed_identities(xi24):
    check_closed_identities(xi24, 2)
    z = central_witness(xi24, 2)
    assert z is not None and z.order() == 2 and z.support == xi24.support
    assert frattini_holds(xi24, 2)
    assert frattini_holds(S("{(1 2)(3 4)(5 6)}"), 2)


@pytest.mark.parametrize("text, p, verdict, n_proj", [
    ("{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }", 2, "yes", 1),
    ("{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }", 3, "yes", 1),
    ("{(1 2)(3 4)}", 2, "yes", 1),
    ("{(1 2)}", 2, "yes", 1),
    ("{(1 2 3), (1 3 2)}", 3, "yes", 2),
])
def test_fixed_point_sets(text, p, verdict, n_proj):
    report = is_fixed_point_set(S(text), p)
    assert report.closed
    assert report.verdict == verdict
    assert report.np == n_proj
    assert report.to_dict()["fixed_point_set"] is True


def test_unclosed_set_is_not_a_fixed_point_set():
    report = is_fixed_point_set(S("{(1 2)(3 4), (1 3)(2 4)}"), 2)
    assert report.verdict == "no"
    assert report.np is None
    assert report.notes == ["closure has 3 elements"]


def test_orbit_factorization(xi24):
    X = star(xi24, S("{(1 2)}"))
    fact = orbit_factorization(X, 2)
    assert [sorted(b) for b in fact.orbits] == [[1, 2, 3, 4], [5, 6]]
    assert fact.factors == [xi24, S("{(5 6)}")]
    assert fact.q_factor_orders == [4, 2]
    assert not fact.transitive


def test_orbit_factorization_needs_exact_closed_set():
    with pytest.raises(ValueError):
        orbit_factorization(S("{(1 2)(3 4), (1 3)(2 4)}"), 2)


def test_star_power_structure(xi24):
    orders = structure_orders(xi24, 2)
    assert orders.star == {"N": 24 ** 2 * 2, "S": 4 ** 2, "M": 6 ** 2 * 2}
    assert orders.consistent


def test_star_power_is_wreath_power(xi24):
    M_star = quotient_M(star_power(xi24, 2))
    wreath = wreath_power_module(quotient_module(xi24, 2), 2).induced_permutation_group()
    assert permutation_isomorphism(M_star, wreath) is not None


def test_diagonal_keeps_the_action(xi24):
    assert permutation_isomorphism(quotient_M(delta(xi24, 2)), quotient_M(xi24)) is not None


def test_coprime_normalizers(xi24):
    assert coprime_by_normalizer(xi24, S("{(1 2)}"))
    assert not coprime_by_normalizer(S("{(1 2)}"), S("{(1 2)}"))


@pytest.mark.parametrize("i, closed", [(1, True), (2, True), (3, False), (4, True), (5, False)])
def test_diagonal_powers_closed_at_powers_of_p(xi24, i, closed):
    assert is_closed(delta(xi24, i), 2) is closed


def test_closure_beyond_the_support_cap(xi24):
    X = delta(xi24, 4)
    assert X.degree > DEFAULT_CAPS.support_cap
    assert stab_S(X).order() == 4 ** 4 * 24
    assert closure(X, 2) == X
    assert is_exact(X, 2)


def closure_within_product(A, B, p):
    """Some S_{A*B}-conjugate of c(A*B) lies in c(A)*c(B)."""
    AB = star(A, B)
    target = star(closure(A, p), closure(B, p)).elements
    closed = closure(AB, p)
    return any(all(x.conjugate(s) in target for x in closed) for s in stab_S(AB).enumerate())


def random_subset(q, degree, rng):
    elements = sorted(fixed_point_free_class(q, range(1, degree + 1)))
    return SqSet(rng.sample(elements, rng.randint(1, min(3, len(elements)))), q)


@pytest.mark.parametrize("X1, X2, p", [
    ("{(1 2)(3 4)}", "{(1 2)}", 2),
    ("{(1 2)(3 4), (1 3)(2 4)}", "{(1 2)}", 2),
    ("{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }", "{(1 2)}", 2),
    ("{(1 2)}", "{(1 2)(3 4), (1 3)(2 4)}", 2),
    ("{(1 2 3)}", "{(1 2 3), (1 3 2)}", 3),
])
def test_closure_is_submultiplicative_on_exact_sets(X1, X2, p):
    A, B = S(X1), S(X2)
    assert is_exact(A, p) and is_exact(B, p)
    assert closure_within_product(A, B, p)


def test_closure_is_submultiplicative_on_random_exact_pairs():
    rng = random.Random(7)
    shapes = {2: [(2, 2), (2, 4), (4, 2), (4, 4)], 3: [(3, 3), (3, 6), (6, 3)]}
    checked = 0
    while checked < 50:
        q = rng.choice([2, 3])
        d1, d2 = rng.choice(shapes[q])
        A, B = random_subset(q, d1, rng), random_subset(q, d2, rng)
        if not (is_exact(A, q) and is_exact(B, q)):
            continue
        assert closure_within_product(A, B, q), (A, B)
        checked += 1


def full_class(q, degree):
    return SqSet(fixed_point_free_class(q, range(1, degree + 1)), q)


PROJECTIVE_PAIRS = [(p, q, a, b)
                    for p, q, degrees in [(3, 2, (2, 4, 6)), (5, 2, (2, 4, 6)),
                                          (2, 3, (3, 6)), (5, 3, (3, 6)), (7, 3, (3, 6))]
                    for a in degrees for b in degrees if a + b <= 9]


@pytest.mark.parametrize("p, q, a, b", PROJECTIVE_PAIRS)
def test_products_of_projective_closed_sets_are_not_closed(p, q, a, b):
    Y, Z = full_class(q, a), full_class(q, b)
    for X in (Y, Z):
        assert is_closed(X, p) and is_projective_set(X, p)
    assert not is_closed(star(Y, Z), p)


def test_enough_projective_pairs():
    assert len(PROJECTIVE_PAIRS) >= 20


@pytest.mark.parametrize("text, p", [
    ("{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }", 3),
    ("{(1 2 3), (1 3 2)}", 2),
])
def test_diagonal_p_power_of_projective_closed_set_is_not_closed(text, p):
    Y = S(text)
    assert is_irreducible(Y) and is_closed(Y, p) and is_projective_set(Y, p)
    assert not is_closed(delta(Y, p), p)


COPRIME_POOL = [
    "{(1 2)}",
    "{(1 2)(3 4)}",
    "{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }",
    "{(1 2)(3 4), (1 3)(2 4)}",
    "{ (1 2)(3 4)(5 6), (1 3)(2 4)(5 6), (1 4)(2 3)(5 6) }",
    "{(1 2 3)}",
    "{(1 2 3), (1 3 2)}",
    "{(1 2 3)(4 5 6)}",
]
COPRIME_PAIRS = [(a, b) for a, b in itertools.product(COPRIME_POOL, repeat=2)
                 if S(a).q == S(b).q and S(a).degree + S(b).degree <= {2: 8, 3: 9}[S(a).q]]


@pytest.mark.parametrize("a, b", COPRIME_PAIRS)
def test_coprime_matches_normalizer_criterion(a, b):
    X, Y = S(a), S(b)
    assert coprime(X, Y) == coprime_by_normalizer(X, Y)


@pytest.mark.parametrize("Y", [
    S("{(1 2)(3 4)(5 6)}"),
    star(S(XI), S("{(1 2)}")),
    star(S(XI), S("{(1 2)(3 4)}")),
    star(S(XI), S(XI)),
])
def test_normalizer_permutes_irreducible_factors(Y):
    factors = [f.elements for f in irreducible_factors(Y)]
    for g in normalizer_N(Y).generators:
        for f in factors:
            assert frozenset(x.conjugate(g) for x in f) in factors


def test_reduction_of_a_coprime_product(xi24):
    X = star(xi24, S("{(1 2)}"))
    assert is_fixed_point_set(X, 2).verdict == "yes"
    assert len(check_reduction(X, 2)) == 6


def test_reduction_of_a_power():
    assert check_reduction(S("{(1 2)(3 4)}"), 2) == [S("{(1 2)}")]


def test_reduction_skips_irreducible_sets(xi24):
    assert check_reduction(xi24, 2) == []


def test_reduction_flags_a_factor_that_is_not_a_fixed_point_set():
    X = star(S("{(1 2)(3 4), (1 3)(2 4)}"), S("{(1 2)}"))
    with pytest.raises(TheoremViolation):
        check_reduction(X, 2)


@pytest.mark.parametrize("other, p", [("{(1 2)}", 2), ("{(1 2)(3 4)}", 2), ("{(1 2)}", 3)])
def test_coprime_products_split_structure(xi24, other, p):
    Y = S(other)
    check_coprime_structure(xi24, Y, p)
    check_coprime_structure(Y, xi24, p)


def test_coprime_structure_needs_coprime_sets():
    with pytest.raises(InvalidSet):
        check_coprime_structure(S("{(1 2)}"), S("{(1 2)}"), 2)


def test_kappa_of_transposition():
    trajectory, value = kappa_trajectory(S("{(1 2)}"), 2)
    assert trajectory == [(1, 1), (2, 0)]
    assert value == 2


def test_kappa_of_full_class(xi24):
    trajectory, value = kappa_trajectory(xi24, 2)
    assert value == 2
    succeeded = [u for u, n in trajectory if n > 0]
    assert succeeded == list(range(1, len(succeeded) + 1))


def test_kappa_at_p_3_succeeds_below_p(xi24):
    trajectory, value = kappa_trajectory(S("{(1 2)}"), 3)
    assert trajectory == [(1, 1), (2, 1), (3, 0)]
    assert value == 3
    caps = DEFAULT_CAPS.with_overrides(kappa_max_u=2)
    trajectory, value = kappa_trajectory(xi24, 3, caps)
    assert [u for u, _ in trajectory] == [1, 2]
    assert all(n > 0 for _, n in trajectory)
    assert isinstance(value, BudgetExhausted)


def test_kappa_budget(xi24):
    caps = DEFAULT_CAPS.with_overrides(kappa_max_dim=5)
    result = kappa(xi24, 2, caps)
    assert isinstance(result, BudgetExhausted)
    assert result.u_max == 1
    assert str(result) == ">1 (dimension budget)"


@pytest.mark.parametrize("p, q, n, expected, total", [
    (2, 2, 2, ["{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }", "{(1 2)(3 4)}"], 2),
    (2, 2, 3, ["{(1 2)(3 4)(5 6)}", "{ (1 2)(3 4)(5 6), (1 3)(2 4)(5 6), (1 4)(2 3)(5 6) }"], 2),
    (3, 3, 1, ["{(1 2 3), (1 3 2)}"], 2),
])
def test_oracle(p, q, n, expected, total):
    result = broue_oracle(p, q, n)
    kept = [e.set for e in result.kept]
    assert len(kept) == len(expected)
    for text in expected:
        assert any(equivalent(S(text), X) for X in kept)
    assert all(e.sylow_in_S for e in result.kept)
    assert result.total_summands == total
    assert result.ledger_ok
    assert all(r.verdict == "yes" for r in result.reports)


def test_oracle_is_deterministic():
    assert broue_oracle(2, 2, 2).to_dict() == broue_oracle(2, 2, 2).to_dict()


def test_oracle_degree_cap():
    with pytest.raises(CapExceeded):
        broue_oracle(2, 2, 5)

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BATTERY, group
from tymod import oracles
from tymod.abelian import (
    FinAbGroup,
    Hom,
    PhaseExp,
    Subgroup,
    characters,
    enumerate_subgroups,
    quotient,
    snf,
    solve_hom,
)
from tymod.errors import BudgetExceeded

small_groups = st.lists(st.integers(2, 6), min_size=1, max_size=2).map(FinAbGroup)
phases = st.builds(PhaseExp, st.integers(-50, 50), st.integers(1, 24))


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


@pytest.mark.parametrize(
    "matrix, diag",
    [
        ([[2, 0], [0, 2]], [[2, 0], [0, 2]]),
        ([[1, 1], [0, 1]], [[1, 0], [0, 1]]),
        ([[2, 4], [4, 8]], [[2, 0], [0, 0]]),
    ],
)
def test_snf_examples(matrix, diag):
    U, D, V = snf(matrix)
    assert D == diag
    assert _matmul(_matmul(U, matrix), V) == D


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=2, max_size=3))
def test_snf_is_a_factorization_with_divisibility(matrix):
    U, D, V = snf(matrix)
    assert _matmul(_matmul(U, matrix), V) == D
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)


def test_phase_reduction_and_text():
    assert str(PhaseExp(-1, 4)) == "3/4"
    assert PhaseExp(5, 4) == PhaseExp(1, 4)
    assert PhaseExp.parse("-1/2") == Fraction(1, 2)
    assert not PhaseExp(3)


@given(phases, phases)
def test_phase_group_laws(p, q):
    assert (p + q) - q == p
    assert p + (-p) == 0
    assert 0 <= p.value < 1


@given(small_groups, st.data())
def test_character_values_are_killed_by_element_order(G, data):
    dual = characters(G)
    lam = data.draw(st.sampled_from(dual.group.elements()))
    a = data.draw(st.sampled_from(G.elements()))
    assert not dual.eval(lam, a) * G.element_order(a)


def test_character_examples():
    Z2, Z4 = FinAbGroup([2]), FinAbGroup([4])
    assert characters(Z2).eval((1,), (1,)) == Fraction(1, 2)
    assert characters(Z4).eval((1,), (3,)) == Fraction(3, 4)
    assert all(not characters(Z4).eval((0,), (a,)) for a in range(4))


@pytest.mark.parametrize("spec, count", [("Z2", 2), ("Z4", 3), ("Z2xZ2", 5), ("Z2xZ4", 8), ("Z3xZ3", 6)])
def test_subgroup_counts(spec, count):
    assert len(enumerate_subgroups(group(spec))) == count


@pytest.mark.parametrize("spec", BATTERY + ["Z4xZ4", "Z2xZ2xZ2", "Z2xZ8"])
def test_subgroups_match_closure_oracle(spec):
    G = group(spec)
    ours = {frozenset(H.elements) for H in enumerate_subgroups(G)}
    assert ours == set(oracles.subgroups(G))


def test_subgroup_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_subgroups(group("Z2xZ2xZ2"), budget=4)


def test_subgroup_bases_are_readable():
    Z4 = group("Z4")
    assert Subgroup.whole(Z4).basis == ((1,),)
    assert Subgroup.generated_by(Z4, [(2,)]).basis == ((2,),)
    assert Subgroup.whole(group("Z2xZ4")).basis == ((1, 0), (0, 1))


@given(small_groups, st.data())
def test_subgroup_embedding_is_injective_onto_elements(G, data):
    H = data.draw(st.sampled_from(enumerate_subgroups(G)))
    images = sorted(H.embed(x) for x in H.group.elements())
    assert tuple(images) == H.elements
    assert all(H.coords(H.embed(x)) == x for x in H.group.elements())


@pytest.mark.parametrize(
    "spec, gens, q_order",
    [("Z4", [(2,)], 2), ("Z2xZ2", [(1, 1)], 2), ("Z2xZ4", [], 8), ("Z3xZ3", [(1, 0), (0, 1)], 1)],
)
def test_quotient(spec, gens, q_order):
    G = group(spec)
    H = Subgroup.generated_by(G, gens)
    Q, proj = quotient(G, H)
    assert Q.order == q_order
    assert proj.kernel == H
    if not gens:
        assert proj.is_identity() or Q.orders == G.orders


def test_solve_hom_examples():
    Z2, Z4 = FinAbGroup([2]), FinAbGroup([4])
    assert solve_hom(Hom.identity(Z4), (3,))[0] == (3,)
    x, kernel = solve_hom(Hom(Z4, Z2, [[1]]), (1,))
    assert x == (1,)
    assert Subgroup.generated_by(Z4, kernel).elements == ((0,), (2,))
    assert solve_hom(Hom(Z2, Z4, [[2]]), (1,))[0] is None


@given(small_groups, small_groups, st.data())
def test_solve_hom_finds_least_preimage(src, tgt, data):
    # a random well-defined hom: column j must be killed by src.orders[j]
    cols = []
    for m in src.orders:
        options = [x for x in tgt.elements() if not any(tgt.scale(m, x))]
        cols.append(data.draw(st.sampled_from(options)))
    f = Hom.from_images(src, tgt, cols)
    t = f(data.draw(st.sampled_from(src.elements())))
    x, _ = solve_hom(f, t)
    assert f(x) == t
    assert x == min(y for y in src.elements() if f(y) == t)

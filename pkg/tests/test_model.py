import pytest
from hypothesis import given
from hypothesis import strategies as st

from rulestates import clause, mkstate
from x3hd.model import (
    Formula,
    are_neighbours,
    are_similar,
    check_state,
    clause_satisfied,
    dissimilar_classes,
    from_dimacs,
    initial_state,
    to_dimacs,
)
from x3hd.poly import ONE, U

EXAMPLE = Formula.from_dimacs([[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, -6]], 7)


def test_literal_encoding_roundtrip():
    for k in (1, -1, 5, -9):
        assert to_dimacs(from_dimacs(k)) == k
    assert from_dimacs(3) ^ 1 == from_dimacs(-3)
    assert 1 ^ 1 == 0  # negating the true constant gives the false one


def test_clause_satisfied_exactly_one():
    cl = clause(1, 2, -3)
    assert clause_satisfied(cl, {1: 1, 2: 0, 3: 1})
    assert not clause_satisfied(cl, {1: 1, 2: 1, 3: 1})
    assert not clause_satisfied(cl, {1: 0, 2: 0, 3: 1})
    assert clause_satisfied(clause("T", 1), {1: 0})


@pytest.mark.parametrize(
    "c1, c2, expected",
    [
        (clause(1, 2), clause(1, -2), True),
        (clause("T", 1, 2), clause("F", -1, 2), True),
        (clause(1, 3), clause(1, 2), False),
        (clause(1, -1, 3), clause(1, 3, -3), False),
        (clause(1, 2, 3), clause(3, 2, 1), True),
    ],
)
def test_are_similar(c1, c2, expected):
    assert are_similar(c1, c2) is expected


def test_are_neighbours():
    assert are_neighbours(clause(1, 2, 3), clause(-1, 4, 5))
    assert not are_neighbours(clause(1, 2, 3), clause(4, 5, 6))
    c = clause(1, 2, 3)
    assert are_neighbours(c, c)


def test_dissimilar_classes():
    f = Formula.from_dimacs([[1, 2, 3], [-1, 2, 3]], 3)
    assert dissimilar_classes(f) == [[0, 1]]
    g = Formula.from_dimacs([[1, 2, 3], [1, 4, 5]], 5)
    assert dissimilar_classes(g) == [[0], [1]]
    assert dissimilar_classes(Formula((), 0)) == []


def test_classmates_share_all_variables():
    import random

    from x3hd.model import clause_vars

    rng = random.Random(0)
    clauses = []
    for _ in range(30):
        vs = rng.sample(range(1, 6), 3)
        clauses.append(tuple(2 * v + rng.randrange(2) for v in vs))
    f = Formula(tuple(clauses), 5)
    for members in dissimilar_classes(f):
        variable_sets = {frozenset(clause_vars(f.clauses[i])) for i in members}
        assert len(variable_sets) == 1
        for i in members:
            for j in members:
                assert are_neighbours(f.clauses[i], f.clauses[j])


similar_vars = st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3)


@given(similar_vars, st.data())
def test_similarity_is_an_equivalence(variables, data):
    def draw_clause():
        return tuple(
            2 * v + data.draw(st.integers(min_value=0, max_value=1)) for v in variables
        )

    a, b, c = draw_clause(), draw_clause(), draw_clause()
    assert are_similar(a, a)
    assert are_similar(a, b) == are_similar(b, a)
    if are_similar(a, b) and are_similar(b, c):
        assert are_similar(a, c)


def test_initial_state_worked_example():
    st0 = initial_state(EXAMPLE)
    assert len(st0.V) == 7
    assert st0.p_main == ONE
    assert st0.phi1 == st0.phi2 == EXAMPLE.clauses
    assert st0.weights[3] == (ONE, U, U, ONE)
    check_state(st0)


def test_initial_state_empty_formulas():
    assert initial_state(Formula((), 0)).V == frozenset()
    st0 = initial_state(Formula((), 2))
    assert st0.V == frozenset({1, 2})
    assert st0.phi1 == ()


def test_formula_validation():
    with pytest.raises(ValueError):
        Formula.from_dimacs([[1, 2, 3, 4]], 4)
    with pytest.raises(ValueError):
        Formula.from_dimacs([[]], 1)
    with pytest.raises(ValueError):
        Formula.from_dimacs([[5]], 3)
    # duplicate variables inside a clause are legal input
    Formula.from_dimacs([[1, 1, 2], [-1, 1, 2]], 2)


def test_check_state_catches_misalignment():
    from x3hd.errors import InternalError

    good = mkstate([clause(1, 2, 3)])
    check_state(good)
    bad = mkstate([clause(1, 2, 3)], [clause(1, 2, -3)])
    check_state(bad)  # same variables, different sign: fine
    with pytest.raises(InternalError):
        check_state(mkstate([clause(1, 2, 3)], [clause(1, 2)]))
    with pytest.raises(InternalError):
        check_state(mkstate([clause(1, 2, 3)], [clause(1, 2, 4)]))

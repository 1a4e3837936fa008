import pytest
from hypothesis import given
from hypothesis import strategies as st

from x3hd.poly import ONE, U, ZERO, HDPoly


def poly_from(items):
    return HDPoly(dict(items))


polys = st.dictionaries(
    st.integers(min_value=0, max_value=64),
    st.integers(min_value=0, max_value=10**6),
    max_size=8,
).map(HDPoly)


def test_constants():
    assert ONE.terms() == {0: 1}
    assert U.terms() == {1: 1}
    assert ZERO.terms() == {}
    assert ZERO.is_zero() and not ONE.is_zero()


def test_add_examples():
    assert poly_from({0: 4}) + poly_from({4: 12}) == poly_from({0: 4, 4: 12})
    p = poly_from({2: 5, 0: 1})
    assert p + ZERO == p
    assert poly_from({1: 2}) + poly_from({1: 3}) == poly_from({1: 5})


def test_mul_examples():
    assert U * U == poly_from({2: 1})
    two_u_plus_two = poly_from({1: 2, 0: 2})
    assert two_u_plus_two * two_u_plus_two == poly_from({2: 4, 1: 8, 0: 4})
    assert poly_from({3: 7}) * ZERO == ZERO


def test_degree():
    assert poly_from({0: 4, 4: 12}).degree() == 4
    assert ONE.degree() == 0
    assert ZERO.degree() is None


def test_rejects_negative():
    with pytest.raises(ValueError):
        HDPoly({2: -1})
    with pytest.raises(ValueError):
        HDPoly({-1: 2})


def test_zero_coefficients_dropped():
    assert HDPoly({3: 0, 1: 2}) == poly_from({1: 2})


def test_rendering():
    assert str(poly_from({4: 12, 0: 4})) == "12*u^4 + 4"
    assert str(poly_from({1: 2, 0: 2})) == "2*u + 2"
    assert str(poly_from({3: 1})) == "u^3"
    assert str(ZERO) == "0"


def test_json_pairs_ascending_with_string_counts():
    p = poly_from({4: 12, 0: 4})
    assert p.to_pairs() == [[0, "4"], [4, "12"]]
    assert p.to_pairs()[1][1] == "12"


def test_huge_coefficients_stay_exact():
    big = 10**200 + 7
    p = HDPoly({0: big})
    q = p * p
    assert q.coeff(0) == big * big
    assert len(str(q.coeff(0))) >= 400


@given(polys, polys)
def test_add_commutes(a, b):
    assert a + b == b + a


@given(polys, polys)
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(polys, polys, polys)
def test_associativity_and_distributivity(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(polys, polys)
def test_degree_of_product_adds(a, b):
    if a.is_zero() or b.is_zero():
        assert (a * b).is_zero()
    else:
        assert (a * b).degree() == a.degree() + b.degree()


@given(st.lists(polys, max_size=5))
def test_sum_builtin_works(ps):
    total = sum(ps, ZERO)
    expected = ZERO
    for p in ps:
        expected = expected + p
    assert total == expected

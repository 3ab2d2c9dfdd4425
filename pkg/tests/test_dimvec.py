import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmestates.dimvec import DimVec, capital_r, count_rationals, expected_dim, g_max, parse_dims
from lmestates.errors import DomainError


def brute_rationals(ks):
    """Distinct rationals in (0, 1] whose reduced denominator divides some k."""
    return len({Fraction(j, k) for k in ks for j in range(1, k + 1)})


@given(st.lists(st.integers(1, 40), min_size=1, max_size=5))
@settings(max_examples=300, deadline=None)
def test_count_rationals_matches_enumeration(ks):
    assert count_rationals(ks) == brute_rationals(ks)


@given(st.lists(st.integers(1, 30), min_size=1, max_size=4), st.integers(1, 30))
@settings(max_examples=100, deadline=None)
def test_count_rationals_ignores_duplicates(ks, extra):
    assert count_rationals(ks + [extra, extra]) == count_rationals(ks + [extra])


def test_count_rationals_small_values():
    assert count_rationals([1]) == 1
    assert count_rationals([4]) == 4
    assert count_rationals([4, 6]) == 4 + 6 - 2
    assert count_rationals([4, 4, 4]) == 4


@pytest.mark.parametrize("bad", [[], [0], [3, -1]])
def test_count_rationals_rejects(bad):
    with pytest.raises(DomainError):
        count_rationals(bad)


def test_capital_r_examples():
    # 2x2x2: 8 - N(4,4,4) = 8 - 4
    assert capital_r((2, 2, 2)) == 4
    # a lone qubit pair 2x3 has no LME state
    assert capital_r((2, 3)) < 0
    assert capital_r((3, 3)) == 9 - 9
    assert capital_r((2, 2, 2, 7)) >= 0


@given(st.lists(st.integers(1, 12), min_size=1, max_size=5))
@settings(max_examples=200, deadline=None)
def test_invariants_ignore_order_and_ones(dims):
    shuffled = list(reversed(dims)) + [1, 1]
    assert capital_r(dims) == capital_r(shuffled)
    assert expected_dim(dims) == expected_dim(shuffled)


def test_expected_dim_formula():
    for d in [(2, 2, 2), (3, 3, 3), (2, 3, 6), (2, 2, 2, 2)]:
        assert expected_dim(d) == math.prod(d) - 1 - sum(x * x - 1 for x in d)
    assert expected_dim((2, 2, 2)) == -2
    assert expected_dim((2, 2, 2, 2)) == 3


def test_g_max():
    assert g_max((4, 6, 9)) == 3
    assert g_max((2, 6, 6)) == 6
    with pytest.raises(DomainError):
        g_max((5,))


def test_dimvec_sorted_and_parsed():
    d = DimVec.parse("6x2x3")
    assert d.dims == (2, 3, 6)
    assert str(d) == "2x3x6"
    assert d.total == 36
    assert DimVec((1, 2, 1, 3)).stripped() == (2, 3)
    assert parse_dims("2, 3,4") == (2, 3, 4)


@pytest.mark.parametrize("text", ["", "2xax3", "2x0", "x"])
def test_parse_dims_rejects(text):
    with pytest.raises(DomainError):
        parse_dims(text)


def test_dimvec_rejects_nonpositive():
    with pytest.raises(DomainError):
        DimVec((2, 0))
    with pytest.raises(DomainError):
        DimVec(())

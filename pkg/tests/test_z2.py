from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from supergeom.z2 import ONE, ZERO, Z2Value, z2_mul, z2_scale, z2_sum

ints = st.integers(-50, 50)
z2 = st.builds(Z2Value, ints, ints)


@pytest.mark.parametrize("a, b, expected", [
    ((1, 0), (7, -3), (7, -3)),
    ((0, 1), (0, 1), (1, 0)),
    ((2, 1), (1, 3), (5, 7)),
])
def test_mul_table(a, b, expected):
    assert z2_mul(Z2Value(*a), Z2Value(*b)) == Z2Value(*expected)


@pytest.mark.parametrize("k, a, expected", [(0, (4, 5), (0, 0)), (2, (1, 1), (2, 2)), (3, (2, 1), (6, 3))])
def test_scale(k, a, expected):
    assert z2_scale(k, Z2Value(*a)) == Z2Value(*expected)
    assert z2_scale(k, Z2Value(*a)) == z2_mul(Z2Value(k, 0), Z2Value(*a))


def test_json_and_repr():
    v = Z2Value(3, -2)
    assert Z2Value.from_json(v.to_json()) == v
    assert repr(v) == "(3,-2)"
    assert not ZERO and ONE
    assert z2_sum([Z2Value(1, 2), Z2Value(3, 4)]) == Z2Value(4, 6)


@given(z2, z2, z2)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a * ONE == a
    assert a + ZERO == a and a - a == ZERO


@given(z2, z2)
def test_sdim_is_a_ring_homomorphism(a, b):
    assert (a * b).sdim() == a.sdim() * b.sdim()
    assert (a + b).sdim() == a.sdim() + b.sdim()


@given(z2)
def test_swap_is_multiplication_by_odd_unit(a):
    assert a.swap() == a * Z2Value(0, 1)
    assert a.swap().swap() == a

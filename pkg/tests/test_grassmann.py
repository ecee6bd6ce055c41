from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from supergeom.acceptance import random_even_supermatrix, random_grassmann
from supergeom.errors import GeneratorCapExceeded, NonInvertibleBlock
from supergeom.grassmann import GrassmannScalar, SuperMatrix, berezinian, det, grassmann_det

seeds = st.integers(0, 10**6)


def eps(i, k=2):
    return GrassmannScalar.generator(i, k)


def test_generators_anticommute_and_square_to_zero():
    e1, e2 = eps(1), eps(2)
    assert e1 * e2 == -(e2 * e1)
    assert (e1 * e1).is_zero()


def test_even_inverse():
    x = GrassmannScalar.scalar(2, 2) + eps(1) * eps(2)
    assert x * x.inverse() == GrassmannScalar.scalar(1, 2)
    with pytest.raises(NonInvertibleBlock):
        (eps(1) * eps(2)).inverse()


def test_generator_cap(monkeypatch):
    monkeypatch.setenv("SUPERGEOM_MAX_GENERATORS", "3")
    with pytest.raises(GeneratorCapExceeded):
        GrassmannScalar.scalar(1, 4)


def test_identity_berezinian():
    assert berezinian(SuperMatrix.identity(2, 3, 1)) == GrassmannScalar.scalar(1, 1)


def test_block_diagonal_berezinian():
    M = SuperMatrix.from_blocks([[2, 1], [1, 1]], [[0], [0]], [[0, 0]], [[3]], 0)
    assert berezinian(M) == GrassmannScalar.scalar(Fraction(1, 3), 0)


def test_rank_one_one_example():
    M = SuperMatrix.from_blocks([[1]], [[eps(1)]], [[eps(2)]], [[1]], 2)
    assert berezinian(M) == GrassmannScalar.scalar(1, 2) - eps(1) * eps(2)


def test_block_product_example():
    one = GrassmannScalar.scalar(1, 2)
    U = SuperMatrix.from_blocks([[1]], [[eps(1)]], [[0]], [[1]], 2)
    L = SuperMatrix.from_blocks([[1]], [[0]], [[eps(2)]], [[1]], 2)
    assert U @ L == SuperMatrix.from_blocks([[one + eps(1) * eps(2)]], [[eps(1)]], [[eps(2)]], [[1]], 2)
    assert U @ SuperMatrix.identity(1, 1, 2) == U


def test_singular_d_block():
    M = SuperMatrix.from_blocks([[1]], [[0]], [[0]], [[0]], 0)
    with pytest.raises(NonInvertibleBlock):
        berezinian(M)


def test_json_round_trip():
    M = SuperMatrix.from_blocks([[1]], [[eps(1)]], [[eps(2)]], [[2]], 2)
    assert SuperMatrix.from_json(M.to_json()) == M


@given(seeds)
def test_associative_and_supercommutative(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 4)
    a, b, c = (random_grassmann(rng, k, rng.randint(0, 1)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    pa, pb = a.parity(), b.parity()
    if pa is not None and pb is not None:
        assert a * b == (-1) ** (pa * pb) * (b * a)


@given(seeds)
def test_berezinian_multiplicative(seed):
    rng = random.Random(seed)
    p, q, k = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 3)
    if p + q == 0:
        q = 1
    M, N = random_even_supermatrix(rng, p, q, k), random_even_supermatrix(rng, p, q, k)
    assert berezinian(M @ N) == berezinian(M) * berezinian(N)


@given(seeds)
def test_berezinian_is_det_without_odd_rank(seed):
    rng = random.Random(seed)
    p, k = rng.randint(1, 3), rng.randint(0, 2)
    M = random_even_supermatrix(rng, p, 0, k)
    zero, one = GrassmannScalar.scalar(0, k), GrassmannScalar.scalar(1, k)
    assert berezinian(M) == det(M.block("A"), zero, one) == grassmann_det(M.block("A"), k)

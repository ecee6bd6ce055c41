from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, strategies as st

from supergeom.acceptance import random_function
from supergeom.curves import (CoverData, Point, RationalEvenFunction, SuperCurveModel, SuperLattice,
                              distance_vs_berezinian, lattice_distance)
from supergeom.cycles import SuperCycle
from supergeom.errors import NotEven, NotFlat, UnknownPoint, ZeroFunction
from supergeom.z2 import Z2Value

P1 = SuperCurveModel.build("P1")
seeds = st.integers(0, 10**6)


def test_points():
    assert Point.parse("t").name == "t"
    assert Point.parse("inf").is_inf
    assert Point.parse("t**2 + 1").degree == 2
    with pytest.raises(UnknownPoint):
        Point.parse("t**2 - 1")
    with pytest.raises(UnknownPoint):
        Point.parse("2*t")


def test_ord_examples():
    A1 = SuperCurveModel.build("A1")
    assert A1.ord_at("t", "t**2") == Z2Value(2, 2)
    for p in ("t", "t - 1", "t**2 + 1"):
        assert A1.ord_at(p, "1") == Z2Value(0, 0)
    tors = SuperCurveModel.build("A1", torsion=[["t", 1]])
    assert tors.ord_at("t", "t") == Z2Value(1, 2)


def test_div_examples():
    assert P1.div("t").same_as(SuperCycle(0, [("t", Z2Value(1, 1)), ("inf", Z2Value(-1, -1))]))
    assert not P1.div("7")
    expected = SuperCycle(0, [("t", Z2Value(2, 2)), ("t - 1", Z2Value(-1, -1)), ("inf", Z2Value(-1, -1))])
    assert P1.div("t**2/(t - 1)").same_as(expected)
    with pytest.raises(ZeroFunction):
        P1.div("0")


def test_superfield_with_odd_part_rejected():
    with pytest.raises(NotEven):
        RationalEvenFunction.parse({"num": "t", "den": "1", "odd": "1"})


def test_twisted_model_json_round_trip():
    m = SuperCurveModel.build("P1", twist=[["t", 2]], torsion=[["t - 1", 1]])
    assert SuperCurveModel.from_json(m.to_json()) == m


def test_lattice_distance_examples():
    M = SuperLattice.build("t", [["1"]], [["1"]])
    assert lattice_distance(M, M) == Z2Value(0, 0)
    assert lattice_distance(M, SuperLattice.build("t", [["t**2"]], [["1"]])) == Z2Value(2, 0)
    assert lattice_distance(M, SuperLattice.build("t", [["1"]], [["t"]])) == Z2Value(0, 1)


def test_distance_vs_berezinian_odd_block_probe():
    r = distance_vs_berezinian(SuperLattice.build("t", [["1"]], [["1"]]), [["1"]], [["t"]])
    assert r["distance"] == Z2Value(0, 1) and r["ord_ber"] == Z2Value(-1, 0)
    assert not r["full_equal"] and r["sdim_equal"]


def test_ber_of_multiplication_examples():
    cov = CoverData.double_cover()
    assert cov.ber_of_multiplication("1") == RationalEvenFunction(1, 1, "t")
    assert cov.ber_of_multiplication("s") == RationalEvenFunction("-t", 1, "t")
    assert cov.ber_of_multiplication("s - 1") == RationalEvenFunction("1 - t", 1, "t")


def test_double_cover_not_flat_at_branch_points():
    cov = CoverData.double_cover()
    with pytest.raises(NotFlat):
        cov.fiber("t")
    with pytest.raises(NotFlat):
        cov.fiber("inf")
    assert sorted(P.name for P, _ in cov.fiber("t - 1")) == ["s + 1", "s - 1"]
    assert [(P.name, a) for P, a in cov.fiber("t + 1")] == [("s**2 + 1", 1)]


@given(seeds)
def test_ord_additive_on_torsion_free_models(seed):
    rng = random.Random(seed)
    m = SuperCurveModel.build("P1", twist=[["t", rng.randint(-2, 2)], ["t**2 + 1", rng.randint(-2, 2)]])
    g, h = random_function(rng), random_function(rng)
    for p in {*m.support_points(g), *m.support_points(h), m.point("t - 3")}:
        assert m.ord_at(p, g * h) == m.ord_at(p, g) + m.ord_at(p, h)


@given(seeds)
def test_principal_divisors_have_degree_zero(seed):
    rng = random.Random(seed)
    g = random_function(rng)
    assert P1.degree(P1.div(g)) == Z2Value(0, 0)


@given(seeds)
def test_norm_is_multiplicative(seed):
    rng = random.Random(seed)
    cov = CoverData.build("s**3 - s", "1")
    g, h = random_function(rng, "s"), random_function(rng, "s")
    assert cov.ber_of_multiplication(g * h) == cov.ber_of_multiplication(g) * cov.ber_of_multiplication(h)


@given(st.integers(-4, 4), st.integers(1, 3))
def test_sdim_of_ord_is_zero_on_free_rank_one(a, n):
    # ord = (v, v) for a free odd line, so its m - n projection vanishes
    g = sympy.sympify(f"(t - {a})**{n}")
    assert P1.ord_at(f"t - {a}" if a >= 0 else f"t + {-a}", str(g)).sdim() == 0

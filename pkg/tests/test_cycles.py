from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from supergeom.acceptance import FLAT_POINTS, random_function
from supergeom.artin import FiniteSuperAlgebra
from supergeom.curves import CoverData, Point, SuperCurveModel, compose_covers
from supergeom.cycles import (FiberComponent, FlatPullbackData, ProperMapData, SuperCycle, divisor_cycle,
                              flat_pullback, identity_map, product_with_odd_point, pushforward,
                              verify_rational_equivalence)
from supergeom.errors import DomainError, MissingMapData, MissingPullbackData
from supergeom.z2 import Z2Value

seeds = st.integers(0, 10**6)
coeff = st.builds(Z2Value, st.integers(-5, 5), st.integers(-5, 5))
names = st.sampled_from(["Z1", "Z2", "Z3", "Z4"])
cycles = st.lists(st.tuples(names, coeff), max_size=5).map(lambda ts: SuperCycle(1, ts))


def test_cycle_arithmetic_and_json():
    a = SuperCycle(1, [("C", Z2Value(1, 1)), ("C", Z2Value(1, 0)), ("D", Z2Value(0, 0))])
    assert a.support() == ["C"] and a.coeff("C") == Z2Value(2, 1)
    assert (a - a).same_as(SuperCycle.zero(1))
    assert SuperCycle.from_json(a.to_json()).same_as(a)


def test_pushforward_examples():
    a = SuperCycle(1, [("Z", Z2Value(1, 1))])
    assert not pushforward(a, ProperMapData({"Z": ("pt", 0)}))
    assert pushforward(a, ProperMapData({"Z": ("W", 2)})).same_as(SuperCycle(1, [("W", Z2Value(2, 2))]))
    assert pushforward(a, identity_map(["Z"])).same_as(a)
    with pytest.raises(MissingMapData):
        ProperMapData({"Z": ("W", 1)}).then(ProperMapData({}))


def test_pullback_examples():
    pt = SuperCycle(0, [("pt", Z2Value(1, 0))])
    line = FlatPullbackData(1, {"pt": (FiberComponent("line", shortcut=Z2Value(1, 1)),)})
    assert flat_pullback(pt, line).same_as(SuperCycle(1, [("line", Z2Value(1, 1))]))
    reduced = FlatPullbackData(0, {"pt": (FiberComponent("q", algebra=FiniteSuperAlgebra.field()),)})
    assert flat_pullback(pt, reduced).coeff("q") == Z2Value(1, 0)
    double = FlatPullbackData(0, {"pt": (FiberComponent("q", algebra=FiniteSuperAlgebra.truncated_polynomial(2)),)})
    assert flat_pullback(pt, double).coeff("q") == Z2Value(2, 0)
    with pytest.raises(MissingPullbackData):
        flat_pullback(SuperCycle(0, [("other", Z2Value(1, 0))]), double)
    assert FlatPullbackData.from_json(double.to_json()).components["pt"][0].multiplicity() == Z2Value(2, 0)


def test_rational_equivalence_examples():
    P1 = SuperCurveModel.build("P1")
    assert verify_rational_equivalence(SuperCycle.zero(0), [])
    alpha = SuperCycle(0, [("t", Z2Value(1, 1)), ("inf", Z2Value(-1, -1))])
    assert verify_rational_equivalence(alpha, [(None, P1, "t")])
    assert not verify_rational_equivalence(SuperCycle(0, [("t", Z2Value(1, 0))]), [(None, P1, "t")])
    assert not divisor_cycle(None, P1, "5")
    even = SuperCurveModel.build("P1", odd_rank=0)
    emb = {"t": "P0", "inf": "Pinf"}
    assert divisor_cycle(emb, even, "t").same_as(SuperCycle(0, [("P0", Z2Value(1, 0)), ("Pinf", Z2Value(-1, 0))]))
    with pytest.raises(DomainError):
        verify_rational_equivalence(alpha, [(None, SuperCurveModel.build("P1", odd_rank=2), "t")])


@given(cycles, cycles, coeff)
def test_pushforward_is_linear(a, b, c):
    f = ProperMapData({"Z1": ("W", 2), "Z2": ("W", 1), "Z3": ("V", 0), "Z4": ("V", 3)})
    assert pushforward(a + b, f).same_as(pushforward(a, f) + pushforward(b, f))
    assert pushforward(a.scale(c), f).same_as(pushforward(a, f).scale(c))


@given(cycles)
def test_base_change_square_for_odd_point(a):
    # pushforward then pull back along Y x pt -> Y equals pull back then push the product map
    f = ProperMapData({"Z1": ("W", 2), "Z2": ("W", 1), "Z3": ("V", 0), "Z4": ("V", 3)})
    g_y = product_with_odd_point(["W", "V"])
    g_x = product_with_odd_point(["Z1", "Z2", "Z3", "Z4"])
    f_prod = ProperMapData({f"{n} xQ<z>": (f"{img} xQ<z>", d) for n, (img, d) in f.images.items()})
    assert flat_pullback(pushforward(a, f), g_y).same_as(pushforward(flat_pullback(a, g_x), f_prod))


@given(cycles)
def test_open_immersion_square(a):
    # restriction to an open U commutes with proper pushforward when U is the full preimage
    f = ProperMapData({"Z1": ("W", 2), "Z2": ("W", 1), "Z3": ("V", 0), "Z4": ("V", 3)})
    keep_y = {"W"}
    keep_x = {n for n, (img, _) in f.images.items() if img in keep_y}
    restrict_y = FlatPullbackData(0, {n: ((FiberComponent(n, shortcut=Z2Value(1, 0)),) if n in keep_y else ())
                                      for n in ("W", "V")})
    restrict_x = FlatPullbackData(0, {n: ((FiberComponent(n, shortcut=Z2Value(1, 0)),) if n in keep_x else ())
                                      for n in f.images})
    f_u = ProperMapData({n: f.images[n] for n in keep_x})
    assert flat_pullback(pushforward(a, f), restrict_y).same_as(pushforward(flat_pullback(a, restrict_x), f_u))


@given(seeds)
def test_projection_formula_double_cover(seed):
    rng = random.Random(seed)
    cov = CoverData.double_cover()
    pull = cov.pullback_data(FLAT_POINTS)
    push = cov.proper_map_data([c.name for comps in pull.components.values() for c in comps])
    alpha = SuperCycle(0, [(Point.parse(rng.choice(FLAT_POINTS)).name, Z2Value(rng.randint(-3, 3), rng.randint(-3, 3)))
                           for _ in range(rng.randint(0, 4))])
    assert pushforward(flat_pullback(alpha, pull), push).same_as(alpha.scale(Z2Value(2, 0)))


@given(seeds)
def test_pushforward_functorial_for_composed_covers(seed):
    rng = random.Random(seed)
    f = CoverData.double_cover()
    h = CoverData.build("t**2 + t", "1", "t", "u")
    hf = compose_covers(f, h)
    src = f.source_model()
    div_g = src.div(random_function(rng, "s", 2, 3))
    step1 = f.proper_map_data(div_g.support())
    step2 = h.proper_map_data({img for img, _ in step1.images.values()})
    direct = pushforward(div_g, hf.proper_map_data(div_g.support()))
    assert pushforward(pushforward(div_g, step1), step2).same_as(direct)
    assert pushforward(div_g, step1.then(step2)).same_as(direct)


@given(seeds)
def test_pushforward_of_divisor_is_divisor_of_norm(seed):
    rng = random.Random(seed)
    cov = CoverData.build("s**3 + s", "1")
    g = random_function(rng, "s", 2, 3)
    d = cov.source_model().div(g)
    lhs = pushforward(d, cov.proper_map_data(d.support()))
    assert lhs.same_as(cov.target_model().div(cov.ber_of_multiplication(g)))

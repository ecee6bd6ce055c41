from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from supergeom.artin import (AlgebraMap, FiniteSuperAlgebra, GradedModule, base_change_module, fiber_module,
                             orthogonal_idempotents, semilocal_length, super_length)
from supergeom.errors import NotAnAlgebra, NotLocal
from supergeom.linalg import Echelon
from supergeom.z2 import Z2Value

alg = FiniteSuperAlgebra

LOCAL = [alg.field(), alg.grassmann(1), alg.grassmann(2), alg.truncated_polynomial(2), alg.truncated_polynomial(3),
         alg.truncated_polynomial(2, "y").tensor(alg.grassmann(1))]


def span_dim(vectors):
    return Echelon(vectors).dim


def test_radicals():
    assert alg.field().radical() == []
    th = alg.grassmann(1)
    assert span_dim(th.radical()) == 1 and Echelon(th.radical()).contains({1: 1})
    x2 = alg.truncated_polynomial(2)
    assert span_dim(x2.radical()) == 1 and Echelon(x2.radical()).contains({1: 1})


def test_length_examples():
    Q = alg.field()
    M = GradedModule.residue(Q).direct_sum(GradedModule.residue(Q, parity=1))
    assert super_length(Q, M) == Z2Value(1, 1)
    A = alg.grassmann(1)
    assert super_length(A, GradedModule.regular(A)) == Z2Value(1, 1)
    B = alg.truncated_polynomial(2)
    assert super_length(B, GradedModule.regular(B)) == Z2Value(2, 0)


def test_base_change_examples():
    A = alg.truncated_polynomial(2)
    f, B = AlgebraMap.into_tensor(A, alg.grassmann(1))
    assert super_length(B, base_change_module(GradedModule.regular(A), f)) == Z2Value(2, 2)
    assert super_length(B, fiber_module(f)) == Z2Value(1, 1)

    ident = AlgebraMap.identity(A)
    M = GradedModule.regular(A)
    assert base_change_module(M, ident).superdim() == M.superdim()

    Q = alg.field()
    g, T = AlgebraMap.into_tensor(Q, alg.grassmann(1))
    assert base_change_module(GradedModule.regular(Q), g).superdim() == GradedModule.regular(T).superdim()


def test_bad_algebra_rejected():
    data = alg.grassmann(1).to_json()
    data["mult"] = [m for m in data["mult"] if m[0] != "1" or m[1] != "th1"]
    with pytest.raises(NotAnAlgebra):
        alg.from_json(data)


def test_non_local_needs_semilocal():
    A = alg.field().product(alg.grassmann(1))
    M = GradedModule.regular(A)
    with pytest.raises(NotLocal):
        super_length(A, M)
    assert len(orthogonal_idempotents(A)) == 2
    assert semilocal_length(A, M) == Z2Value(2, 1)


def test_semilocal_three_factors():
    A = alg.truncated_polynomial(2).product(alg.grassmann(1))
    assert semilocal_length(A, GradedModule.regular(A)) == Z2Value(3, 1)


def test_json_round_trip():
    A = alg.truncated_polynomial(2).tensor(alg.grassmann(1))
    B = alg.from_json(A.to_json())
    assert B.names == A.names and B.parities == A.parities
    M = GradedModule.regular(A).parity_shift()
    N = GradedModule.from_json(B, M.to_json())
    assert super_length(B, N) == super_length(A, M)


local_alg = st.sampled_from(LOCAL)


@given(local_alg)
def test_length_of_regular_module_counts_graded_dimension(A):
    # every composition factor of a local algebra with residue field Q is 1-dimensional
    assert super_length(A, GradedModule.regular(A)) == GradedModule.regular(A).superdim()


@given(local_alg, st.integers(0, 2), st.integers(0, 2))
def test_length_additive_and_parity_shift(A, a, b):
    R, res = GradedModule.regular(A), GradedModule.residue(A)
    M = R.parity_shift() if a else R
    N = res.parity_shift() if b else res
    assert super_length(A, M.direct_sum(N)) == super_length(A, M) + super_length(A, N)
    assert super_length(A, M.parity_shift()) == super_length(A, M).swap()


@given(local_alg, local_alg)
def test_tensor_base_change_multiplicative(A, C):
    if A.dim * C.dim > 8:
        return
    f, B = AlgebraMap.into_tensor(A, C)
    fib = super_length(B, fiber_module(f))
    for M in (GradedModule.regular(A), GradedModule.residue(A, 1)):
        assert super_length(B, base_change_module(M, f)) == super_length(A, M) * fib

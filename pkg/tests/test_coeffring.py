from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homspace.coeffring import (GF, QQ, ZZ, EchelonBasis, ExactMatrix, ZZloc, abelian_invariants,
                                parse_ring, rank, rank_and_kernel, smith_normal_form)


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)))


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_smith_normal_form_properties(data):
    m = ExactMatrix.from_dense(ZZ, data)
    inv, U, D, V = smith_normal_form(m)
    assert matmul(matmul(U, data), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    assert all(d > 0 for d in inv)
    assert all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
    assert [D[i][i] for i in range(len(inv))] == list(inv)
    assert len(inv) == rank(ExactMatrix.from_dense(QQ, data))


def test_smith_normal_form_known():
    inv = smith_normal_form(ExactMatrix.from_dense(ZZ, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))[0]
    assert list(inv) == [2, 6, 12]


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_kernel_vectors_are_killed(data):
    m = ExactMatrix.from_dense(QQ, data)
    r, ker = rank_and_kernel(m)
    assert r + len(ker) == m.cols
    for v in ker:
        assert not m.apply(v)


def test_field_arithmetic():
    F5 = GF(5)
    assert F5(Fraction(1, 2)) == 3
    assert F5(-1) == 4
    with pytest.raises(ValueError):
        F5(Fraction(1, 5))
    with pytest.raises(ValueError):
        GF(6)
    assert ZZloc(2)(Fraction(3, 4)) == Fraction(3, 4)
    with pytest.raises(ValueError):
        ZZloc(2)(Fraction(1, 3))
    with pytest.raises(ValueError):
        ZZ(Fraction(1, 2))


def test_two_is_unit():
    assert QQ.two_is_unit and GF(3).two_is_unit and ZZloc(6).two_is_unit
    assert not ZZ.two_is_unit and not GF(2).two_is_unit and not ZZloc(3).two_is_unit


def test_parse_ring():
    assert parse_ring("Q") == QQ
    assert parse_ring("F2") == GF(2)
    assert parse_ring("Fp:7") == GF(7)
    assert parse_ring("Z-inv2") == ZZloc(2)
    assert parse_ring("Z[1/6]") == ZZloc(6)
    assert parse_ring("Z[1/6]").name == "Z[1/6]"
    with pytest.raises(ValueError):
        parse_ring("R")


def test_abelian_invariants_localization_drops_unit_primes():
    # Z --6--> Z: the cokernel Z/6 becomes Z/3 after inverting 2
    inc = ExactMatrix.from_dense(ZZ, [[6]])
    assert abelian_invariants(ZZ, 1, inc, None) == (0, (6,))
    assert abelian_invariants(ZZloc(2), 1, inc, None) == (0, (3,))
    assert abelian_invariants(ZZloc(6), 1, inc, None) == (0, ())


def test_abelian_invariants_free_part():
    out = ExactMatrix.from_dense(ZZ, [[1, 0, 0]])
    assert abelian_invariants(ZZ, 3, None, out) == (2, ())


def test_echelon_solve():
    e = EchelonBasis(QQ, track=True)
    assert e.add({0: 1, 1: 1})
    assert e.add({1: 2})
    assert not e.add({0: 3, 1: 5})
    assert e.contains({0: 1})
    assert e.solve({2: 1}) is None
    assert e.solve({0: 1, 1: 3}) == {0: 1, 1: 1}

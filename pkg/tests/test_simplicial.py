import json
import random

import pytest

from homspace.coeffring import GF, QQ, ZZ
from homspace.simplicial import (FiniteSimplicialSet, NormalizedCochain, Surjection,
                                 boundary_simplex, coboundary, cochain_basis, cup, cup_i,
                                 e_surjection, f_surjection, hga_operation, interval_cut,
                                 interval_cut_cochain, is_coboundary, random_simplicial_set,
                                 relation_defect, rp2_model, sphere_model, standard_simplex,
                                 steenrod_relation_check)


def aw_oracle(a, b, sigma_vertices, X):
    """Front p-face times back q-face on an ordered simplicial complex."""
    p = a.degree
    front = X.restrict(X.nondegenerate(sigma_vertices), list(range(p + 1)))
    n = len(sigma_vertices) - 1
    back = X.restrict(X.nondegenerate(sigma_vertices), list(range(p, n + 1)))
    return a(front) * b(back)


def test_cup_is_alexander_whitney_on_boundary_of_triangle():
    X = boundary_simplex(2)
    for p in (0, 1):
        for q in (0, 1):
            if p + q > 1:
                continue
            for a in cochain_basis(X, p, ZZ):
                for b in cochain_basis(X, q, ZZ):
                    c = cup(a, b)
                    for y in X.simplices.get(p + q, []):
                        assert c(X.nondegenerate(y)) == aw_oracle(a, b, y, X)


def test_identity_surjection():
    X = boundary_simplex(3)
    rng = random.Random(1)
    for d in (0, 1, 2):
        c = NormalizedCochain.random(X, d, rng, ZZ)
        assert interval_cut_cochain(Surjection((1,)), [c]) == c


def test_interval_cut_degree_mismatch():
    X = standard_simplex(2)
    e02 = NormalizedCochain(X, 1, {(0, 2): 1}, GF(2))
    u = Surjection((1, 2, 1))
    with pytest.raises(ValueError, match="arity/degree mismatch"):
        interval_cut(u, [e02, e02], X.nondegenerate((0, 1, 2)))
    with pytest.raises(ValueError, match="arity/degree mismatch"):
        interval_cut(u, [e02], X.nondegenerate((0, 1, 2)))


def test_interval_cut_121_hand_enumeration():
    # letter 2 must take [p, q] = [0, 2]; letter 1 then gets {0} u {2}
    X = standard_simplex(2)
    e02 = NormalizedCochain(X, 1, {(0, 2): 1}, GF(2))
    top = NormalizedCochain(X, 2, {(0, 1, 2): 1}, GF(2))
    assert interval_cut(Surjection((1, 2, 1)), [e02, top], X.nondegenerate((0, 1, 2))) == 1


def test_surjection_validation():
    with pytest.raises(ValueError):
        Surjection((1, 1, 2))
    with pytest.raises(ValueError):
        Surjection((1, 3))
    assert Surjection.parse("1,2,1").degree == 1


def test_cup_i_rejects_negative_index():
    X = boundary_simplex(3)
    a = NormalizedCochain.zero(X, 1, ZZ)
    with pytest.raises(ValueError):
        cup_i(-1, a, a)


def test_normalization_on_degenerate_simplices():
    X = boundary_simplex(3)
    rng = random.Random(2)
    a = NormalizedCochain.random(X, 1, rng, ZZ)
    b = NormalizedCochain.random(X, 1, rng, ZZ)
    for y in X.simplices[1]:
        s = X.degeneracy(X.nondegenerate(y), 0)
        assert a(s) == 0
        assert interval_cut(Surjection((1, 2)), [a, b], s) == 0
        c = NormalizedCochain.random(X, 2, rng, ZZ)
        assert interval_cut(Surjection((1, 2, 1)), [a, c], s) == 0
        assert interval_cut(Surjection((1, 2)), [a, c], X.degeneracy(s, 1)) == 0


@pytest.mark.parametrize("ring", [ZZ, GF(2)], ids=["Z", "F2"])
@pytest.mark.parametrize("i", [0, 1, 2])
@pytest.mark.parametrize("space", [boundary_simplex(3), rp2_model(), random_simplicial_set(7)],
                         ids=["dDelta3", "RP2", "random"])
def test_steenrod_relation(space, i, ring):
    assert steenrod_relation_check(i, space, 200, ring=ring)


def test_literal_relation_fails_over_integers():
    # without the (-1)^i factor the i = 1 relation cannot hold over Z
    r = steenrod_relation_check(1, boundary_simplex(3), 200, ring=ZZ, literal=True)
    assert not r and r.witness is not None
    assert steenrod_relation_check(1, boundary_simplex(3), 200, ring=GF(2), literal=True)


def test_sign_flipped_cup1_is_caught():
    def flipped(i, a, b):
        c = cup_i(i, a, b)
        return c.scale(-1) if i == 1 else c

    r = steenrod_relation_check(0, boundary_simplex(3), 200, ring=ZZ, op=flipped)
    assert not r
    a, b = r.witness
    assert not relation_defect(0, a, b, flipped).is_zero()
    assert relation_defect(0, a, b).is_zero()


@pytest.mark.parametrize("ring", [ZZ, GF(2)], ids=["Z", "F2"])
def test_hga_identities(ring):
    X = standard_simplex(4)
    for p in range(4):
        for q in range(4):
            for a in cochain_basis(X, p, ring):
                for b in cochain_basis(X, q, ring):
                    if p + q >= 1:
                        assert hga_operation("E", [a, b], l=1) == cup_i(1, a, b).scale(-1)
                    if p + q >= 2:
                        assert hga_operation("F", [a, b], p=1, q=1) == cup_i(2, a, b).scale(-1)


def test_e1_equals_cup1_over_f2():
    X = boundary_simplex(3)
    rng = random.Random(5)
    a = NormalizedCochain.random(X, 1, rng, GF(2))
    b = NormalizedCochain.random(X, 2, rng, GF(2))
    assert hga_operation("E", [a, b], l=1) == cup_i(1, a, b)


def test_hga_arity_errors():
    X = boundary_simplex(3)
    a = NormalizedCochain.zero(X, 1, ZZ)
    with pytest.raises(ValueError, match="arity"):
        hga_operation("E", [a], l=1)
    with pytest.raises(ValueError):
        hga_operation("G", [a, a])


def test_surjection_sequences():
    assert e_surjection(2).seq == (1, 2, 1, 3, 1)
    assert f_surjection(1, 1).seq == (1, 2, 1, 2)
    for p in range(1, 4):
        for q in range(1, 4):
            s = f_surjection(p, q).seq
            assert len(s) == 2 * (p + q)
            assert all(x != y for x, y in zip(s, s[1:]))


def test_rp2_cup_products_over_f2():
    X = rp2_model()
    x = NormalizedCochain(X, 1, {"a": 1}, GF(2))
    assert coboundary(x).is_zero() and not is_coboundary(x)
    assert is_coboundary(cup_i(1, x, x) - x)
    assert not is_coboundary(cup(x, x))


def test_cup0_is_associative():
    X = random_simplicial_set(3)
    rng = random.Random(0)
    for _ in range(20):
        a, b, c = (NormalizedCochain.random(X, d, rng, ZZ) for d in (1, 1, 1))
        assert cup(cup(a, b), c) == cup(a, cup(b, c))


def test_coboundary_squares_to_zero():
    for X in (boundary_simplex(3), rp2_model(), sphere_model(2), random_simplicial_set(4)):
        rng = random.Random(3)
        for d in range(X.top_dimension - 1):
            c = NormalizedCochain.random(X, d, rng, ZZ)
            assert coboundary(coboundary(c)).is_zero()


def test_simplicial_set_json_roundtrip():
    X = rp2_model()
    Y = FiniteSimplicialSet.from_json(json.loads(json.dumps(X.to_json())))
    Y.check_identities()
    x = NormalizedCochain(Y, 1, {"a": 1}, GF(2))
    assert NormalizedCochain.from_json(Y, x.to_json(), GF(2)) == x


def test_cochain_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        NormalizedCochain(rp2_model(), 1, {"s": 1}, QQ)

import pytest

from homspace.catalog import lookup, subgroup_from_spec
from homspace.coeffring import GF, QQ
from homspace.models import build_model, one_sided, two_sided
from homspace.presentation import (MultiplicativeRefusal, duality_and_euler_checks,
                                   finite_cohomology, format_poincare, poincare_polynomial,
                                   ring_presentation)


def model(G, K, H="1", ring=QQ):
    Gd = lookup(G, ring)
    eK = subgroup_from_spec(K, Gd, ring=ring)
    if H == "1":
        return build_model(one_sided(Gd, eK, ring))
    return build_model(two_sided(Gd, subgroup_from_spec(H, Gd, ring=ring), eK, ring))


def test_format_poincare():
    assert format_poincare([1, 0, 1, 0, 0, 0, 0, 2]) == "1 + t^2 + 2t^7"
    assert format_poincare([1, 1]) == "1 + t"
    assert format_poincare([]) == "0"


def test_u2_torus():
    p = ring_presentation(model("U(2)", "T2"), 2)
    assert p.generators == [("x2", 2)]
    assert [str(r) for r in p.relations] == ["x2^2"]
    assert p.complete
    assert p.render().startswith("Q[x2] / (x2^2)")


def test_u3_torus_relation_degrees():
    p = ring_presentation(model("U(3)", "T3"), 6)
    # Q[t1, t2, t3]/(e1, e2, e3) needs two generators in degree 2
    assert [d for _, d in p.generators] == [2, 2]
    assert p.relation_degrees() == [4, 6]
    assert p.hilbert_function(6) == [1, 0, 2, 0, 2, 0, 1]


@pytest.mark.parametrize("n", [2, 3])
def test_odd_grassmannians(n):
    p = ring_presentation(model(f"SO({2 * n + 1})", f"SO(2)xSO({2 * n - 1})"), 4 * n - 2)
    assert p.generators == [("x2", 2)]
    assert p.relation_degrees() == [4 * n]
    assert p.complete


def test_su4_circle_exterior_generators():
    p = ring_presentation(model("SU(4)", "circle:-3,1,1,1"), 14)
    assert [d for _, d in p.generators] == [2, 5, 7]
    assert "x2^2" in [str(r) for r in p.relations]
    assert p.render().splitlines()[0].startswith("L[x5, x7] (x) Q[x2]")


def test_u4_grassmannian():
    p = ring_presentation(model("U(4)", "U(2)xU(2)"), 8)
    assert [d for _, d in p.generators] == [2, 4]
    assert sum(p.betti) == 6


def test_reflected_circle_is_not_complete():
    p = ring_presentation(model("SU(3)", "rc", "rc"), 12)
    assert not p.complete
    assert p.render().endswith("through degree 12")


def test_characteristic_two_is_refused():
    m = model("U(2)", "diag-circle", ring=GF(2))
    with pytest.raises(MultiplicativeRefusal, match="additive only"):
        ring_presentation(m, 3)


def test_finite_cohomology():
    assert finite_cohomology(model("U(2)", "T2"), 2)
    assert not finite_cohomology(model("SU(3)", "rc", "rc"), 6)


def test_duality_and_euler():
    r = duality_and_euler_checks([1, 0, 2, 0, 2, 0, 1], 6, 6)
    assert r.ok and r.palindromic and r.euler == 6
    bad = duality_and_euler_checks([1, 0, 1, 0, 0, 0, 0], 6)
    assert not bad.palindromic and bad.mismatches == [0, 2, 4, 6]
    assert not duality_and_euler_checks([1, 0, 1], 2, 3).ok
    with pytest.raises(ValueError):
        duality_and_euler_checks([1, 0], 2)
    with pytest.raises(ValueError):
        duality_and_euler_checks([1, 0, 1, 1], 2)


def test_poincare_polynomial():
    m = model("U(2)", "T2")
    assert poincare_polynomial(m.cohomology(2)) == [1, 0, 1]

import pytest

from homspace.barcalc import Dga, DgModule, NotFinite
from homspace.catalog import lookup, subgroup_from_spec
from homspace.coeffring import GF, QQ
from homspace.gca import AlgebraMap, FreeCga, Generator
from homspace.models import one_sided, two_sided
from homspace.tor import (TorTable, bar_tor, compare_totals, koszul_tor, recipe_bar_tor,
                          recipe_koszul_tor, regular_sequence_check)


def poly(*spec, ring=QQ):
    return FreeCga(ring, [Generator(n, d) for n, d in spec])


def test_koszul_tor_of_ground_field_over_polynomial_ring():
    P, k = poly(("x", 2)), FreeCga(QQ, [])
    t = koszul_tor(P, None, AlgebraMap(P, k, {"x": k.zero()}), 6)
    assert {pq for pq, d in t.entries.items() if d} == {(0, 0), (-1, 2)}
    assert t.totals() == [1, 1, 0, 0, 0, 0, 0]
    assert t.columns() == [-1, 0]


def test_bar_tor_matches_koszul_tor():
    P = poly(("x", 2))
    A = Dga.from_cdga(P, 10, complete=False)
    t = bar_tor(A, None, None, 6)
    assert t.entries == {(0, 0): 1, (-1, 2): 1}


def test_bar_tor_of_free_module_is_ground_field():
    A = Dga.from_cdga(poly(("x", 2)), 10, complete=False)
    M = DgModule.regular(A, "right")
    assert bar_tor(A, M, DgModule.ground(A, "left"), 6).totals() == [1, 0, 0, 0, 0, 0, 0]
    assert bar_tor(A, M, None, 6).totals() == [1, 0, 0, 0, 0, 0, 0]


def test_bar_tor_over_exterior_algebra():
    A = Dga.from_cdga(poly(("z", 3)), 3, complete=True)
    assert bar_tor(A, None, None, 10).totals() == [1 if n % 2 == 0 else 0 for n in range(11)]


def test_bar_tor_refuses_degree_one_without_word_cap():
    A = Dga.from_cdga(poly(("z", 1)), 1, complete=True)
    with pytest.raises(NotFinite, match="not finite per degree"):
        bar_tor(A, None, None, 4)


def test_koszul_tor_rejects_inhomogeneous_maps():
    P, B = poly(("x", 2)), poly(("y", 2))
    f = AlgebraMap(P, B, {"x": B.parse("y + y^2")}, check=False)
    with pytest.raises(ValueError, match="homogeneous"):
        koszul_tor(P, None, f, 4)


def test_char2_counterexample_tor_ring():
    # Tor over F2[c1, c2] of (F2, F2[y]) for diag U(1) in U(2): L[z1] (x) F2[y2]/(y2^2)
    G = lookup("U(2)", GF(2))
    t = recipe_koszul_tor(one_sided(G, subgroup_from_spec("diag-circle", G), GF(2)), 3)
    assert t.totals() == [1, 1, 1, 1]
    slices = t.model.cohomology(4)
    z, y = slices[1].representatives[0], slices[2].representatives[0]
    assert (z * z).is_zero() or slices[2].is_coboundary(z * z)
    assert slices[4].dimension == 0  # y^2 = 0
    assert not slices[3].is_coboundary(z * y)


def test_regular_sequences():
    P = poly(("t1", 2), ("t2", 2))
    assert regular_sequence_check(P, [P.parse("t1 + t2"), P.parse("t1*t2")], 12).regular
    S = poly(("s", 2))
    v = regular_sequence_check(S, [S.parse("-6*s^2"), S.parse("-8*s^3"), S.parse("-3*s^4")], 12)
    assert not v.regular and v.first_failure == 6
    # the quotient is Q[s]/(s^2)
    assert v.quotient == [1, 0, 1] + [0] * 10
    assert regular_sequence_check(P, [], 8).regular


def test_regularity_needs_degrees_for_zero_elements():
    P = poly(("x", 2))
    with pytest.raises(ValueError):
        regular_sequence_check(P, [P.zero()], 6)
    assert not regular_sequence_check(P, [P.zero()], 6, degrees=[2]).regular


def test_tor_table_validation():
    with pytest.raises(ValueError, match="out of range"):
        TorTable({(1, 0): 1}, {1: 1}, 2)
    with pytest.raises(ValueError, match="add up"):
        TorTable({(0, 0): 1}, {0: 2}, 2)
    t = TorTable({(0, 0): 1, (-1, 4): 2}, {0: 1, 3: 2}, 4, "x")
    assert t.support() == [0, 3]
    assert "totals: 0:1 3:2" in t.render()
    assert t.to_json()["entries"][0] == {"p": -1, "q": 4, "dim": 2}


def test_recipe_tor_paths_agree_two_sided():
    G = lookup("U(2)")
    r = two_sided(G, subgroup_from_spec("circle:1,0", G), subgroup_from_spec("circle:0,1", G))
    a, b = recipe_koszul_tor(r, 6), recipe_bar_tor(r, 6)
    assert not compare_totals(a, b)
    # dz1 = b - a and dz3 = 0, so H = Q[a] (x) L[z3]
    assert a.totals() == [1, 0, 1, 1, 1, 1, 1]

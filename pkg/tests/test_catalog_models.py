import pytest

from homspace.catalog import (CatalogError, EmbeddingSpec, diagonal_embedding, lookup, product,
                              restriction_map, subgroup_from_spec, torus, trivial,
                              weyl_euler_characteristic, weyl_invariance_holds)
from homspace.cdga import betti_numbers
from homspace.coeffring import GF, QQ
from homspace.models import biquotient_reduce, build_model, kapovitch_model, one_sided, two_sided


def betti(recipe, cap):
    return betti_numbers(build_model(recipe).cohomology(cap))


@pytest.mark.parametrize("name,rank,dim,weyl,degs", [
    ("U(3)", 3, 9, 6, (1, 3, 5)),
    ("SU(3)", 2, 8, 6, (3, 5)),
    ("Sp(2)", 2, 10, 8, (3, 7)),
    ("SO(5)", 2, 10, 8, (3, 7)),
    ("SO(6)", 3, 15, 24, (3, 7, 5)),
    ("T2", 2, 2, 1, (1, 1)),
])
def test_group_data(name, rank, dim, weyl, degs):
    G = lookup(name)
    assert (G.rank, G.dimension, G.weyl_order, G.exterior_degrees) == (rank, dim, weyl, degs)
    # dim G = sum of exterior degrees
    assert sum(G.exterior_degrees) == G.dimension
    assert weyl_invariance_holds(G)


def test_products_and_names():
    G = lookup("U(2)xU(2)")
    assert G.generator_names == ("c1", "c2", "c1'", "c2'")
    assert G == product(lookup("U(2)"), lookup("U(2)"))


def test_catalog_errors():
    with pytest.raises(CatalogError):
        lookup("Foo(3)")
    with pytest.raises(CatalogError):
        lookup("U(0)")
    with pytest.raises(CatalogError):
        lookup("SO(5)", GF(2))
    with pytest.raises(CatalogError):
        subgroup_from_spec("T3", lookup("U(2)"))
    with pytest.raises(CatalogError):
        EmbeddingSpec(torus(1), lookup("U(3)"), ((1,), (1,)))


def test_so5_restriction_is_total_pontryagin_class():
    G = lookup("SO(5)")
    f = restriction_map(subgroup_from_spec("SO(2)xSO(3)", G))
    B = f.target
    # (1 + e^2)(1 + p1) = 1 + (e^2 + p1) + e^2 p1
    assert f.image_of("p1") == B.parse("e^2 + p1")
    assert f.image_of("p2") == B.parse("e^2*p1")


def test_unitary_restriction_to_torus_is_elementary_symmetric():
    G = lookup("U(3)")
    f = restriction_map(subgroup_from_spec("T3", G))
    B = f.target
    assert f.image_of("c2") == B.parse("t1*t2 + t1*t3 + t2*t3")
    assert f.image_of("c3") == B.parse("t1*t2*t3")


def test_weyl_euler_characteristic():
    assert weyl_euler_characteristic(lookup("U(4)"), trivial(), lookup("U(2)xU(2)")) == 6
    assert weyl_euler_characteristic(lookup("SU(3)"), trivial(), torus(1)) == 0
    with pytest.raises(CatalogError):
        weyl_euler_characteristic(lookup("SU(2)"), torus(1), lookup("T2"))


@pytest.mark.parametrize("G,K,H,cap", [
    ("U(3)", "T3", "1", 6),
    ("SU(4)", "circle:-3,1,1,1", "1", 14),
    ("SU(3)", "rc", "rc", 12),
])
def test_negating_differentials_does_not_change_cohomology(G, K, H, cap):
    Gd = lookup(G)
    eK = subgroup_from_spec(K, Gd)
    if H == "1":
        a, b = one_sided(Gd, eK), one_sided(Gd, eK, negate=True)
    else:
        eH = subgroup_from_spec(H, Gd)
        a, b = two_sided(Gd, eH, eK), two_sided(Gd, eH, eK, negate=True)
    assert betti(a, cap) == betti(b, cap)


def test_reflected_circle_series():
    G = lookup("SU(3)")
    rc = subgroup_from_spec("rc", G)
    # L[z5] (x) Q[s, t]/(s^2 - t^2)
    assert betti(two_sided(G, rc, rc), 12) == [1, 0, 2, 0, 2, 1, 2, 2, 2, 2, 2, 2, 2]


def test_biquotient_with_trivial_left_factor_is_homogeneous():
    G = lookup("SU(2)")
    c = subgroup_from_spec("circle:1,-1", G)
    one = betti(one_sided(G, c), 6)
    assert one == [1, 0, 1, 0, 0, 0, 0]  # S^2
    assert betti(biquotient_reduce(G, (subgroup_from_spec("1", G), c)), 6) == one


def test_eschenburg_style_circle_in_g_times_g():
    G = lookup("SU(3)")
    U = EmbeddingSpec(torus(1), product(G, G), ((1,), (1,), (-2,), (0,), (0,), (0,)))
    oracle = [1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0]  # (1 + t^2)(1 + t^5)
    assert betti(biquotient_reduce(G, U), 10) == oracle
    assert betti(one_sided(G, subgroup_from_spec("circle:1,1,-2", G)), 10) == oracle


def test_diagonal_action_gives_free_loop_space_cohomology():
    # U = diag G acts by conjugation; the model computes H(BG) (x) H(G)
    G = lookup("SU(2)")
    got = betti(biquotient_reduce(G, diagonal_embedding(G)), 11)
    assert got == [1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1]
    assert got[:4] == [1, 0, 0, 1]


def test_k_equal_g_is_a_point():
    G = lookup("SU(3)")
    assert betti(one_sided(G, EmbeddingSpec.identity(G, G)), 10) == [1] + [0] * 10


def test_kapovitch_model_of_one_sided_recipe_is_cartan_model():
    G = lookup("U(2)")
    r = one_sided(G, subgroup_from_spec("T2", G))
    assert str(kapovitch_model(r).to_json()) == str(build_model(r).to_json())


def test_recipe_validation():
    G = lookup("U(2)")
    with pytest.raises(ValueError):
        one_sided(G, subgroup_from_spec("T3", lookup("U(3)")))  # wrong target
    r = two_sided(G, subgroup_from_spec("circle:1,0", G), subgroup_from_spec("circle:0,1", G))
    assert r.manifold_dimension == 2
    assert r.to_json()["kind"] == "two-sided"
    assert r.ring == QQ

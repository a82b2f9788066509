import json

import pytest

from homspace.barcalc import (Dga, Dgc, DgModule, NotFinite, TwistingCochain, bar, check_counit,
                              check_shuffle_map, check_twisting_cochain, cobar,
                              tautological_cochain, tensor_dga, twisted_tensor)
from homspace.cdga import Cdga
from homspace.coeffring import QQ
from homspace.gca import FreeCga, Generator


def free(*spec):
    return FreeCga(QQ, [Generator(n, d) for n, d in spec])


def exterior(*degs):
    return Dga.from_cdga(free(*[(f"z{d}", d) for d in degs]), sum(degs), complete=True)


def truncated_x(top=6):
    return Dga.from_cdga(free(("x", 2)), top, complete=True)


def test_bar_of_ground_ring():
    B = bar(Dga.ground(QQ), 6)
    assert B.dims() == [1] + [0] * 7
    assert B.cohomology_dims(6) == [1] + [0] * 6


def test_cobar_of_ground_coalgebra():
    B = bar(Dga.ground(QQ), 6)
    assert cobar(B, 6).cohomology_dims(5) == [1] + [0] * 5


def test_cobar_of_single_primitive():
    # c primitive in degree 2: the tensor algebra on s c, of degree 3
    C = Dgc(QQ, {"1": 0, "c": 2}, "1",
            lambda c: [(1, "1", "1")] if c == "1" else [(1, "c", "1"), (1, "1", "c")],
            lambda c: {}, cap=12)
    O = cobar(C, 12)
    assert [len(O.basis.get(n, [])) for n in range(13)] == [1 if n % 3 == 0 else 0
                                                           for n in range(13)]


def test_cobar_refuses_nonpositive_coideal():
    C = Dgc(QQ, {"1": 0, "c": 0}, "1", lambda c: [], lambda c: {}, cap=4)
    with pytest.raises(NotFinite, match="cobar not finite per degree"):
        cobar(C, 4)


def test_bar_refuses_degree_one_without_word_cap():
    A = Dga.from_cdga(free(("z", 1)), 1, complete=True)
    with pytest.raises(NotFinite, match="bar complex not finite per degree"):
        bar(A, 4)
    B = bar(A, 4, word_cap=3)
    assert B.check()


def test_bar_of_exterior_algebra():
    B = bar(exterior(3), 12)
    assert B.check()
    assert B.cohomology_dims(12) == [1 if n % 2 == 0 else 0 for n in range(13)]


def test_bar_of_polynomial_algebra_is_exterior():
    # B Q[x2] ~ L[s x], one class in degree 1
    A = Dga.from_cdga(free(("x", 2)), 14, complete=False)
    assert bar(A, 10).cohomology_dims(10) == [1, 1] + [0] * 9


@pytest.mark.parametrize("make", [lambda: exterior(3), lambda: exterior(3, 5),
                                  lambda: truncated_x(6)])
def test_counit_is_quasi_isomorphism(make):
    assert check_counit(make(), 8)


def test_zero_twisting_cochain_is_valid():
    A = exterior(3)
    B = bar(A, 8)
    assert check_twisting_cochain(TwistingCochain.zero(B, A))


def test_tautological_cochain_and_sign_mutation():
    A = exterior(3, 5)
    B = bar(A, 12)
    t = tautological_cochain(A, B)
    assert check_twisting_cochain(t, 12)
    bad = dict(t.values)
    bad[("z3",)] = {"z3": -1}
    res = check_twisting_cochain(TwistingCochain(B, A, bad), 12)
    assert not res
    assert "z3" in res.witness and "z5" in res.witness


def test_twisting_cochain_degree_check():
    A = exterior(3, 5)
    B = bar(A, 8)
    res = check_twisting_cochain(TwistingCochain(B, A, {("z3",): {"z5": 1}}))
    assert not res and "degree" in res.message


def test_twisted_tensor_refuses_invalid_cochain():
    A = exterior(3, 5)
    B = bar(A, 8)
    bad = TwistingCochain(B, A, {("z3",): {"z3": -1}, ("z5",): {"z5": 1}})
    with pytest.raises(ValueError, match="invalid twisting cochain"):
        twisted_tensor(B, bad, DgModule.regular(A, "left"), cap=8)


def test_twisted_tensor_with_tautological_cochain_is_acyclic():
    # B A (x)_t A resolves k
    A = exterior(3)
    B = bar(A, 10)
    cx = twisted_tensor(B, tautological_cochain(A, B), DgModule.regular(A, "left"), cap=10)
    assert cx.check_d_squared(9)
    assert cx.cohomology_dims(0, 9) == [1] + [0] * 9


def test_kunneth_with_zero_cochain():
    A = Dga.from_cdga(Cdga(free(("x", 2), ("z", 3)), {"z": free(("x", 2), ("z", 3)).parse("x^2")}),
                      14, complete=False)
    B = bar(exterior(5), 10)
    cx = twisted_tensor(B, TwistingCochain.zero(B, A), DgModule.regular(A, "left"), cap=10)
    # H(B L[z5]) = 1 in degrees 0, 4, 8; H(A) = Q[x]/(x^2)
    assert cx.cohomology_dims(0, 9) == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0]


def test_shuffle_map_identities():
    assert check_shuffle_map(exterior(3), truncated_x(6), 8)
    assert check_shuffle_map(exterior(3), exterior(5), 10)


def test_tensor_dga_sign():
    T = tensor_dga(exterior(3), exterior(5))
    a, b = ("z3", "1"), ("1", "z5")
    assert T.mul_basis(a, b) == {("z3", "z5"): 1}
    assert T.mul_basis(b, a) == {("z3", "z5"): -1}
    assert T.check()


def test_dga_json_roundtrip():
    A = truncated_x(6)
    obj = json.loads(json.dumps(A.to_json()))
    A2 = Dga.from_json(obj)
    assert A2.to_json() == A.to_json()
    assert A2.cohomology_dims() == [1, 0, 1, 0, 1, 0, 1]


def test_dga_validation():
    with pytest.raises(ValueError, match="connected"):
        Dga(QQ, {"1": 0, "e": 0}, "1", lambda a, b: {})
    with pytest.raises(ValueError, match="unit"):
        Dga(QQ, {"1": 1}, "1", lambda a, b: {})

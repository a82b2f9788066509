"""Classical compact groups, their classifying-space cohomology, and the
restriction maps induced by subgroup inclusions.

A subgroup inclusion is given by an integer weight matrix between maximal
tori: row i expresses the i-th torus coordinate of the big group as an
integer combination of the torus coordinates of the subgroup.  Restriction
H(BG) -> H(BK) is computed by substituting the weights into the torus
expressions of the generators of H(BG) and rewriting the result in the
generators of H(BK), degree by degree, by exact linear algebra.

Torus coordinates are the diagonal entries of the standard maximal torus.
For SU(n) that means n coordinates subject to t1 + ... + tn = 0.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .coeffring import QQ, CoefficientRing, EchelonBasis
from .gca import AlgebraMap, FreeCga, Generator, GradedElement, POLY

__all__ = [
    "GroupDatum",
    "EmbeddingSpec",
    "lookup",
    "product",
    "unitary",
    "special_unitary",
    "symplectic",
    "special_orthogonal",
    "torus",
    "trivial",
    "restriction_map",
    "weyl_euler_characteristic",
    "weyl_invariance_holds",
    "subgroup_from_spec",
    "diagonal_embedding",
    "CatalogError",
]


class CatalogError(ValueError):
    pass


def elementary_symmetric(xs: Sequence[GradedElement], alg: FreeCga) -> List[GradedElement]:
    """[e_0, e_1, ..., e_n] of the given elements."""
    e = [alg.one()] + [alg.zero()] * len(xs)
    for x in xs:
        for j in range(len(xs), 0, -1):
            e[j] = e[j] + e[j - 1] * x
    return e


@dataclass(frozen=True)
class _Factor:
    kind: str
    n: int

    @property
    def label(self) -> str:
        if self.kind == "T":
            return f"T{self.n}" if self.n != 1 else "circle"
        if self.kind == "1":
            return "1"
        return f"{self.kind}({self.n})"


# per factor: (torus dim, rank, dim, weyl order, [(gen name, degree)], relations?,
# expression builder, weyl generators as signed permutations)

def _factor_data(f: _Factor):
    k, n = f.kind, f.n
    if k == "1":
        return dict(tdim=0, rank=0, dim=0, weyl=1, gens=[], rel=False,
                    expr=lambda t, a: [], weyl_gens=[])
    if k == "T":
        names = ["s"] if n == 1 else [f"t{i + 1}" for i in range(n)]
        return dict(tdim=n, rank=n, dim=n, weyl=1, gens=[(nm, 2) for nm in names],
                    rel=False, expr=lambda t, a: list(t), weyl_gens=[])
    if k == "U":
        return dict(tdim=n, rank=n, dim=n * n, weyl=math.factorial(n),
                    gens=[(f"c{j}", 2 * j) for j in range(1, n + 1)], rel=False,
                    expr=lambda t, a: elementary_symmetric(t, a)[1:],
                    weyl_gens=_perm_gens(n))
    if k == "SU":
        return dict(tdim=n, rank=n - 1, dim=n * n - 1, weyl=math.factorial(n),
                    gens=[(f"c{j}", 2 * j) for j in range(2, n + 1)], rel=True,
                    expr=lambda t, a: elementary_symmetric(t, a)[2:],
                    weyl_gens=_perm_gens(n))
    if k == "Sp":
        return dict(tdim=n, rank=n, dim=n * (2 * n + 1), weyl=2 ** n * math.factorial(n),
                    gens=[(f"q{j}", 4 * j) for j in range(1, n + 1)], rel=False,
                    expr=lambda t, a: elementary_symmetric([x * x for x in t], a)[1:],
                    weyl_gens=_perm_gens(n) + _sign_gens(n, single=True))
    if k == "SO" and n % 2 == 1:
        m = n // 2
        return dict(tdim=m, rank=m, dim=n * (n - 1) // 2, weyl=2 ** m * math.factorial(m),
                    gens=[(f"p{j}", 4 * j) for j in range(1, m + 1)], rel=False,
                    expr=lambda t, a: elementary_symmetric([x * x for x in t], a)[1:],
                    weyl_gens=_perm_gens(m) + _sign_gens(m, single=True))
    if k == "SO":
        m = n // 2

        def so_even(t, a):
            p = elementary_symmetric([x * x for x in t], a)[1:m]
            e = a.one()
            for x in t:
                e = e * x
            return p + [e]

        return dict(tdim=m, rank=m, dim=n * (n - 1) // 2,
                    weyl=2 ** (m - 1) * math.factorial(m) if m else 1,
                    gens=[(f"p{j}", 4 * j) for j in range(1, m)] + [("e", 2 * m)], rel=False,
                    expr=so_even, weyl_gens=_perm_gens(m) + _sign_gens(m, single=False))
    raise CatalogError(f"unknown group kind {k}")


def _perm_gens(n: int) -> List[Tuple[Tuple[int, int], ...]]:
    """Adjacent transpositions as signed permutations ((target, sign), ...)."""
    out = []
    for i in range(n - 1):
        p = [(j, 1) for j in range(n)]
        p[i], p[i + 1] = (i + 1, 1), (i, 1)
        out.append(tuple(p))
    return out


def _sign_gens(n: int, single: bool) -> List[Tuple[Tuple[int, int], ...]]:
    out = []
    if single and n >= 1:
        p = [(j, 1) for j in range(n)]
        p[0] = (0, -1)
        out.append(tuple(p))
    elif not single and n >= 2:
        p = [(j, 1) for j in range(n)]
        p[0], p[1] = (0, -1), (1, -1)
        out.append(tuple(p))
    return out


@dataclass(frozen=True)
class GroupDatum:
    """Invariants of a (product of) classical compact connected group(s)."""

    name: str
    factors: Tuple[_Factor, ...]
    rank: int
    dimension: int
    weyl_order: int
    generator_names: Tuple[str, ...]
    polynomial_degrees: Tuple[int, ...]
    torus_dim: int
    # indices of torus coordinates summing to zero, one block per SU factor
    torus_relations: Tuple[Tuple[int, ...], ...]
    needs_two_unit: bool

    @property
    def exterior_degrees(self) -> Tuple[int, ...]:
        return tuple(d - 1 for d in self.polynomial_degrees)

    def torus_algebra(self) -> FreeCga:
        return FreeCga(QQ, [Generator(f"u{i + 1}", 2, POLY) for i in range(self.torus_dim)])

    def classifying_algebra(self, ring: CoefficientRing) -> FreeCga:
        return FreeCga(ring, [Generator(nm, d, POLY)
                              for nm, d in zip(self.generator_names, self.polynomial_degrees)])

    def torus_expressions(self, alg: Optional[FreeCga] = None) -> List[GradedElement]:
        """Each generator of H(BG) as a polynomial in the torus coordinates."""
        alg = alg or self.torus_algebra()
        t = alg.gens()
        out: List[GradedElement] = []
        pos = 0
        for f in self.factors:
            data = _factor_data(f)
            out += data["expr"](t[pos:pos + data["tdim"]], alg)
            pos += data["tdim"]
        return out

    def weyl_generators(self) -> List[Tuple[Tuple[int, int], ...]]:
        """Generators of the Weyl group as signed permutations of all coordinates."""
        out = []
        pos = 0
        for f in self.factors:
            data = _factor_data(f)
            for g in data["weyl_gens"]:
                full = [(j, 1) for j in range(self.torus_dim)]
                for i, (j, s) in enumerate(g):
                    full[pos + i] = (pos + j, s)
                out.append(tuple(full))
            pos += data["tdim"]
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "dimension": self.dimension,
            "weyl_order": self.weyl_order,
            "polynomial_degrees": list(self.polynomial_degrees),
            "exterior_degrees": list(self.exterior_degrees),
            "generators": list(self.generator_names),
        }


def _datum(factors: Sequence[_Factor]) -> GroupDatum:
    factors = tuple(f for f in factors if f.kind != "1") or (_Factor("1", 0),)
    names: List[str] = []
    degs: List[int] = []
    rank = dim = 0
    weyl = 1
    tdim = 0
    rels = []
    need2 = False
    for f in factors:
        data = _factor_data(f)
        for nm, d in data["gens"]:
            while nm in names:
                nm += "'"
            names.append(nm)
            degs.append(d)
        rank += data["rank"]
        dim += data["dim"]
        weyl *= data["weyl"]
        if data["rel"]:
            rels.append(tuple(range(tdim, tdim + data["tdim"])))
        tdim += data["tdim"]
        need2 = need2 or f.kind == "SO"
    name = "x".join(f.label for f in factors)
    return GroupDatum(name, factors, rank, dim, weyl, tuple(names), tuple(degs), tdim,
                      tuple(rels), need2)


def unitary(n: int) -> GroupDatum:
    return _datum([_Factor("U", n)])


def special_unitary(n: int) -> GroupDatum:
    if n < 2:
        return trivial()
    return _datum([_Factor("SU", n)])


def symplectic(n: int) -> GroupDatum:
    return _datum([_Factor("Sp", n)])


def special_orthogonal(n: int) -> GroupDatum:
    if n < 2:
        return trivial()
    return _datum([_Factor("SO", n)])


def torus(r: int) -> GroupDatum:
    return _datum([_Factor("T", r)] if r else [])


def trivial() -> GroupDatum:
    return _datum([])


def product(*groups: GroupDatum) -> GroupDatum:
    return _datum([f for g in groups for f in g.factors])


_FACTOR_RE = re.compile(r"^(U|SU|Sp|SO|T|Torus)\(?(\d+)\)?$")


def lookup(name: str, ring: Optional[CoefficientRing] = None) -> GroupDatum:
    """Parse ``U(3)``, ``SU(4)``, ``Sp(5)``, ``SO(5)``, ``T2``, ``Torus(2)``,
    ``circle``, ``1`` and products joined by ``x``."""
    factors: List[_Factor] = []
    for part in name.replace(" ", "").split("x"):
        if part in ("1", "e", "trivial"):
            continue
        if part in ("circle", "S1", "U(1)"):
            factors.append(_Factor("T", 1))
            continue
        m = _FACTOR_RE.match(part)
        if not m:
            raise CatalogError(f"unknown group {part!r}")
        kind, n = m.group(1), int(m.group(2))
        if kind == "Torus":
            kind = "T"
        if kind == "SU" and n < 2 or kind == "SO" and n < 2:
            continue
        if n < 1 and kind != "T":
            raise CatalogError(f"bad parameter in {part!r}")
        factors.append(_Factor(kind, n))
    datum = _datum(factors)
    if ring is not None and datum.needs_two_unit and not ring.two_is_unit:
        raise CatalogError("catalog restricted to char != 2 for orthogonal groups "
                           f"(2 is not a unit in {ring.name})")
    return datum


def lookup_json(obj: dict, ring: Optional[CoefficientRing] = None) -> GroupDatum:
    """Parse ``{"group": "SU", "n": 4}`` or ``{"product": [...]}``."""
    if "product" in obj:
        return product(*(lookup_json(o, ring) for o in obj["product"]))
    kind = obj["group"]
    if kind in ("1", "trivial"):
        return trivial()
    if kind == "T":
        return lookup(f"T{obj['n']}", ring)
    return lookup(f"{kind}({obj['n']})", ring)


# ---------------------------------------------------------------------------
# Embeddings and restriction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingSpec:
    source: GroupDatum
    target: GroupDatum
    weights: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != self.target.torus_dim or any(len(r) != self.source.torus_dim for r in w):
            raise CatalogError(
                f"weight matrix must be {self.target.torus_dim} x {self.source.torus_dim} "
                f"(torus coordinates of {self.target.name} by those of {self.source.name})")

    @classmethod
    def identity(cls, source: GroupDatum, target: GroupDatum) -> "EmbeddingSpec":
        if source.torus_dim != target.torus_dim:
            raise CatalogError(f"no default embedding {source.name} -> {target.name}; "
                               "give a weight matrix")
        n = source.torus_dim
        return cls(source, target, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def to_json(self) -> dict:
        return {"source": self.source.name, "target": self.target.name,
                "weights": [list(r) for r in self.weights]}


def _reduction(G: GroupDatum):
    """Map the ambient torus algebra onto independent coordinates (drop the
    last coordinate of every SU block)."""
    amb = G.torus_algebra()
    dropped = {blk[-1]: blk for blk in G.torus_relations}
    keep = [i for i in range(G.torus_dim) if i not in dropped]
    red = FreeCga(QQ, [Generator(f"v{i + 1}", 2, POLY) for i in keep])
    images = {}
    for i in range(G.torus_dim):
        if i in dropped:
            img = red.zero()
            for j in dropped[i][:-1]:
                img = img - red.gen(f"v{j + 1}")
        else:
            img = red.gen(f"v{i + 1}")
        images[f"u{i + 1}"] = img
    return amb, red, AlgebraMap(amb, red, images)


def _coerce_element(x: GradedElement, alg: FreeCga) -> GradedElement:
    try:
        return alg.element(x.terms)
    except ValueError as exc:
        raise CatalogError(f"restriction has coefficients outside {alg.ring.name}: {x}") from exc


def restriction_map(e: EmbeddingSpec, ring: CoefficientRing = QQ,
                    source_alg: Optional[FreeCga] = None,
                    target_alg: Optional[FreeCga] = None) -> AlgebraMap:
    """The map H(BG) -> H(BK) for the embedding K -> G (G = ``e.target``)."""
    G, K = e.target, e.source
    for grp in (G, K):
        if grp.needs_two_unit and not ring.two_is_unit:
            raise CatalogError("catalog restricted to char != 2 for orthogonal groups")
    G_amb = G.torus_algebra()
    K_amb, K_red, K_reduce = _reduction(K)
    subst = AlgebraMap(G_amb, K_amb, {
        f"u{i + 1}": sum((K_amb.gen(f"u{j + 1}").scale(w) for j, w in enumerate(row) if w),
                         K_amb.zero())
        for i, row in enumerate(e.weights)})
    # SU-type constraints of G must hold on the image of the subgroup torus
    for blk in G.torus_relations:
        lin = sum((subst(G_amb.gen(f"u{i + 1}")) for i in blk), K_amb.zero())
        if K_reduce(lin):
            raise CatalogError("weight matrix does not define a subgroup inclusion "
                               f"(coordinates of {G.name} do not sum to zero)")
    HBK_q = K.classifying_algebra(QQ)
    K_expr = AlgebraMap(HBK_q, K_red, {nm: K_reduce(x) for nm, x in
                                       zip(K.generator_names, K.torus_expressions(K_amb))})
    images: Dict[str, GradedElement] = {}
    for nm, d, expr in zip(G.generator_names, G.polynomial_degrees,
                           G.torus_expressions(G_amb)):
        target = K_reduce(subst(expr))
        images[nm] = _rewrite(target, d, HBK_q, K_expr)
    src = source_alg or G.classifying_algebra(ring)
    tgt = target_alg or K.classifying_algebra(ring)
    return AlgebraMap(src, tgt, {nm: _coerce_element(x, tgt) for nm, x in images.items()})


def _rewrite(target: GradedElement, degree: int, HBK: FreeCga,
             K_expr: AlgebraMap) -> GradedElement:
    if target.is_zero():
        return HBK.zero()
    basis = HBK.basis(degree)
    red = K_expr.target
    ech = EchelonBasis(QQ, track=True)
    for m in basis:
        ech.add(red.to_vector(K_expr.on_monomial(m), degree))
    sol = ech.solve(red.to_vector(target, degree))
    if sol is None:
        raise CatalogError("weight matrix does not define a subgroup inclusion "
                           f"(torus image {target} is not Weyl-invariant)")
    return HBK.element({basis[k]: c for k, c in sol.items()})


def weyl_invariance_holds(G: GroupDatum) -> bool:
    alg = G.torus_algebra()
    exprs = G.torus_expressions(alg)
    for perm in G.weyl_generators():
        act = AlgebraMap(alg, alg, {f"u{i + 1}": alg.gen(f"u{j + 1}").scale(s)
                                    for i, (j, s) in enumerate(perm)})
        if any(act(x) != x for x in exprs):
            return False
    return True


def weyl_euler_characteristic(G: GroupDatum, H: GroupDatum, K: GroupDatum) -> int:
    """Euler characteristic of H\\G/K predicted from Weyl group orders."""
    if H.rank + K.rank > G.rank:
        raise CatalogError("action cannot be free: rank H + rank K > rank G")
    if H.rank + K.rank < G.rank:
        return 0
    q, r = divmod(G.weyl_order, H.weyl_order * K.weyl_order)
    if r:
        raise CatalogError("Weyl orders do not divide")
    return q


# ---------------------------------------------------------------------------
# Named subgroups used by the command line
# ---------------------------------------------------------------------------


def diagonal_embedding(G: GroupDatum) -> EmbeddingSpec:
    """G -> G x G, g -> (g, g)."""
    n = G.torus_dim
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    return EmbeddingSpec(G, product(G, G), tuple(tuple(r) for r in eye + eye))


def subgroup_from_spec(spec: str, G: GroupDatum, weights: Optional[Sequence[Sequence[int]]] = None,
                       ring: Optional[CoefficientRing] = None) -> EmbeddingSpec:
    """Resolve a subgroup spec relative to G.

    Besides catalog names (embedded by identity weights when torus sizes
    agree) this understands ``diag-circle`` (scalar circle), ``circle:w1,..,wn``
    (circle with the given weights) and ``rc`` (the reflected circle
    diag(z, z^-1, 1, ..., 1)).
    """
    spec = spec.strip()
    if weights is not None:
        return EmbeddingSpec(lookup(spec.split(":")[0], ring), G, tuple(tuple(r) for r in weights))
    if spec in ("1", "trivial"):
        return EmbeddingSpec(trivial(), G, tuple(() for _ in range(G.torus_dim)))
    if spec == "diag-circle":
        return EmbeddingSpec(torus(1), G, tuple((1,) for _ in range(G.torus_dim)))
    if spec.startswith("circle:"):
        w = [int(x) for x in spec[len("circle:"):].split(",")]
        return EmbeddingSpec(torus(1), G, tuple((x,) for x in w))
    if spec == "rc":
        if G.torus_dim < 2:
            raise CatalogError("reflected circle needs torus dimension >= 2")
        w = [1, -1] + [0] * (G.torus_dim - 2)
        return EmbeddingSpec(torus(1), G, tuple((x,) for x in w))
    return EmbeddingSpec.identity(lookup(spec, ring), G)

"""Koszul-type models of homogeneous spaces and biquotients.

For K <= G the one-sided (Cartan) model is H(BK) (x) L[z_j] with
dz_j = rho_K^*(x_j), where x_j are the polynomial generators of H(BG) and
|z_j| = |x_j| - 1.  For a two-sided action of H x K on G the model is
H(BH) (x) H(BK) (x) L[z_j] with dz_j = 1 (x) rho_K^*(x_j) - rho_H^*(x_j) (x) 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .catalog import (EmbeddingSpec, GroupDatum, diagonal_embedding, product,
                      restriction_map, trivial)
from .cdga import Cdga
from .coeffring import QQ, CoefficientRing
from .gca import EXT, POLY, AlgebraMap, FreeCga, Generator, GradedElement

__all__ = [
    "ModelRecipe",
    "koszul_complex",
    "cartan_model",
    "kapovitch_model",
    "build_model",
    "biquotient_reduce",
    "one_sided",
    "two_sided",
]


@dataclass(frozen=True)
class ModelRecipe:
    """Everything needed to write down a Koszul-type model.

    ``negate`` flips the sign of every dz_j; cohomology does not depend on it.
    """

    kind: str
    G: GroupDatum
    H: GroupDatum
    K: GroupDatum
    embed_H: EmbeddingSpec
    embed_K: EmbeddingSpec
    ring: CoefficientRing = QQ
    negate: bool = False

    def __post_init__(self):
        if self.kind not in ("one-sided", "two-sided"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "one-sided" and self.H.rank:
            raise ValueError("one-sided recipes have trivial H")
        for e, sub in ((self.embed_H, self.H), (self.embed_K, self.K)):
            if e.target != self.G or e.source != sub:
                raise ValueError(f"embedding {e.source.name} -> {e.target.name} does not match "
                                 f"the recipe groups")

    @property
    def exterior_degrees(self) -> Tuple[int, ...]:
        return self.G.exterior_degrees

    @property
    def manifold_dimension(self) -> int:
        return self.G.dimension - self.H.dimension - self.K.dimension

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "G": self.G.name,
            "H": self.H.name,
            "K": self.K.name,
            "embed_H": [list(r) for r in self.embed_H.weights],
            "embed_K": [list(r) for r in self.embed_K.weights],
            "ring": self.ring.name,
            "negate": self.negate,
        }


def one_sided(G: GroupDatum, embed_K: EmbeddingSpec, ring: CoefficientRing = QQ,
              negate: bool = False) -> ModelRecipe:
    H = trivial()
    embed_H = EmbeddingSpec(H, G, tuple(() for _ in range(G.torus_dim)))
    return ModelRecipe("one-sided", G, H, embed_K.source, embed_H, embed_K, ring, negate)


def two_sided(G: GroupDatum, embed_H: EmbeddingSpec, embed_K: EmbeddingSpec,
              ring: CoefficientRing = QQ, negate: bool = False) -> ModelRecipe:
    return ModelRecipe("two-sided", G, embed_H.source, embed_K.source, embed_H, embed_K,
                       ring, negate)


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def koszul_complex(base: FreeCga, left: Optional[AlgebraMap], right: AlgebraMap,
                   negate: bool = False, exterior_prefix: str = "z") -> Cdga:
    """M (x) L[z_j] (x) N with dz_j = 1(x)nu(x_j) - mu(x_j)(x)1.

    ``base`` is the polynomial algebra k[x_j]; ``left`` (mu, may be None for
    M = k) and ``right`` (nu) are algebra maps out of it.  Generators of the
    result are those of M, then those of N (renamed with primes on
    collision), then the z_j named ``z<degree>``.
    """
    ring = base.ring
    if any(g.sort != POLY or g.degree % 2 for g in base.generators):
        raise ValueError("Koszul complex needs a polynomial algebra on even generators")
    taken: set = set()
    gens: List[Generator] = []
    maps: List[Tuple[Optional[AlgebraMap], Dict[str, str]]] = []
    for f in (left, right):
        if f is None:
            maps.append((None, {}))
            continue
        if f.source != base:
            raise ValueError("structure maps must start at the base algebra")
        ren = {}
        for g in f.target.generators:
            ren[g.name] = _fresh(g.name, taken)
            gens.append(Generator(ren[g.name], g.degree, g.sort))
        maps.append((f, ren))
    znames = []
    for g in base.generators:
        nm = _fresh(f"{exterior_prefix}{g.degree - 1}", taken)
        znames.append(nm)
        gens.append(Generator(nm, g.degree - 1, EXT))
    total = FreeCga(ring, gens)

    def push(f, ren, x):
        inc = AlgebraMap(f.target, total, {a: total.gen(b) for a, b in ren.items()})
        return inc(f(x))

    diffs: Dict[str, GradedElement] = {}
    for g, nm in zip(base.generators, znames):
        x = base.gen(g.name)
        dz = total.zero()
        f, ren = maps[1]
        dz = dz + push(f, ren, x)
        f, ren = maps[0]
        if f is not None:
            dz = dz - push(f, ren, x)
        diffs[nm] = -dz if negate else dz
    return Cdga(total, diffs, word_generators=znames)


def build_model(recipe: ModelRecipe) -> Cdga:
    G, ring = recipe.G, recipe.ring
    HBG = G.classifying_algebra(ring)
    rho_K = restriction_map(recipe.embed_K, ring, source_alg=HBG)
    rho_H = None
    if recipe.H.generator_names:
        rho_H = restriction_map(recipe.embed_H, ring, source_alg=HBG)
    model = koszul_complex(HBG, rho_H, rho_K, negate=recipe.negate)
    model.recipe = recipe
    return model


def cartan_model(recipe: ModelRecipe) -> Cdga:
    """H(BK) (x) L[z_j], dz_j = rho_K^*(x_j)."""
    if recipe.H.generator_names:
        raise ValueError("the Cartan model is for one-sided recipes (trivial H)")
    return build_model(recipe)


def kapovitch_model(recipe: ModelRecipe) -> Cdga:
    """H(BH) (x) H(BK) (x) L[z_j], dz_j = 1(x)rho_K^*(x_j) - rho_H^*(x_j)(x)1.

    With H trivial this is exactly the Cartan model.
    """
    return build_model(recipe)


def biquotient_reduce(G: GroupDatum,
                      U: Union[EmbeddingSpec, Sequence[EmbeddingSpec]],
                      ring: CoefficientRing = QQ, negate: bool = False) -> ModelRecipe:
    """Recipe computing H(G//U) for U <= G x G acting by (a, b).g = a g b^-1.

    G//U is rewritten as the two-sided quotient U \\ (G x G) / diag(G).  ``U`` is either an embedding into G x G
    or a pair (H -> G, K -> G) standing for H x K.
    """
    GG = product(G, G)
    if isinstance(U, EmbeddingSpec):
        emb = U
        if emb.target != GG:
            raise ValueError(f"U must embed in {GG.name}")
    else:
        eH, eK = U
        src = product(eH.source, eK.source)
        rows = [tuple(r) + (0,) * eK.source.torus_dim for r in eH.weights]
        rows += [(0,) * eH.source.torus_dim + tuple(r) for r in eK.weights]
        emb = EmbeddingSpec(src, GG, tuple(rows))
    return two_sided(GG, emb, diagonal_embedding(G), ring, negate)

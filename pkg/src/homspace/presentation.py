"""Poincare polynomials, ring presentations and duality / Euler checks.

Presentations are found by linear algebra degree by degree: a class is a new
generator when it is not in the span of products of lower generators, and
relations are the kernel of the free CGA on the generators mapping to
cohomology, reduced modulo the ideal of relations of lower degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cdga import Cdga, CohomologySlice
from .coeffring import EchelonBasis, rank_and_kernel, ExactMatrix
from .gca import EXT, POLY, FreeCga, Generator, GradedElement, ideal_span, \
    quotient_hilbert_function

__all__ = [
    "poincare_polynomial",
    "format_poincare",
    "RingPresentation",
    "ring_presentation",
    "MultiplicativeRefusal",
    "DualityReport",
    "duality_and_euler_checks",
    "finite_cohomology",
]


class MultiplicativeRefusal(ValueError):
    """Raised when only additive information is trustworthy."""


def poincare_polynomial(slices: Sequence[CohomologySlice]) -> List[int]:
    """Coefficient n is dim H^n."""
    return [s.dimension for s in slices]


def format_poincare(coeffs: Sequence[int]) -> str:
    terms = []
    for n, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
        if n == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(terms) if terms else "0"


@dataclass
class RingPresentation:
    """k[generators] / (relations), valid through ``cap``."""

    generators: List[Tuple[str, int]]
    relations: List[GradedElement]
    cap: int
    complete: bool
    algebra: FreeCga = field(repr=False)
    betti: List[int] = field(default_factory=list)
    representatives: Dict[str, GradedElement] = field(default_factory=dict, repr=False)

    def relation_degrees(self) -> List[int]:
        return sorted(r.degree for r in self.relations)

    def hilbert_function(self, cap: Optional[int] = None) -> List[int]:
        return quotient_hilbert_function(self.algebra, self.relations,
                                         self.cap if cap is None else cap)

    def to_json(self) -> dict:
        return {
            "generators": [[n, d] for n, d in self.generators],
            "relations": [str(r) for r in self.relations],
            "complete": self.complete,
            "cap": self.cap,
        }

    def render(self) -> str:
        ring = self.algebra.ring.name
        polys = [n for n, d in self.generators if d % 2 == 0]
        exts = [n for n, d in self.generators if d % 2]
        parts = []
        if exts:
            parts.append("L[" + ", ".join(exts) + "]")
        if polys or not exts:
            parts.append(f"{ring}[" + ", ".join(polys) + "]")
        body = " (x) ".join(parts)
        if self.relations:
            body += " / (" + ", ".join(str(r) for r in self.relations) + ")"
        gens = ", ".join(f"{n} ({d})" for n, d in self.generators) or "none"
        scope = "complete" if self.complete else f"through degree {self.cap}"
        return f"{body}\n  generators: {gens}\n  {scope}"


def _name(degree: int, taken: set, prefix: str = "x") -> str:
    name = f"{prefix}{degree}"
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def finite_cohomology(model: Cdga, top: int) -> bool:
    """Whether H(model) vanishes above ``top``, for a Koszul-type model.

    H(P (x) L[z_j], dz_j = f_j) is finite dimensional exactly when P/(f_j)
    is, and its top degree is then the formal dimension
    sum |z_j| - sum (|x_i| - 1).  P/(f_j) is zero in all degrees above ``top``
    once it vanishes on a window of degrees above ``top`` as wide as the
    largest generator degree of P.
    """
    A = model.algebra
    words = set(model.word_generators)
    if not words:
        raise ValueError("not a Koszul-type model (no exterior word generators)")
    poly = [i for i in range(A.ngens) if i not in words]
    if any(A.generators[i].sort != POLY for i in poly):
        raise ValueError("the non-word generators must be polynomial")
    P = FreeCga(A.ring, [A.generators[i] for i in poly])
    images = []
    for j in sorted(words):
        terms = {}
        for m, c in model.gen_diffs[j].terms.items():
            if any(m[k] for k in words):
                raise ValueError("differential of a word generator leaves the polynomial part")
            terms[tuple(m[i] for i in poly)] = c
        images.append(P.element(terms))
    if not P.generators:
        return True
    width = max(g.degree for g in P.generators)
    formal = sum(A.generators[j].degree for j in words) - \
        sum(g.degree - 1 for g in P.generators)
    if formal != top:
        return False
    h0 = quotient_hilbert_function(P, images, top + width)
    return not any(h0[top + 1:])


def ring_presentation(model: Cdga, cap: int, top: Optional[int] = None,
                      slices: Optional[Sequence[CohomologySlice]] = None,
                      prefix: str = "x") -> RingPresentation:
    """Minimal presentation of H(model) through ``cap``.

    ``top`` is the degree above which cohomology is known to vanish (the
    manifold dimension); when cap >= top the presentation is completed with
    the relations needed above ``top`` and marked complete.  Characteristic 2
    is refused: there the cohomology of the model need not be the cohomology
    ring of the space.
    """
    ring = model.ring
    if not ring.is_field:
        raise ValueError("ring presentations need field coefficients")
    if ring.characteristic == 2:
        raise MultiplicativeRefusal(
            "additive only in characteristic 2: the Tor algebra can differ from the "
            "cohomology ring (U(2)/diag U(1) = SO(3) has Tor L[z1] (x) F2[y2]/(y2^2) "
            "but cohomology F2[x1]/(x1^4))")
    if top is None and getattr(model, "recipe", None) is not None:
        top = model.recipe.manifold_dimension
    if slices is None:
        slices = model.cohomology(cap)
    slices = list(slices)[:cap + 1]
    betti = [s.dimension for s in slices]
    A = model.algebra

    # generators, degree by degree
    gens: List[Tuple[str, int]] = []
    reps: List[GradedElement] = []
    taken: set = set()
    for n in range(1, cap + 1):
        sl = slices[n]
        if not sl.dimension:
            continue
        span = EchelonBasis(ring)
        if gens:
            lower = _free(ring, gens)
            for m in lower.basis(n):
                span.add(_vector(sl.class_of(_evaluate(lower, m, reps, A))))
        for k in range(sl.dimension):
            e = {k: ring(1)}
            if span.add(e):
                nm = _name(n, taken, prefix)
                gens.append((nm, n))
                reps.append(sl.representatives[k])

    F = _free(ring, gens)
    complete = top is not None and cap >= top and not any(betti[top + 1:])
    if complete and model.word_generators:
        complete = finite_cohomology(model, top)
    rel_cap = cap
    if complete:
        rel_cap = max(cap, top + max((d for _, d in gens), default=0))
    relations: List[GradedElement] = []
    for n in range(1, rel_cap + 1):
        basis = F.basis(n)
        if not basis:
            continue
        ideal = ideal_span(F, relations, n)
        if n <= cap:
            sl = slices[n]
            cols = [_vector(sl.class_of(_evaluate(F, m, reps, A))) for m in basis]
            mat = ExactMatrix.from_columns(ring, sl.dimension, cols)
            _, kernel = rank_and_kernel(mat)
        else:
            kernel = [{j: ring(1)} for j in range(len(basis))]  # H^n = 0 above top
        for vec in kernel:
            if ideal.add(dict(vec)):
                relations.append(F.from_vector(vec, n))

    pres = RingPresentation(gens, relations, cap, complete, F, betti,
                            dict(zip((g for g, _ in gens), reps)))
    got = pres.hilbert_function(cap)
    if got != betti:
        raise AssertionError(f"presentation Hilbert function {got} != Betti numbers {betti}")
    return pres


def _free(ring, gens: Sequence[Tuple[str, int]]) -> FreeCga:
    return FreeCga(ring, [Generator(nm, d, EXT if d % 2 else POLY) for nm, d in gens])


def _evaluate(F: FreeCga, m, reps: Sequence[GradedElement], A: FreeCga) -> GradedElement:
    """The product of representatives named by the exponent vector m."""
    x = A.one()
    for i, e in enumerate(m):
        for _ in range(e):
            x = x * reps[i]
    return x


def _vector(coords: Sequence) -> Dict[int, object]:
    return {i: c for i, c in enumerate(coords) if c}


@dataclass
class DualityReport:
    """Poincare duality and Euler characteristic checks on Betti numbers."""

    dimension: int
    palindromic: bool
    mismatches: List[int]
    euler: int
    expected_euler: Optional[int]

    @property
    def ok(self) -> bool:
        return self.palindromic and (self.expected_euler is None
                                     or self.euler == self.expected_euler)

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "palindromic": self.palindromic,
                "mismatches": self.mismatches, "euler": self.euler,
                "expected_euler": self.expected_euler, "ok": self.ok}


def duality_and_euler_checks(betti: Sequence[int], dimension: int,
                             expected_euler: Optional[int] = None) -> DualityReport:
    """Check b_n = b_(dim - n) and compare chi with an expected value.

    ``betti`` must reach the dimension (a complete run).
    """
    if len(betti) <= dimension:
        raise ValueError(f"need Betti numbers through degree {dimension}")
    if any(betti[n] for n in range(dimension + 1, len(betti))):
        raise ValueError("cohomology above the manifold dimension")
    mism = [n for n in range(dimension + 1) if betti[n] != betti[dimension - n]]
    chi = sum((-1) ** n * b for n, b in enumerate(betti[:dimension + 1]))
    return DualityReport(dimension, not mism, mism, chi, expected_euler)

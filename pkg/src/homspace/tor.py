"""Bigraded Tor over polynomial algebras: Koszul path, bar path, regularity.

Grading: a class of resolution degree p <= 0 (minus the number of exterior
or bar letters) and internal degree q sits in total degree n = p + q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .barcalc import (CochainComplex, Dga, DgModule, bar, tautological_cochain,
                      twisted_tensor)
from .cdga import Cdga
from .gca import POLY, AlgebraMap, FreeCga, GradedElement, quotient_hilbert_function
from .models import ModelRecipe, build_model, koszul_complex

__all__ = [
    "TorTable",
    "koszul_tor",
    "model_tor",
    "bar_tor",
    "recipe_bar_tor",
    "recipe_koszul_tor",
    "regular_sequence_check",
    "RegularityVerdict",
    "compare_totals",
]


@dataclass
class TorTable:
    """Dimensions of Tor by (p, q) and by total degree n = p + q <= cap."""

    entries: Dict[Tuple[int, int], int]
    total_dims: Dict[int, int]
    cap: int
    method: str = ""
    ring: str = "Q"
    bigraded: bool = True
    model: Optional[Cdga] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.bigraded:
            sums: Dict[int, int] = {}
            for (p, q), d in self.entries.items():
                if p > 0 or q < 0:
                    raise ValueError(f"entry at (p, q) = ({p}, {q}) out of range")
                sums[p + q] = sums.get(p + q, 0) + d
            for n in range(self.cap + 1):
                if sums.get(n, 0) != self.total_dims.get(n, 0):
                    raise ValueError(f"entries do not add up to the total in degree {n}")

    def totals(self) -> List[int]:
        return [self.total_dims.get(n, 0) for n in range(self.cap + 1)]

    def support(self) -> List[int]:
        return [n for n in range(self.cap + 1) if self.total_dims.get(n, 0)]

    def columns(self) -> List[int]:
        """Resolution degrees p carrying a nonzero entry."""
        return sorted({p for (p, _), d in self.entries.items() if d})

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "ring": self.ring,
            "cap": self.cap,
            "bigraded": self.bigraded,
            "entries": [{"p": p, "q": q, "dim": d} for (p, q), d in sorted(self.entries.items())],
            "total_dims": [{"n": n, "dim": self.total_dims.get(n, 0)}
                           for n in range(self.cap + 1)],
        }

    def render(self) -> str:
        """Second-quadrant grid: columns p (<= 0), rows q (top = largest)."""
        lines = [f"Tor ({self.method}, {self.ring}), total degree <= {self.cap}"]
        if self.bigraded and self.entries:
            ps = range(min(p for p, _ in self.entries), 1)
            qs = sorted({q for _, q in self.entries}, reverse=True)
            width = max(3, max(len(str(d)) for d in self.entries.values()) + 1)
            lines.append("  q \\ p " + "".join(f"{p:>{width}}" for p in ps))
            for q in qs:
                row = "".join(f"{self.entries.get((p, q), 0) or '.':>{width}}" for p in ps)
                lines.append(f"{q:>7} " + row)
        lines.append("totals: " + " ".join(f"{n}:{d}" for n, d in enumerate(self.totals()) if d))
        return "\n".join(lines)


def compare_totals(a: TorTable, b: TorTable) -> List[int]:
    """Degrees (through the smaller cap) where the two tables disagree."""
    cap = min(a.cap, b.cap)
    return [n for n in range(cap + 1) if a.total_dims.get(n, 0) != b.total_dims.get(n, 0)]


def _table_from_complex(cx: CochainComplex, cap: int, method: str, ring: str,
                        threads: int = 1) -> TorTable:
    blocks = cx.bigraded_dims(0, cap, threads)
    entries: Dict[Tuple[int, int], int] = {}
    totals: Dict[int, int] = {}
    for (w, n), d in blocks.items():
        entries[(-w, n + w)] = d
        totals[n] = totals.get(n, 0) + d
    return TorTable(entries, totals, cap, method, ring)


def model_tor(model: Cdga, cap: int, threads: int = 1) -> TorTable:
    """Bigraded cohomology of a Koszul-type model (word length = exterior count)."""
    if not model.ring.is_field:
        raise ValueError("field required")
    alg = model.algebra
    basis = {n: alg.basis(n) for n in range(cap + 2)}
    cx = CochainComplex(model.ring, basis, lambda m: model._d_monomial(m).terms, cap + 1,
                        weight=model.word_length)
    table = _table_from_complex(cx, cap, "koszul", model.ring.name, threads)
    table.model = model
    return table


def koszul_tor(base: FreeCga, left: Optional[AlgebraMap], right: AlgebraMap, cap: int,
               threads: int = 1, negate: bool = False) -> TorTable:
    """Tor over k[x_j] of (M, N) through the Koszul complex M (x) L[z_j] (x) N.

    ``left`` is mu: k[x_j] -> M (None for M = k), ``right`` is nu: k[x_j] -> N.
    The returned table keeps the model, whose cohomology ring is Tor.
    """
    for f in (left, right):
        if f is None:
            continue
        for img in f.images:
            if img and img.degree is None:
                raise ValueError(f"structure map is not homogeneous: {img}")
    return model_tor(koszul_complex(base, left, right, negate), cap, threads)


def bar_tor(A: Dga, M: Optional[DgModule], N: Optional[DgModule], cap: int,
            word_cap: Optional[int] = None, threads: int = 1) -> TorTable:
    """H of the two-sided bar complex M (x) B A (x) N through total degree cap.

    Either module may be None for the ground ring.  When A, M and N have zero
    differential the table is bigraded by bar word length.
    """
    if not A.ring.is_field:
        raise ValueError("bar_tor needs field coefficients")
    for X in (M, N):
        if X is not None and not X.complete and X.cap < cap + 1:
            raise ValueError(f"module stored through {X.cap}; need {cap + 1}")
    B = bar(A, cap + 1, word_cap)
    t = tautological_cochain(A, B)
    cx = twisted_tensor(B, t if N is not None else None, N, M, t if M is not None else None,
                        cap=cap + 1, check=False)
    pure = A.is_formal_zero and all(X is None or X.is_formal_zero for X in (M, N))
    if pure and cx.weight is not None:
        return _table_from_complex(cx, cap, "bar", A.ring.name, threads)
    dims = cx.cohomology_dims(0, cap, threads)
    return TorTable({}, {n: d for n, d in enumerate(dims)}, cap, "bar", A.ring.name,
                    bigraded=False)


def recipe_bar_tor(recipe: ModelRecipe, cap: int, threads: int = 1) -> TorTable:
    """Tor_{H(BG)}(H(BH), H(BK)) for a recipe, computed through the bar complex."""
    from .catalog import restriction_map
    ring = recipe.ring
    HBG = recipe.G.classifying_algebra(ring)
    A = Dga.from_cdga(HBG, cap + 3, complete=not HBG.generators, name=f"H(B{recipe.G.name})")
    N = DgModule.from_algebra_map(A, restriction_map(recipe.embed_K, ring, source_alg=HBG),
                                  "left", cap + 2, name=f"H(B{recipe.K.name})")
    M = None
    if recipe.H.generator_names:
        M = DgModule.from_algebra_map(A, restriction_map(recipe.embed_H, ring, source_alg=HBG),
                                      "right", cap + 2, name=f"H(B{recipe.H.name})")
    return bar_tor(A, M, N, cap, threads=threads)


def recipe_koszul_tor(recipe: ModelRecipe, cap: int, threads: int = 1) -> TorTable:
    return model_tor(build_model(recipe), cap, threads)


@dataclass
class RegularityVerdict:
    regular: bool
    first_failure: Optional[int]
    quotient: List[int]
    expected: List[int]

    def __bool__(self) -> bool:
        return self.regular

    def to_json(self) -> dict:
        return {"regular": self.regular, "first_failure": self.first_failure,
                "quotient_hilbert": self.quotient, "expected": self.expected}


def regular_sequence_check(B: FreeCga, images: Sequence[GradedElement], cap: int,
                           degrees: Optional[Sequence[int]] = None) -> RegularityVerdict:
    """Compare HS(B/(f)) with HS(B) * prod(1 - t^|f_j|) through ``cap``.

    ``degrees`` gives the degrees of the f_j when some of them are zero.
    """
    if any(g.sort != POLY for g in B.generators):
        raise ValueError("regularity check needs a polynomial algebra")
    if degrees is None:
        degrees = []
        for f in images:
            if f.degree is None:
                raise ValueError("give degrees for zero or inhomogeneous elements")
            degrees.append(f.degree)
    expected = B.hilbert_series(cap)
    for d in degrees:
        for n in range(cap, d - 1, -1):
            expected[n] -= expected[n - d]
    quotient = quotient_hilbert_function(B, list(images), cap)
    for n in range(cap + 1):
        if quotient[n] != expected[n]:
            return RegularityVerdict(False, n, quotient, expected)
    return RegularityVerdict(True, None, quotient, expected)

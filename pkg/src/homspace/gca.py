"""Free graded-commutative algebras: polynomial on even generators,
exterior on odd ones, with Koszul signs.

Monomials are exponent tuples indexed by the generator list.  Exterior
factors are kept in generator-list order, so a product of two monomials is
a single monomial times a sign counted from the transpositions of odd
factors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .coeffring import CoefficientRing

__all__ = [
    "POLY",
    "EXT",
    "Generator",
    "Monomial",
    "FreeCga",
    "GradedElement",
    "AlgebraMap",
    "AlgebraMismatch",
    "NotCgaMap",
    "ideal_span",
    "quotient_hilbert_function",
]

POLY = "polynomial"
EXT = "exterior"

Monomial = Tuple[int, ...]


class AlgebraMismatch(ValueError):
    pass


class NotCgaMap(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    sort: str = ""

    def __post_init__(self):
        if self.degree <= 0:
            raise ValueError(f"generator {self.name} must have positive degree")
        if not self.sort:
            object.__setattr__(self, "sort", EXT if self.degree % 2 else POLY)
        if self.sort not in (POLY, EXT):
            raise ValueError(f"unknown sort {self.sort!r}")

    def to_json(self) -> dict:
        return {"name": self.name, "degree": self.degree, "sort": self.sort}


class FreeCga:
    """Free graded-commutative algebra over a coefficient ring.

    In characteristic other than 2 the sort of a generator is forced by the
    parity of its degree.  In characteristic 2 an odd generator may be
    declared polynomial, in which case its square survives.
    """

    def __init__(self, ring: CoefficientRing, generators: Sequence[Generator]):
        self.ring = ring
        self.generators: Tuple[Generator, ...] = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be unique: {names}")
        for g in self.generators:
            if g.sort == EXT and g.degree % 2 == 0:
                raise ValueError(f"exterior generator {g.name} must have odd degree")
            if g.sort == POLY and g.degree % 2 == 1 and ring.characteristic != 2:
                raise ValueError(
                    f"odd generator {g.name} can only be polynomial in characteristic 2")
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self.degrees = tuple(g.degree for g in self.generators)
        self.exterior = tuple(g.sort == EXT for g in self.generators)
        self.odd = tuple(i for i, g in enumerate(self.generators) if g.degree % 2)
        self.char2_squares = ring.characteristic == 2 and any(
            g.sort == POLY and g.degree % 2 for g in self.generators)
        self._basis_cache: Dict[int, List[Monomial]] = {}
        self._basis_index: Dict[int, Dict[Monomial, int]] = {}

    # -- identity ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return (isinstance(other, FreeCga) and self.ring == other.ring
                and self.generators == other.generators)

    def __hash__(self) -> int:
        return hash((self.ring, self.generators))

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.name}:{g.degree}{'e' if g.sort == EXT else ''}"
                         for g in self.generators)
        return f"FreeCga({self.ring}; {gens})"

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def to_json(self) -> dict:
        return {"ring": self.ring.name, "generators": [g.to_json() for g in self.generators]}

    # -- elements ------------------------------------------------------------
    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def one(self) -> "GradedElement":
        return self.scalar(1)

    def scalar(self, c) -> "GradedElement":
        c = self.ring(c)
        return GradedElement(self, {self.unit_monomial(): c} if c != 0 else {})

    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def gen(self, name: str) -> "GradedElement":
        e = [0] * self.ngens
        e[self.index[name]] = 1
        return GradedElement(self, {tuple(e): self.ring(1)})

    def gens(self) -> List["GradedElement"]:
        return [self.gen(g.name) for g in self.generators]

    def monomial(self, mono: Monomial, coeff=1) -> "GradedElement":
        c = self.ring(coeff)
        return GradedElement(self, {tuple(mono): c} if c != 0 else {})

    def element(self, terms: Mapping[Monomial, object]) -> "GradedElement":
        out = {}
        for m, c in terms.items():
            c = self.ring(c)
            if c != 0:
                out[tuple(m)] = c
        return GradedElement(self, out)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    # -- monomial arithmetic -------------------------------------------------
    def mono_mul(self, a: Monomial, b: Monomial) -> Tuple[int, Optional[Monomial]]:
        """Return ``(sign, a*b)``; the product is None when it vanishes."""
        ext = self.exterior
        prod = []
        for i in range(len(a)):
            e = a[i] + b[i]
            if e > 1 and ext[i]:
                return 0, None
            prod.append(e)
        sign = 0
        odd = self.odd
        if odd and self.ring.characteristic != 2:
            # move each odd factor of b left past the odd factors of a with larger index
            later = 0
            for i in reversed(odd):
                if b[i]:
                    sign += b[i] * later
                later += a[i]
        return (-1 if sign % 2 else 1), tuple(prod)

    # -- degreewise bases ----------------------------------------------------
    def basis(self, n: int) -> List[Monomial]:
        """Monomials of degree n, lexicographically descending in the
        generator order (so s^2, st, t^2)."""
        if n < 0:
            return []
        cached = self._basis_cache.get(n)
        if cached is not None:
            return cached
        out: List[Monomial] = []
        degs = self.degrees
        ext = self.exterior
        k = self.ngens

        def rec(i: int, rem: int, acc: List[int]):
            if i == k:
                if rem == 0:
                    out.append(tuple(acc))
                return
            d = degs[i]
            top = 1 if ext[i] else rem // d
            top = min(top, rem // d)
            for e in range(top, -1, -1):
                acc.append(e)
                rec(i + 1, rem - e * d, acc)
                acc.pop()

        rec(0, n, [])
        self._basis_cache[n] = out
        self._basis_index[n] = {m: j for j, m in enumerate(out)}
        return out

    def basis_index(self, n: int) -> Dict[Monomial, int]:
        self.basis(n)
        return self._basis_index[n]

    def hilbert_series(self, cap: int) -> List[int]:
        """Coefficients of prod_poly 1/(1-t^d) * prod_ext (1+t^d) through t^cap."""
        series = [0] * (cap + 1)
        series[0] = 1
        for g in self.generators:
            d = g.degree
            if g.sort == EXT:
                for n in range(cap, d - 1, -1):
                    series[n] += series[n - d]
            else:
                for n in range(d, cap + 1):
                    series[n] += series[n - d]
        return series

    # -- vectors -------------------------------------------------------------
    def to_vector(self, x: "GradedElement", n: int) -> Dict[int, object]:
        idx = self.basis_index(n)
        out = {}
        for m, c in x.terms.items():
            j = idx.get(m)
            if j is None:
                raise ValueError(f"monomial {m} is not of degree {n}")
            out[j] = c
        return out

    def from_vector(self, vec: Mapping[int, object], n: int) -> "GradedElement":
        b = self.basis(n)
        return GradedElement(self, {b[j]: c for j, c in vec.items() if c != 0})

    # -- text ----------------------------------------------------------------
    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for g, e in zip(self.generators, m):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    _token = re.compile(r"\s*([+-])?\s*([^+-]+)")

    def parse(self, text: str) -> "GradedElement":
        """Parse strings like ``"x^2*z - 3/2*t1 + 1"``."""
        s = text.replace(" ", "")
        if not s:
            return self.zero()
        if s[0] not in "+-":
            s = "+" + s
        terms = re.findall(r"([+-])([^+-]+)", s)
        if "".join(a + b for a, b in terms) != s:
            raise ValueError(f"cannot parse {text!r}")
        total = self.zero()
        for sign, body in terms:
            coeff = Fraction(1)
            term = self.one()
            for factor in body.split("*"):
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coeff *= Fraction(factor)
                    continue
                name, _, power = factor.partition("^")
                if name not in self.index:
                    raise ValueError(f"unknown generator {name!r} in {text!r}")
                g = self.gen(name)
                for _ in range(int(power) if power else 1):
                    term = term * g
            if sign == "-":
                coeff = -coeff
            total = total + term * self.ring(coeff)
        return total


def _fmt_coeff(c) -> str:
    return str(c)


class GradedElement:
    """A finite sum of coefficient * monomial in a :class:`FreeCga`."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeCga, terms: Dict[Monomial, object]):
        self.alg = alg
        self.terms = terms

    # -- structure -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> Optional[int]:
        """The common degree of all monomials, or None (zero / inhomogeneous)."""
        degs = {self.alg.monomial_degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def homogeneous_parts(self) -> Dict[int, "GradedElement"]:
        parts: Dict[int, Dict[Monomial, object]] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.alg.monomial_degree(m), {})[m] = c
        return {d: GradedElement(self.alg, t) for d, t in parts.items()}

    def coefficient(self, mono: Monomial):
        return self.terms.get(tuple(mono), 0)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "GradedElement"):
        if other.alg is not self.alg and other.alg != self.alg:
            raise AlgebraMismatch("algebra mismatch")

    def __add__(self, other):
        if not isinstance(other, GradedElement):
            other = self.alg.scalar(other)
        self._check(other)
        norm = self.alg.ring.norm
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = norm(out.get(m, 0) + c)
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return GradedElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.alg.ring.norm
        return GradedElement(self.alg, {m: norm(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GradedElement):
            other = self.alg.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GradedElement":
        ring = self.alg.ring
        c = ring(c)
        if c == 0:
            return self.alg.zero()
        norm = ring.norm
        out = {}
        for m, x in self.terms.items():
            v = norm(x * c)
            if v != 0:
                out[m] = v
        return GradedElement(self.alg, out)

    def __mul__(self, other):
        if not isinstance(other, GradedElement):
            return self.scale(other)
        self._check(other)
        alg = self.alg
        norm = alg.ring.norm
        mono_mul = alg.mono_mul
        out: Dict[Monomial, object] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign, mc = mono_mul(ma, mb)
                if mc is None:
                    continue
                v = norm(out.get(mc, 0) + sign * ca * cb)
                if v == 0:
                    out.pop(mc, None)
                else:
                    out[mc] = v
        return GradedElement(alg, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedElement):
            return self.alg == other.alg and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self == self.alg.scalar(other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- text ----------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        alg = self.alg
        items = sorted(self.terms.items(),
                       key=lambda mc: (-alg.monomial_degree(mc[0]), tuple(-e for e in mc[0])))
        out = []
        for m, c in items:
            body = alg.format_monomial(m)
            neg = c < 0 if alg.ring.kind != "Fp" else False
            a = -c if neg else c
            if body == "1":
                term = _fmt_coeff(a)
            elif a == 1:
                term = body
            else:
                term = f"{_fmt_coeff(a)}*{body}"
            out.append(("- " if neg else "+ ") + term)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


class AlgebraMap:
    """Algebra map between free CGAs determined by generator images."""

    def __init__(self, source: FreeCga, target: FreeCga,
                 images: Mapping[str, GradedElement], check: bool = True):
        self.source = source
        self.target = target
        imgs = []
        for g in source.generators:
            if g.name not in images:
                raise ValueError(f"no image given for generator {g.name}")
            img = images[g.name]
            if img.alg != target:
                raise AlgebraMismatch("algebra mismatch")
            if check and img and img.degree != g.degree:
                raise NotCgaMap(
                    f"degree mismatch: {g.name} has degree {g.degree}, image {img}")
            if check and g.sort == EXT and g.degree % 2 and not (img * img).is_zero():
                raise NotCgaMap(f"not a CGA map: image of {g.name} squares to nonzero")
            imgs.append(img)
        self.images: Tuple[GradedElement, ...] = tuple(imgs)
        self._cache: Dict[Monomial, GradedElement] = {}

    def image_of(self, name: str) -> GradedElement:
        return self.images[self.source.index[name]]

    def on_monomial(self, m: Monomial) -> GradedElement:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        out = self.target.one()
        for img, e in zip(self.images, m):
            for _ in range(e):
                out = out * img
        self._cache[m] = out
        return out

    def __call__(self, x: GradedElement) -> GradedElement:
        if x.alg != self.source:
            raise AlgebraMismatch("algebra mismatch")
        out = self.target.zero()
        for m, c in x.terms.items():
            out = out + self.on_monomial(m).scale(c)
        return out

    def compose(self, first: "AlgebraMap") -> "AlgebraMap":
        """``self o first``."""
        return AlgebraMap(first.source, self.target,
                          {g.name: self(img) for g, img in zip(first.source.generators,
                                                               first.images)})

    @classmethod
    def identity(cls, alg: FreeCga) -> "AlgebraMap":
        return cls(alg, alg, {g.name: alg.gen(g.name) for g in alg.generators})


def ideal_span(alg: FreeCga, relations: Sequence[GradedElement], n: int):
    """Echelon basis (over a field) of the degree-n part of the ideal generated
    by homogeneous ``relations``."""
    from .coeffring import EchelonBasis
    ech = EchelonBasis(alg.ring)
    for r in relations:
        if r.is_zero():
            continue
        d = r.degree
        if d is None:
            raise ValueError(f"relation {r} is not homogeneous")
        if d > n:
            continue
        for m in alg.basis(n - d):
            ech.add(alg.to_vector(alg.monomial(m) * r, n))
    return ech


def quotient_hilbert_function(alg: FreeCga, relations: Sequence[GradedElement],
                              cap: int) -> List[int]:
    """dim (alg / (relations))_n for n = 0..cap."""
    return [len(alg.basis(n)) - len(ideal_span(alg, relations, n)) for n in range(cap + 1)]

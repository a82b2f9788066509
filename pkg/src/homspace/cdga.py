"""Free CGAs with a derivation differential, and their cohomology."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .coeffring import EchelonBasis, ExactMatrix, abelian_invariants, rank_and_kernel
from .gca import FreeCga, GradedElement, Monomial

__all__ = ["Cdga", "CohomologySlice", "IntegralSlice", "betti_numbers"]


class Cdga:
    """A free CGA with a degree +1 derivation given on generators."""

    def __init__(self, algebra: FreeCga, differential: Mapping[str, GradedElement],
                 word_generators: Sequence[str] = ()):
        self.algebra = algebra
        # generators counted by the resolution degree of a Koszul-type model
        self.word_generators: Tuple[int, ...] = tuple(algebra.index[g] for g in word_generators)
        imgs = []
        for g in algebra.generators:
            dx = differential.get(g.name, algebra.zero())
            if dx.alg != algebra:
                raise ValueError(f"differential of {g.name} lives in another algebra")
            if dx and dx.degree != g.degree + 1:
                raise ValueError(f"d({g.name}) = {dx} does not have degree {g.degree + 1}")
            imgs.append(dx)
        self.gen_diffs: Tuple[GradedElement, ...] = tuple(imgs)
        self._mono_cache: Dict[Monomial, GradedElement] = {}
        for g in algebra.generators:
            ddx = self.d(self.gen_diffs[algebra.index[g.name]])
            if ddx:
                raise ValueError(f"d^2 != 0 on generator {g.name}: d(d {g.name}) = {ddx}")

    @property
    def ring(self):
        return self.algebra.ring

    def __repr__(self) -> str:
        parts = [f"d{g.name} = {dx}" for g, dx in zip(self.algebra.generators, self.gen_diffs)
                 if dx]
        return f"Cdga({self.algebra!r}; {', '.join(parts) or 'd = 0'})"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.name,
            "generators": [g.to_json() for g in self.algebra.generators],
            "differentials": {g.name: str(dx) for g, dx in
                              zip(self.algebra.generators, self.gen_diffs)},
        }

    # -- the differential ----------------------------------------------------
    def _d_monomial(self, m: Monomial) -> GradedElement:
        hit = self._mono_cache.get(m)
        if hit is not None:
            return hit
        A = self.algebra
        out = A.zero()
        prefix = A.one()
        prefix_deg = 0
        for i, e in enumerate(m):
            if e == 0:
                continue
            g = A.generators[i]
            x = A.gen(g.name)
            dx = self.gen_diffs[i]
            # d(x^e) = e x^(e-1) dx when x is even or squares commute (char 2)
            if dx:
                piece = (x ** (e - 1)) * dx
                if e > 1:
                    piece = piece.scale(e)
                rest = [0] * len(m)
                for j in range(i + 1, len(m)):
                    rest[j] = m[j]
                term = prefix * piece * A.monomial(tuple(rest))
                if prefix_deg % 2:
                    term = -term
                out = out + term
            prefix = prefix * (x ** e)
            prefix_deg += e * g.degree
        self._mono_cache[m] = out
        return out

    def d(self, x: GradedElement) -> GradedElement:
        out = self.algebra.zero()
        for m, c in x.terms.items():
            dm = self._d_monomial(m)
            if dm:
                out = out + dm.scale(c)
        return out

    differential = d

    def matrix(self, n: int, basis_filter: Optional[Callable[[Monomial], bool]] = None,
               target_filter: Optional[Callable[[Monomial], bool]] = None):
        """Matrix of d: C^n -> C^(n+1) in the canonical monomial bases.

        Optional filters restrict source and target to sub-bases (used for
        bigraded slices); the caller guarantees d maps into the target span.
        Returns (matrix, source basis, target basis).
        """
        A = self.algebra
        src = [m for m in A.basis(n) if basis_filter is None or basis_filter(m)]
        tgt = [m for m in A.basis(n + 1) if target_filter is None or target_filter(m)]
        tidx = {m: i for i, m in enumerate(tgt)}
        ent = {}
        for j, m in enumerate(src):
            for mm, c in self._d_monomial(m).terms.items():
                i = tidx.get(mm)
                if i is None:
                    raise ValueError("differential leaves the requested target slice")
                ent[(i, j)] = c
        return ExactMatrix(self.ring, len(tgt), len(src), ent), src, tgt

    def check_d_squared(self, cap: int) -> bool:
        for n in range(cap + 1):
            for m in self.algebra.basis(n):
                if self.d(self._d_monomial(m)):
                    return False
        return True

    # -- cohomology ----------------------------------------------------------
    def cohomology(self, cap: int, threads: int = 1) -> List["CohomologySlice"]:
        """Cohomology in degrees 0..cap over a field, with representatives.

        Degree slices are independent; ``threads > 1`` builds them
        concurrently, the result order is always by degree.
        """
        if not self.ring.is_field:
            raise ValueError("field required")
        mats = {n: None for n in range(-1, cap + 1)}

        def build(n):
            return n, self.matrix(n)[0]

        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                for n, m in ex.map(build, list(mats)):
                    mats[n] = m
        else:
            for n in mats:
                mats[n] = build(n)[1]
        return [self._slice(n, mats[n - 1], mats[n]) for n in range(cap + 1)]

    def word_length(self, m: Monomial) -> int:
        return sum(m[i] for i in self.word_generators)

    def _slice(self, n: int, incoming: ExactMatrix, outgoing: ExactMatrix) -> "CohomologySlice":
        A = self.algebra
        _, kernel = rank_and_kernel(outgoing)
        ech = EchelonBasis(self.ring, track=True)
        for col in _columns(incoming):
            ech.add(col)
        slots: Dict[int, int] = {}
        reps = []
        for vec in kernel:
            idx = ech.count
            if ech.add(vec):
                slots[idx] = len(reps)
                reps.append(A.from_vector(vec, n))
        return CohomologySlice(n, len(reps), reps, self, ech, slots)

    def cohomology_over_Z(self, cap: int) -> List["IntegralSlice"]:
        """Additive invariants (free rank, torsion) over Z or Z[1/m].

        Only groups are computed; multiplicative structure over the integers
        is not determined by this model in general.
        """
        if self.ring.kind not in ("Z", "Zloc"):
            raise ValueError("integer or localized-integer coefficients required")
        out = []
        prev = self.matrix(-1)[0]
        for n in range(cap + 1):
            cur = self.matrix(n)[0]
            free, tors = abelian_invariants(self.ring, len(self.algebra.basis(n)), prev, cur)
            out.append(IntegralSlice(n, free, tors))
            prev = cur
        return out

    def euler_characteristic_of_chains(self, cap: int) -> int:
        return sum((-1) ** n * len(self.algebra.basis(n)) for n in range(cap + 1))


def _columns(m: ExactMatrix) -> List[Dict[int, object]]:
    cols: List[Dict[int, object]] = [dict() for _ in range(m.cols)]
    for (i, j), v in m.entries.items():
        cols[j][i] = v
    return cols


@dataclass
class CohomologySlice:
    """H^n of a Cdga over a field with chosen cocycle representatives."""

    degree: int
    dimension: int
    representatives: List[GradedElement]
    cdga: Cdga = field(repr=False)
    _echelon: EchelonBasis = field(repr=False)
    _slots: Dict[int, int] = field(repr=False)

    def class_of(self, cocycle: GradedElement) -> List:
        """Coordinates of the class of ``cocycle`` in the representative basis."""
        if cocycle.is_zero():
            return [0] * self.dimension
        if cocycle.degree != self.degree:
            raise ValueError("cocycle has the wrong degree")
        if self.cdga.d(cocycle):
            raise ValueError("not a cocycle")
        sol = self._echelon.solve(self.cdga.algebra.to_vector(cocycle, self.degree))
        if sol is None:
            raise ValueError("cocycle outside the span of cocycles")
        coords = [0] * self.dimension
        for k, c in sol.items():
            slot = self._slots.get(k)
            if slot is not None:
                coords[slot] = c
        return coords

    def is_coboundary(self, cocycle: GradedElement) -> bool:
        return all(c == 0 for c in self.class_of(cocycle))


@dataclass(frozen=True)
class IntegralSlice:
    degree: int
    free_rank: int
    torsion: Tuple[int, ...]

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def betti_numbers(slices: Sequence[CohomologySlice]) -> List[int]:
    return [s.dimension for s in slices]

"""Bar and cobar constructions, twisting cochains and twisted tensor products.

Everything is truncated at an explicit degree cap.  Elements are sparse
dicts ``{basis label: coefficient}``; labels are arbitrary hashables (strings
for algebras built from free CGAs, tuples for bar and cobar words).

Sign conventions (cohomological grading, desuspension lowers degree by one):

* bar differential on m[a1|...|ap]n with e_i = |m| + sum_{j<i}(|a_j| - 1)::

      d = dm[..]n - sum_i (-1)^e_i m[..|da_i|..]n + (-1)^e_{p+1} m[..]dn
          + (-1)^|m| m.a1[a2|..]n
          + sum_i (-1)^(e_i + |a_i| - 1) m[..|a_i a_(i+1)|..]n
          - (-1)^e_p m[..|a_(p-1)] a_p.n

* a twisting cochain t: C -> A has degree +1 and satisfies
  d_A t + t d_C = t u t where (t u t)(c) = sum (-1)^|c'| t(c') t(c'').
* twisted tensor product M (x) C (x) N: tensor differential plus
  (-1)^|m| m t(c') (x) c'' (x) n minus (-1)^(|m| + |c'|) m (x) c' (x) t(c'') n.
* cobar: d(sc) = -s(dc) + sum (-1)^|c'| sc' sc'' over the reduced coproduct.

All of these are checked (d^2 = 0, chain-map identities) by the test-suite
rather than trusted.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .coeffring import QQ, CoefficientRing, EchelonBasis, ExactMatrix, rank
from .gca import AlgebraMap, FreeCga

__all__ = [
    "Vec",
    "Dga",
    "Dgc",
    "DgModule",
    "CochainComplex",
    "TwistingCochain",
    "CheckResult",
    "NotFinite",
    "bar",
    "cobar",
    "tautological_cochain",
    "check_twisting_cochain",
    "twisted_tensor",
    "tensor_dga",
    "tensor_dgc",
    "shuffle_map",
    "check_shuffle_map",
    "cobar_counit",
    "check_counit",
]

Label = Hashable
Vec = Dict[Label, object]


class NotFinite(ValueError):
    pass


def _acc(out: Vec, vec: Mapping[Label, object], c, ring: CoefficientRing) -> None:
    """out += c * vec, in place."""
    if c == 0:
        return
    norm = ring.norm
    for k, x in vec.items():
        v = norm(out.get(k, 0) + c * x)
        if v == 0:
            out.pop(k, None)
        else:
            out[k] = v


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# Algebras, coalgebras, modules
# ---------------------------------------------------------------------------


class Dga:
    """A connected augmented DGA, stored degreewise through ``cap``.

    Products landing above ``cap`` are set to zero, so a stored Dga is the
    quotient by everything above the cap.  ``complete`` records that this
    quotient is the algebra itself (nothing lives above the cap).
    """

    def __init__(self, ring: CoefficientRing, degrees: Mapping[Label, int], unit: Label,
                 product: Callable[[Label, Label], Vec],
                 differential: Optional[Mapping[Label, Vec]] = None,
                 cap: Optional[int] = None, complete: bool = True, name: str = ""):
        self.ring = ring
        self.deg: Dict[Label, int] = dict(degrees)
        self.unit = unit
        self.cap = max(self.deg.values()) if cap is None else cap
        self.complete = complete
        self.name = name
        if self.deg.get(unit) != 0:
            raise ValueError("the unit must be a basis element of degree 0")
        if any(d == 0 and l != unit for l, d in self.deg.items()) or min(self.deg.values()) < 0:
            raise ValueError("only connected algebras (A^0 = k, A^<0 = 0) are supported")
        self.basis: Dict[int, List[Label]] = {}
        for l, d in self.deg.items():
            if d <= self.cap:
                self.basis.setdefault(d, []).append(l)
        self._product = product
        self._mul: Dict[Tuple[Label, Label], Vec] = {}
        self._d: Dict[Label, Vec] = {l: dict(v) for l, v in (differential or {}).items() if v}
        self.monomials: Dict[Label, object] = {}

    def __repr__(self) -> str:
        return f"Dga({self.name or '?'}, cap={self.cap}, dims={self.dims()})"

    def dims(self) -> List[int]:
        return [len(self.basis.get(n, [])) for n in range(self.cap + 1)]

    def reduced(self, n: int) -> List[Label]:
        return [] if n == 0 else self.basis.get(n, [])

    @property
    def is_formal_zero(self) -> bool:
        """True when the differential vanishes identically."""
        return not self._d

    # -- structure ---------------------------------------------------------
    def mul_basis(self, a: Label, b: Label) -> Vec:
        if a == self.unit:
            return {b: self.ring(1)}
        if b == self.unit:
            return {a: self.ring(1)}
        if self.deg[a] + self.deg[b] > self.cap:
            return {}
        key = (a, b)
        hit = self._mul.get(key)
        if hit is None:
            hit = {k: v for k, v in self._product(a, b).items() if v != 0}
            self._mul[key] = hit
        return hit

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            for b, y in v.items():
                _acc(out, self.mul_basis(a, b), self.ring.norm(x * y), self.ring)
        return out

    def d_basis(self, a: Label) -> Vec:
        return self._d.get(a, {})

    def d(self, u: Vec) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            _acc(out, self.d_basis(a), x, self.ring)
        return out

    def augmentation(self, u: Vec):
        return u.get(self.unit, 0)

    def degree_of(self, u: Vec) -> Optional[int]:
        ds = {self.deg[a] for a in u}
        return ds.pop() if len(ds) == 1 else None

    # -- construction ------------------------------------------------------
    @classmethod
    def ground(cls, ring: CoefficientRing = QQ) -> "Dga":
        return cls(ring, {"1": 0}, "1", lambda a, b: {}, cap=0, complete=True, name="k")

    @classmethod
    def from_cdga(cls, source, cap: int, complete: Optional[bool] = None,
                  name: str = "") -> "Dga":
        """Quotient of a free CGA (or a Cdga on one) by everything above ``cap``."""
        from .cdga import Cdga
        if isinstance(source, Cdga):
            alg, dfun = source.algebra, source._d_monomial
        else:
            alg, dfun = source, None
        ring = alg.ring
        lab: Dict[object, str] = {}
        deg: Dict[str, int] = {}
        for n in range(cap + 1):
            for m in alg.basis(n):
                s = alg.format_monomial(m)
                lab[m] = s
                deg[s] = n
        mono = {s: m for m, s in lab.items()}

        def product(a, b):
            sgn, m = alg.mono_mul(mono[a], mono[b])
            if m is None or m not in lab:
                return {}
            return {lab[m]: ring(sgn)}

        diff = {}
        if dfun is not None:
            for m, s in lab.items():
                dm = dfun(m)
                diff[s] = {lab[k]: v for k, v in dm.terms.items() if k in lab}
        if complete is None:
            complete = _finite_top(alg, cap)
        out = cls(ring, deg, lab[alg.unit_monomial()], product, diff, cap=cap, complete=complete,
                  name=name or repr(alg))
        out.monomials = mono
        out.free_algebra = alg
        return out

    @classmethod
    def from_table(cls, ring: CoefficientRing, degrees: Mapping[Label, int], unit: Label,
                   table: Mapping[Tuple[Label, Label], Vec],
                   differential: Optional[Mapping[Label, Vec]] = None,
                   cap: Optional[int] = None, complete: bool = True, name: str = "") -> "Dga":
        tab = {k: dict(v) for k, v in table.items()}
        return cls(ring, degrees, unit, lambda a, b: tab.get((a, b), {}), differential,
                   cap, complete, name)

    def table(self) -> Dict[Tuple[Label, Label], Vec]:
        out = {}
        labels = [l for n in sorted(self.basis) for l in self.basis[n] if n > 0]
        for a in labels:
            for b in labels:
                v = self.mul_basis(a, b)
                if v:
                    out[(a, b)] = v
        return out

    def to_json(self) -> dict:
        return {
            "ring": self.ring.name,
            "cap": self.cap,
            "complete": self.complete,
            "unit": str(self.unit),
            "basis": [[str(l), self.deg[l]] for n in sorted(self.basis) for l in self.basis[n]],
            "products": [[str(a), str(b), str(c), str(x)] for (a, b), v in self.table().items()
                         for c, x in v.items()],
            "differential": [[str(a), str(c), str(x)] for a, v in self._d.items()
                             for c, x in v.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Dga":
        from .coeffring import parse_ring
        ring = parse_ring(obj.get("ring", "Q"))
        deg = {str(l): int(d) for l, d in obj["basis"]}
        table: Dict[Tuple[Label, Label], Vec] = {}
        for a, b, c, x in obj.get("products", []):
            table.setdefault((a, b), {})[c] = ring(x)
        diff: Dict[Label, Vec] = {}
        for a, c, x in obj.get("differential", []):
            diff.setdefault(a, {})[c] = ring(x)
        return cls.from_table(ring, deg, obj.get("unit", "1"), table, diff,
                              obj.get("cap"), obj.get("complete", True), obj.get("name", ""))

    # -- verification ------------------------------------------------------
    def check(self) -> "CheckResult":
        """Associativity, Leibniz rule and d^2 = 0 on all stored basis elements."""
        labels = [l for n in sorted(self.basis) for l in self.basis[n]]
        for a in labels:
            da = self.d_basis(a)
            if da and self.degree_of(da) not in (None, self.deg[a] + 1):
                return CheckResult(False, f"d({a}) has the wrong degree")
            if self.d(da):
                return CheckResult(False, f"d^2({a}) != 0")
        for a in labels:
            for b in labels:
                if self.deg[a] + self.deg[b] > self.cap:
                    continue
                ab = {a: 1}
                lhs = self.d(self.mul(ab, {b: 1}))
                rhs = self.mul(self.d(ab), {b: 1})
                _acc(rhs, self.mul(ab, self.d({b: 1})), _sign(self.deg[a]), self.ring)
                if self.deg[a] + self.deg[b] + 1 <= self.cap and lhs != rhs:
                    return CheckResult(False, f"Leibniz rule fails on ({a}, {b})")
                for c in labels:
                    if self.deg[a] + self.deg[b] + self.deg[c] > self.cap:
                        continue
                    x = self.mul(self.mul({a: 1}, {b: 1}), {c: 1})
                    y = self.mul({a: 1}, self.mul({b: 1}, {c: 1}))
                    if x != y:
                        return CheckResult(False, f"associativity fails on ({a}, {b}, {c})")
        return CheckResult(True, "")

    def cohomology_dims(self, top: Optional[int] = None) -> List[int]:
        """Cohomology dims through ``top`` (default: the valid range)."""
        top = self.valid_top() if top is None else top
        return self.as_complex().cohomology_dims(0, top)

    def valid_top(self) -> int:
        return self.cap if self.complete else self.cap - 1

    def as_complex(self) -> "CochainComplex":
        # a complete algebra has nothing above the cap, so d out of the top is 0
        return CochainComplex(self.ring, {n: list(v) for n, v in self.basis.items()},
                              self.d_basis, self.cap, bounded=self.complete)


def _finite_top(alg: FreeCga, cap: int) -> bool:
    """Whether the free CGA vanishes above ``cap`` (only exterior generators)."""
    if not all(alg.exterior):
        return False
    return sum(alg.degrees) <= cap


@dataclass
class CheckResult:
    ok: bool
    message: str = ""
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


class Dgc:
    """A coaugmented DG coalgebra, stored degreewise through ``cap``.

    ``coproduct(c)`` returns the full coproduct as a list of
    ``(coefficient, left, right)``; ``counit_label`` spans degree 0.
    The differential is only required on degrees ``< cap``.
    """

    def __init__(self, ring: CoefficientRing, degrees: Mapping[Label, int], counit_label: Label,
                 coproduct: Callable[[Label], List[Tuple[object, Label, Label]]],
                 differential: Callable[[Label], Vec], cap: int, name: str = ""):
        self.ring = ring
        self.deg = dict(degrees)
        self.one = counit_label
        self._coproduct = coproduct
        self._dfun = differential
        self._dcache: Dict[Label, Vec] = {}
        self.cap = cap
        self.name = name
        self.basis: Dict[int, List[Label]] = {}
        for l, d in self.deg.items():
            self.basis.setdefault(d, []).append(l)

    def __repr__(self) -> str:
        return f"Dgc({self.name or '?'}, cap={self.cap})"

    def dims(self) -> List[int]:
        return [len(self.basis.get(n, [])) for n in range(self.cap + 1)]

    def coproduct(self, c: Label) -> List[Tuple[object, Label, Label]]:
        return self._coproduct(c)

    def reduced_coproduct(self, c: Label) -> List[Tuple[object, Label, Label]]:
        return [(x, a, b) for x, a, b in self._coproduct(c) if a != self.one and b != self.one]

    def d_basis(self, c: Label) -> Vec:
        hit = self._dcache.get(c)
        if hit is None:
            hit = self._dfun(c)
            self._dcache[c] = hit
        return hit

    def d(self, u: Vec) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            _acc(out, self.d_basis(a), x, self.ring)
        return out

    def as_complex(self) -> "CochainComplex":
        return CochainComplex(self.ring, self.basis, self.d_basis, self.cap)

    def cohomology_dims(self, top: Optional[int] = None) -> List[int]:
        top = self.cap - 1 if top is None else top
        return self.as_complex().cohomology_dims(0, top)

    def check(self) -> CheckResult:
        """Coassociativity, counit laws and d^2 = 0 through the cap."""
        r = self.ring
        for n in sorted(self.basis):
            for c in self.basis[n]:
                left: Dict[Tuple, object] = {}
                right: Dict[Tuple, object] = {}
                cl: Vec = {}
                cr: Vec = {}
                for x, a, b in self.coproduct(c):
                    if a == self.one:
                        _acc(cl, {b: 1}, x, r)
                    if b == self.one:
                        _acc(cr, {a: 1}, x, r)
                    for y, b1, b2 in self.coproduct(b):
                        _acc(left, {(a, b1, b2): 1}, r.norm(x * y), r)
                    for y, a1, a2 in self.coproduct(a):
                        _acc(right, {(a1, a2, b): 1}, r.norm(x * y), r)
                if left != right:
                    return CheckResult(False, f"coassociativity fails on {c}", c)
                if cl != {c: 1} or cr != {c: 1}:
                    return CheckResult(False, f"counit law fails on {c}", c)
                if n < self.cap - 1 and self.d(self.d_basis(c)):
                    return CheckResult(False, f"d^2({c}) != 0", c)
        return CheckResult(True)


class DgModule:
    """A DG module over a Dga, stored through ``cap``.

    ``side`` is ``"left"`` (action a.n) or ``"right"`` (action m.a);
    ``act(x, a)`` returns x.a for right modules and a.x for left ones.
    """

    def __init__(self, algebra: Dga, side: str, degrees: Mapping[Label, int],
                 action: Callable[[Label, Label], Vec],
                 differential: Optional[Mapping[Label, Vec]] = None,
                 cap: Optional[int] = None, name: str = "", complete: bool = False):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.algebra = algebra
        self.ring = algebra.ring
        self.side = side
        self.deg = dict(degrees)
        self.cap = max(self.deg.values()) if cap is None else cap
        self._action = action
        self._cache: Dict[Tuple[Label, Label], Vec] = {}
        self._d = {l: dict(v) for l, v in (differential or {}).items() if v}
        self.name = name
        self.complete = complete
        self.basis: Dict[int, List[Label]] = {}
        for l, d in self.deg.items():
            self.basis.setdefault(d, []).append(l)

    def __repr__(self) -> str:
        return f"DgModule({self.name or '?'}, {self.side}, cap={self.cap})"

    def act_basis(self, x: Label, a: Label) -> Vec:
        if a == self.algebra.unit:
            return {x: self.ring(1)}
        if self.deg[x] + self.algebra.deg[a] > self.cap:
            return {}
        key = (x, a)
        hit = self._cache.get(key)
        if hit is None:
            hit = {k: v for k, v in self._action(x, a).items() if v != 0}
            self._cache[key] = hit
        return hit

    def act(self, x: Vec, a: Vec) -> Vec:
        out: Vec = {}
        for l, c in x.items():
            for b, y in a.items():
                _acc(out, self.act_basis(l, b), self.ring.norm(c * y), self.ring)
        return out

    def d_basis(self, x: Label) -> Vec:
        return self._d.get(x, {})

    @property
    def is_formal_zero(self) -> bool:
        return not self._d

    @classmethod
    def ground(cls, algebra: Dga, side: str) -> "DgModule":
        """k with the action through the augmentation."""
        return cls(algebra, side, {"1": 0}, lambda x, a: {}, cap=0, name="k", complete=True)

    @classmethod
    def regular(cls, algebra: Dga, side: str) -> "DgModule":
        """A acting on itself."""
        if side == "left":
            act = lambda x, a: algebra.mul_basis(a, x)  # noqa: E731
        else:
            act = lambda x, a: algebra.mul_basis(x, a)  # noqa: E731
        return cls(algebra, side, algebra.deg, act, algebra._d, algebra.cap, name="A",
                   complete=algebra.complete)

    @classmethod
    def from_algebra_map(cls, algebra: Dga, f: AlgebraMap, side: str, cap: int,
                         name: str = "") -> "DgModule":
        """The target B of f: k[x] -> B as a module over ``algebra`` (a Dga
        built by :meth:`Dga.from_cdga` from the source of f), truncated at cap."""
        B = f.target
        src = getattr(algebra, "free_algebra", None)
        if src != f.source:
            raise ValueError("the algebra must be built from the source of the map")
        lab: Dict[object, str] = {}
        deg: Dict[str, int] = {}
        for n in range(cap + 1):
            for m in B.basis(n):
                s = B.format_monomial(m)
                lab[m] = s
                deg[s] = n
        mono = {s: m for m, s in lab.items()}

        def act(x, a):
            img = f.on_monomial(algebra.monomials[a])
            here = B.monomial(mono[x])
            prod = here * img if side == "right" else img * here
            return {lab[m]: c for m, c in prod.terms.items() if m in lab}

        out = cls(algebra, side, deg, act, None, cap, name=name or repr(B))
        out.monomials = mono
        return out


# ---------------------------------------------------------------------------
# Generic finite cochain complexes
# ---------------------------------------------------------------------------


class CochainComplex:
    """A cochain complex given by a basis per degree and d on basis elements.

    ``weight`` optionally assigns each basis element a filtration index
    (bar word length); when d lowers it by exactly one the complex splits
    into (weight, degree) blocks.  ``bounded`` means nothing lives above
    ``cap``, so every degree is exact.
    """

    def __init__(self, ring: CoefficientRing, basis: Mapping[int, Sequence[Label]],
                 d: Callable[[Label], Vec], cap: int,
                 weight: Optional[Callable[[Label], int]] = None, bounded: bool = False):
        self.ring = ring
        self.basis = {n: list(v) for n, v in basis.items()}
        self.d_basis = d
        self.cap = cap
        self.weight = weight
        self.bounded = bounded

    def dims(self) -> List[int]:
        return [len(self.basis.get(n, [])) for n in range(self.cap + 1)]

    def d(self, u: Vec) -> Vec:
        out: Vec = {}
        for a, x in u.items():
            _acc(out, self.d_basis(a), x, self.ring)
        return out

    def check_d_squared(self, top: Optional[int] = None) -> CheckResult:
        top = self.cap - 1 if top is None else top
        for n in range(min(self.basis, default=0), top + 1):
            for b in self.basis.get(n, []):
                dd = self.d(self.d_basis(b))
                if dd:
                    return CheckResult(False, f"d^2 != 0 on {b!r}", b)
        return CheckResult(True)

    def matrix(self, n: int, src: Optional[Sequence[Label]] = None,
               tgt: Optional[Sequence[Label]] = None) -> ExactMatrix:
        src = self.basis.get(n, []) if src is None else src
        tgt = self.basis.get(n + 1, []) if tgt is None else tgt
        tidx = {b: i for i, b in enumerate(tgt)}
        ent = {}
        for j, b in enumerate(src):
            for k, x in self.d_basis(b).items():
                i = tidx.get(k)
                if i is None:
                    raise ValueError(f"d({b!r}) leaves the target basis")
                ent[(i, j)] = x
        return ExactMatrix(self.ring, len(tgt), len(src), ent)

    def _rank(self, n: int) -> int:
        if n < 0 or n >= self.cap:
            if n >= self.cap and not self.bounded:
                raise ValueError(f"differential out of degree {n} is beyond the cap")
            return 0
        if not self.basis.get(n) or not self.basis.get(n + 1):
            return 0
        return rank(self.matrix(n))

    def cohomology_dims(self, lo: int = 0, hi: Optional[int] = None,
                        threads: int = 1) -> List[int]:
        hi = self.cap - 1 if hi is None else hi
        degs = list(range(lo - 1, hi + 1))
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                ranks = dict(zip(degs, ex.map(self._rank, degs)))
        else:
            ranks = {n: self._rank(n) for n in degs}
        return [len(self.basis.get(n, [])) - ranks[n] - ranks[n - 1] for n in range(lo, hi + 1)]

    def bigraded_dims(self, lo: int = 0, hi: Optional[int] = None,
                      threads: int = 1) -> Dict[Tuple[int, int], int]:
        """Dims of H split by weight: key (weight, degree).  Requires d to
        lower the weight by exactly one."""
        if self.weight is None:
            raise ValueError("no weight function")
        hi = self.cap - 1 if hi is None else hi
        blocks: Dict[Tuple[int, int], List[Label]] = {}
        for n in range(lo - 1, hi + 2):
            for b in self.basis.get(n, []):
                blocks.setdefault((self.weight(b), n), []).append(b)

        def block_rank(key):
            w, n = key
            src = blocks.get((w, n), [])
            tgt = blocks.get((w - 1, n + 1), [])
            if not src or not tgt:
                return key, 0
            return key, rank(self.matrix(n, src, tgt))

        keys = [k for k in blocks if k[1] <= hi]
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                ranks = dict(ex.map(block_rank, keys))
        else:
            ranks = dict(map(block_rank, keys))
        out = {}
        for (w, n), bs in blocks.items():
            if not lo <= n <= hi:
                continue
            dim = len(bs) - ranks.get((w, n), 0) - ranks.get((w + 1, n - 1), 0)
            if dim:
                out[(w, n)] = dim
        return out


# ---------------------------------------------------------------------------
# Bar construction
# ---------------------------------------------------------------------------


def _words(letters: Mapping[int, Sequence[Label]], top: int,
           word_cap: Optional[int]) -> Dict[int, List[Tuple[Label, ...]]]:
    """All words in letters (keyed by letter degree >= 0) of total degree <= top."""
    out: Dict[int, List[Tuple[Label, ...]]] = {0: [()]}
    frontier = [((), 0)]
    length = 0
    while frontier:
        length += 1
        if word_cap is not None and length > word_cap:
            break
        nxt = []
        for w, dg in frontier:
            for ld, ls in letters.items():
                if dg + ld > top:
                    continue
                for l in ls:
                    ww = w + (l,)
                    out.setdefault(dg + ld, []).append(ww)
                    nxt.append((ww, dg + ld))
        frontier = nxt
    return out


def _letter_degrees(A: Dga, top: int) -> Dict[int, List[Label]]:
    letters: Dict[int, List[Label]] = {}
    for n in range(1, top + 2):
        if n > A.cap:
            break
        for a in A.reduced(n):
            letters.setdefault(n - 1, []).append(a)
    return letters


def bar(A: Dga, cap: int, word_cap: Optional[int] = None) -> Dgc:
    """Reduced bar construction B A through degree ``cap + 1``.

    Words are tuples of basis labels of the augmentation ideal.  The stored
    differential is exact on degrees <= cap.
    """
    if A.basis.get(1) and word_cap is None:
        raise NotFinite("bar complex not finite per degree (degree-1 elements; give word_cap)")
    if not A.complete and A.cap < cap + 2:
        raise ValueError(f"algebra stored through degree {A.cap}; bar through {cap} "
                         f"needs {cap + 2}")
    words = _words(_letter_degrees(A, cap + 1), cap + 1, word_cap)
    deg = {w: n for n, ws in words.items() for w in ws}
    ring = A.ring

    def coproduct(w):
        return [(ring(1), w[:i], w[i:]) for i in range(len(w) + 1)]

    def d(w):
        return _bar_d(A, w, None, (), None, ())[0]

    return Dgc(ring, deg, (), coproduct, d, cap + 1, name=f"B({A.name})")


def _bar_d(A: Dga, word: Tuple[Label, ...], M: Optional[DgModule], m: Label,
           N: Optional[DgModule], n: Label):
    """Two-sided bar differential of m[word]n; returns a dict keyed by
    (m, word, n) when modules are given, else keyed by word."""
    ring = A.ring
    out: Dict = {}

    def key(mm, ww, nn):
        return ww if M is None and N is None else (mm, ww, nn)

    def add(k, c):
        v = ring.norm(out.get(k, 0) + c)
        if v == 0:
            out.pop(k, None)
        else:
            out[k] = v

    md = M.deg[m] if M is not None else 0
    if M is not None:
        for mm, c in M.d_basis(m).items():
            add(key(mm, word, n), c)
    eps = md
    p = len(word)
    for i, a in enumerate(word):
        for aa, c in A.d_basis(a).items():
            add(key(m, word[:i] + (aa,) + word[i + 1:], n), -_sign(eps) * c)
        if i + 1 < p:
            for ab, c in A.mul_basis(a, word[i + 1]).items():
                add(key(m, word[:i] + (ab,) + word[i + 2:], n), _sign(eps + A.deg[a] - 1) * c)
        eps += A.deg[a] - 1
    if N is not None:
        for nn, c in N.d_basis(n).items():
            add(key(m, word, nn), _sign(eps) * c)
    if p and M is not None:
        for mm, c in M.act_basis(m, word[0]).items():
            add(key(mm, word[1:], n), _sign(md) * c)
    if p and N is not None:
        e_p = eps - (A.deg[word[-1]] - 1)
        for nn, c in N.act_basis(n, word[-1]).items():
            add(key(m, word[:-1], nn), -_sign(e_p) * c)
    return out, eps


# ---------------------------------------------------------------------------
# Cobar construction
# ---------------------------------------------------------------------------


def cobar(C: Dgc, cap: int) -> Dga:
    """Cobar construction: tensor algebra on sC-bar, truncated above ``cap``.

    Cohomology of the result is valid through ``cap - 1``.
    """
    for n in C.basis:
        if n <= 0 and any(c != C.one for c in C.basis[n]):
            raise NotFinite("cobar not finite per degree (coaugmentation coideal in degree <= 0)")
    if C.cap < cap:
        raise ValueError(f"coalgebra stored through {C.cap}; cobar through {cap} needs {cap}")
    letters: Dict[int, List[Label]] = {}
    for n, cs in C.basis.items():
        if 1 <= n <= cap - 1:
            letters[n + 1] = [c for c in cs if c != C.one]
    words = _words(letters, cap, None)
    deg = {w: n for n, ws in words.items() for w in ws}
    ring = C.ring

    def product(a, b):
        return {a + b: ring(1)}

    def d_letter(c):
        out: Vec = {}
        for k, x in C.d_basis(c).items():
            _acc(out, {(k,): 1}, -x, ring)
        for x, c1, c2 in C.reduced_coproduct(c):
            _acc(out, {(c1, c2): 1}, _sign(C.deg[c1]) * x, ring)
        return out

    dcache: Dict[Label, Vec] = {}

    def d_word(w):
        out: Vec = {}
        pre = 0
        for i, c in enumerate(w):
            dl = dcache.get(c)
            if dl is None:
                dl = dcache[c] = d_letter(c)
            for k, x in dl.items():
                nw = w[:i] + k + w[i + 1:]
                if sum(C.deg[l] + 1 for l in nw) <= cap:
                    _acc(out, {nw: 1}, _sign(pre) * x, ring)
            pre += C.deg[c] + 1
        return out

    diff = {w: d_word(w) for w in deg if w}
    return Dga(ring, deg, (), product, diff, cap=cap, complete=False, name=f"Cobar({C.name})")


def cobar_counit(A: Dga, B: Dgc, OB: Dga) -> Callable[[Label], Vec]:
    """The counit Cobar(B A) -> A: s[a] -> a, longer bar words -> 0."""
    ring = A.ring

    def f(word):
        out: Vec = {A.unit: ring(1)}
        for letter in word:
            if len(letter) != 1:
                return {}
            out = A.mul(out, {letter[0]: 1})
            if not out:
                return {}
        return out

    return f


def check_counit(A: Dga, cap: int) -> CheckResult:
    """Check that Cobar(B A) -> A is a chain map inducing isomorphisms on
    cohomology through degree ``cap``."""
    B = bar(A, cap)
    OB = cobar(B, cap + 1)
    eps = cobar_counit(A, B, OB)
    ring = A.ring
    OBc = OB.as_complex()
    r = OBc.check_d_squared(cap)
    if not r:
        return CheckResult(False, "cobar: " + r.message, r.witness)
    for n in range(cap + 1):
        for w in OB.basis.get(n, []):
            lhs: Vec = {}
            for k, x in OB.d_basis(w).items():
                _acc(lhs, eps(k), x, ring)
            if lhs != A.d(eps(w)):
                return CheckResult(False, f"counit is not a chain map on {w!r}", w)
    Ac = A.as_complex()
    hA = Ac.cohomology_dims(0, cap) if A.complete or A.cap > cap else None
    if hA is None:
        raise ValueError("algebra not stored far enough for the comparison")
    hO = OBc.cohomology_dims(0, cap)
    for n in range(cap + 1):
        if hA[n] != hO[n]:
            return CheckResult(False, f"dimension mismatch in degree {n}: "
                                      f"H(Cobar B A) = {hO[n]}, H(A) = {hA[n]}", n)
        # the image of the cocycles must span H^n(A)
        ech = EchelonBasis(ring)
        idx = {a: i for i, a in enumerate(A.basis.get(n, []))}
        if n > 0:
            for a in A.basis.get(n - 1, []):
                ech.add({idx[k]: x for k, x in A.d_basis(a).items()})
        base = len(ech)
        src = OB.basis.get(n, [])
        if src:
            from .coeffring import rank_and_kernel
            _, ker = rank_and_kernel(OBc.matrix(n)) if OB.basis.get(n + 1) else \
                (0, [{j: ring(1)} for j in range(len(src))])
            for v in ker:
                img: Vec = {}
                for j, x in v.items():
                    _acc(img, eps(src[j]), x, ring)
                ech.add({idx[k]: x for k, x in img.items()})
        if len(ech) - base != hA[n]:
            return CheckResult(False, f"counit not surjective on H^{n}", n)
    return CheckResult(True, f"isomorphism through degree {cap}")


# ---------------------------------------------------------------------------
# Twisting cochains and twisted tensor products
# ---------------------------------------------------------------------------


@dataclass
class TwistingCochain:
    """A degree +1 map t: C -> A given on basis elements (missing means 0)."""

    source: Dgc
    target: Dga
    values: Dict[Label, Vec] = field(default_factory=dict)

    def __call__(self, c: Label) -> Vec:
        return self.values.get(c, {})

    def apply(self, u: Vec) -> Vec:
        out: Vec = {}
        for c, x in u.items():
            _acc(out, self(c), x, self.target.ring)
        return out

    @classmethod
    def zero(cls, C: Dgc, A: Dga) -> "TwistingCochain":
        return cls(C, A, {})


def tautological_cochain(A: Dga, B: Dgc) -> TwistingCochain:
    """t^A: B A -> s^-1 A-bar -> A-bar, [a] -> a."""
    vals = {}
    for w, n in B.deg.items():
        if len(w) == 1:
            vals[w] = {w[0]: A.ring(1)}
    return TwistingCochain(B, A, vals)


def check_twisting_cochain(t: TwistingCochain, cap: Optional[int] = None) -> CheckResult:
    """Verify e t = 0, t(1) = 0 and d t + t d = t u t on basis elements."""
    C, A = t.source, t.target
    ring = A.ring
    cap = min(C.cap - 1, A.cap - 1) if cap is None else cap
    if t(C.one):
        return CheckResult(False, "t does not vanish on the coaugmentation", C.one)
    for c in t.values:
        v = t(c)
        if A.augmentation(v):
            return CheckResult(False, f"augmentation of t({c!r}) is nonzero", c)
        for a in v:
            if A.deg[a] != C.deg[c] + 1:
                return CheckResult(False, f"t({c!r}) does not have degree {C.deg[c] + 1}", c)
    for n in range(0, cap + 1):
        for c in C.basis.get(n, []):
            lhs = A.d(t(c))
            _acc(lhs, t.apply(C.d_basis(c)), 1, ring)
            rhs: Vec = {}
            for x, c1, c2 in C.coproduct(c):
                t1, t2 = t(c1), t(c2)
                if t1 and t2:
                    _acc(rhs, A.mul(t1, t2), ring.norm(_sign(C.deg[c1]) * x), ring)
            if lhs != rhs:
                return CheckResult(False, f"Dt != t u t on {c!r} (degree {n}): "
                                          f"{lhs} vs {rhs}", c)
    return CheckResult(True)


def twisted_tensor(C: Dgc, t: Optional[TwistingCochain] = None, N: Optional[DgModule] = None,
                   M: Optional[DgModule] = None, t_left: Optional[TwistingCochain] = None,
                   cap: Optional[int] = None, check: bool = True) -> CochainComplex:
    """The twisted tensor product M (x)_{t_left} C (x)_t N.

    Either side may be omitted (then it is the ground ring).  Basis labels
    are triples (m, c, n).  The result carries the word-length weight when
    C is a bar construction.
    """
    ring = C.ring
    cap = C.cap - 1 if cap is None else cap
    for tw, mod, side in ((t, N, "left"), (t_left, M, "right")):
        if mod is None:
            continue
        if mod.side != side:
            raise ValueError(f"the module on this side must be a {side} module")
        if tw is None:
            raise ValueError("a module needs a twisting cochain")
        if tw.source is not C or tw.target is not mod.algebra:
            raise ValueError("twisting cochain does not match the coalgebra and module")
        if check:
            res = check_twisting_cochain(tw, min(cap, tw.target.cap - 1))
            if not res:
                raise ValueError(f"invalid twisting cochain: {res.message}")
    Mdeg = M.deg if M is not None else {"1": 0}
    Ndeg = N.deg if N is not None else {"1": 0}
    Mb: Dict[int, List] = {}
    for l, d in Mdeg.items():
        Mb.setdefault(d, []).append(l)
    Nb: Dict[int, List] = {}
    for l, d in Ndeg.items():
        Nb.setdefault(d, []).append(l)
    basis: Dict[int, List] = {}
    for top in range(cap + 2):
        out = []
        for i, ms in Mb.items():
            for j, cs in C.basis.items():
                k = top - i - j
                if k < 0 or k not in Nb:
                    continue
                for m in ms:
                    for c in cs:
                        for n in Nb[k]:
                            out.append((m, c, n))
        if out:
            basis[top] = out

    def d(b):
        m, c, n = b
        res: Vec = {}
        md, cd = Mdeg[m], C.deg[c]
        if M is not None:
            for k, x in M.d_basis(m).items():
                _acc(res, {(k, c, n): 1}, x, ring)
        for k, x in C.d_basis(c).items():
            _acc(res, {(m, k, n): 1}, _sign(md) * x, ring)
        if N is not None:
            for k, x in N.d_basis(n).items():
                _acc(res, {(m, c, k): 1}, _sign(md + cd) * x, ring)
        for x, c1, c2 in C.coproduct(c):
            if M is not None:
                tv = t_left(c1)
                for a, y in tv.items():
                    for k, z in M.act_basis(m, a).items():
                        _acc(res, {(k, c2, n): 1}, ring.norm(_sign(md) * x * y * z), ring)
            if N is not None:
                tv = t(c2)
                for a, y in tv.items():
                    for k, z in N.act_basis(n, a).items():
                        _acc(res, {(m, c1, k): 1},
                             ring.norm(-_sign(md + C.deg[c1]) * x * y * z), ring)
        return res

    cache: Dict = {}

    def dc(b):
        hit = cache.get(b)
        if hit is None:
            hit = cache[b] = d(b)
        return hit

    weight = (lambda b: len(b[1])) if all(isinstance(c, tuple) for c in C.deg) else None
    return CochainComplex(ring, basis, dc, cap + 1, weight)


# ---------------------------------------------------------------------------
# Tensor products and the shuffle map
# ---------------------------------------------------------------------------


def tensor_dga(A1: Dga, A2: Dga, cap: Optional[int] = None) -> Dga:
    """A1 (x) A2 with (a(x)b)(a'(x)b') = (-1)^{|b||a'|} aa' (x) bb'.

    The default cap is the sum of the caps for complete factors (nothing is
    lost) and the smaller cap otherwise.
    """
    ring = A1.ring
    if cap is None:
        cap = A1.cap + A2.cap if A1.complete and A2.complete else min(A1.cap, A2.cap)
    deg = {}
    for a, i in A1.deg.items():
        for b, j in A2.deg.items():
            if i + j <= cap:
                deg[(a, b)] = i + j

    def product(x, y):
        (a, b), (a2, b2) = x, y
        s = _sign(A2.deg[b] * A1.deg[a2])
        out: Vec = {}
        for p, u in A1.mul_basis(a, a2).items():
            for q, v in A2.mul_basis(b, b2).items():
                if (p, q) in deg:
                    _acc(out, {(p, q): 1}, ring.norm(s * u * v), ring)
        return out

    diff = {}
    for (a, b) in deg:
        out: Vec = {}
        for p, u in A1.d_basis(a).items():
            if (p, b) in deg:
                _acc(out, {(p, b): 1}, u, ring)
        for q, v in A2.d_basis(b).items():
            if (a, q) in deg:
                _acc(out, {(a, q): 1}, _sign(A1.deg[a]) * v, ring)
        diff[(a, b)] = out
    complete = A1.complete and A2.complete and cap >= max(A1.deg.values()) + max(A2.deg.values())
    return Dga(ring, deg, (A1.unit, A2.unit), product, diff, cap=cap, complete=complete,
               name=f"{A1.name}(x){A2.name}")


def tensor_dgc(C1: Dgc, C2: Dgc, cap: Optional[int] = None) -> Dgc:
    """C1 (x) C2 with the Koszul-signed coproduct (1 (x) T (x) 1)(D (x) D)."""
    ring = C1.ring
    cap = min(C1.cap, C2.cap) if cap is None else cap
    deg = {}
    for a, i in C1.deg.items():
        for b, j in C2.deg.items():
            if i + j <= cap:
                deg[(a, b)] = i + j

    def coproduct(x):
        a, b = x
        out = []
        for u, a1, a2 in C1.coproduct(a):
            for v, b1, b2 in C2.coproduct(b):
                s = _sign(C1.deg[a2] * C2.deg[b1])
                out.append((ring.norm(s * u * v), (a1, b1), (a2, b2)))
        return out

    def d(x):
        a, b = x
        out: Vec = {}
        for p, u in C1.d_basis(a).items():
            _acc(out, {(p, b): 1}, u, ring)
        for q, v in C2.d_basis(b).items():
            _acc(out, {(a, q): 1}, _sign(C1.deg[a]) * v, ring)
        return out

    return Dgc(ring, deg, (C1.one, C2.one), coproduct, d, cap, name=f"{C1.name}(x){C2.name}")


def shuffle_map(A1: Dga, A2: Dga, cap: int):
    """The shuffle map B A1 (x) B A2 -> B(A1 (x) A2).

    Returns (source Dgc, target Dgc, map on basis labels).
    """
    B1, B2 = bar(A1, cap), bar(A2, cap)
    T = tensor_dga(A1, A2, cap + 2)
    BT = bar(T, cap)
    src = tensor_dgc(B1, B2, cap + 1)
    ring = A1.ring

    def nabla(x):
        u, v = x
        p, q = len(u), len(v)
        out: Vec = {}
        for pos in combinations(range(p + q), p):
            pset = set(pos)
            word = []
            sign = 0
            i = j = 0
            for k in range(p + q):
                if k in pset:
                    a = u[i]
                    # a passes the b's already placed
                    for b in v[:j]:
                        sign += (A1.deg[a] - 1) * (A2.deg[b] - 1)
                    word.append((a, A2.unit))
                    i += 1
                else:
                    word.append((A1.unit, v[j]))
                    j += 1
            _acc(out, {tuple(word): 1}, _sign(sign), ring)
        return out

    return src, BT, nabla


def check_shuffle_map(A1: Dga, A2: Dga, cap: int) -> CheckResult:
    """Chain-map and coalgebra-map identities for the shuffle map, basis-wise."""
    src, BT, nabla = shuffle_map(A1, A2, cap)
    ring = A1.ring
    for n in range(cap + 1):
        for x in src.basis.get(n, []):
            lhs: Vec = {}
            for k, c in nabla(x).items():
                _acc(lhs, BT.d_basis(k), c, ring)
            rhs: Vec = {}
            for k, c in src.d_basis(x).items():
                _acc(rhs, nabla(k), c, ring)
            if lhs != rhs:
                return CheckResult(False, f"d nabla != nabla d on {x!r}", x)
            co1: Dict = {}
            for k, c in nabla(x).items():
                for y, w1, w2 in BT.coproduct(k):
                    _acc(co1, {(w1, w2): 1}, ring.norm(c * y), ring)
            co2: Dict = {}
            for y, x1, x2 in src.coproduct(x):
                for k1, c1 in nabla(x1).items():
                    for k2, c2 in nabla(x2).items():
                        _acc(co2, {(k1, k2): 1}, ring.norm(y * c1 * c2), ring)
            if co1 != co2:
                return CheckResult(False, f"nabla is not a coalgebra map on {x!r}", x)
    return CheckResult(True)

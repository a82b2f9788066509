"""Finite simplicial sets, normalized cochains and interval-cut operations.

A simplex is a pair ``(y, f)`` with ``y`` the id of a nondegenerate simplex
of dimension k and ``f`` a monotone surjection [n] -> [k] written as the
tuple (f(0), ..., f(n)); it is nondegenerate exactly when f is the identity.

Interval cuts follow the surjection-operad recipe: for a surjection
u = (u(1), ..., u(m)) and a cut 0 = n_0 <= n_1 <= ... <= n_m = dim sigma,
cochain c_i is evaluated on the face of sigma spanned by the concatenation
of the intervals [n_(j-1), n_j] with u(j) = i; a repeated vertex makes that
face degenerate and the term zero.

Signs.  Give the interval [n_(j-1), n_j] the degree n_j - n_(j-1) when it
is the last interval of its letter and one more otherwise.  A cut
contributes the Koszul sign of the permutation grouping the intervals by
letter, times (-1)^(n_j + j - 1) for each non-final interval [n_(j-1), n_j]
(j counted from 1).  Cochains are evaluated without further sign and the
coboundary is (dc)(sigma) = sum_k (-1)^k c(d_k sigma).

Cup-i products are u_i = (-1)^(i(i+1)/2) times the interval cut of
(1,2,1,2,...); with this normalization
D mu_(i+1) = mu_i - (-1)^i mu_i chi holds exactly, u_1 = -E_1 and
u_2 = -F_(1,1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .coeffring import QQ, CoefficientRing

__all__ = [
    "FiniteSimplicialSet",
    "NormalizedCochain",
    "Surjection",
    "interval_cut",
    "interval_cut_cochain",
    "cup",
    "cup_i",
    "cup_i_sign",
    "coboundary",
    "cochain_basis",
    "is_coboundary",
    "cut_sign",
    "alternating",
    "relation_defect",
    "steenrod_relation_check",
    "hga_operation",
    "e_surjection",
    "f_surjection",
    "standard_simplex",
    "boundary_simplex",
    "rp2_model",
    "sphere_model",
    "random_simplicial_set",
    "RelationReport",
]

SimplexId = Hashable
Simplex = Tuple[SimplexId, Tuple[int, ...]]


def _identity(k: int) -> Tuple[int, ...]:
    return tuple(range(k + 1))


class FiniteSimplicialSet:
    """Nondegenerate simplices by dimension, with their faces.

    ``faces[y]`` lists d_0 y, ..., d_k y as simplices ``(id, f)``; a face may
    be degenerate.  The simplicial identities are verified on construction.
    """

    def __init__(self, dims: Dict[SimplexId, int], faces: Dict[SimplexId, Sequence[Simplex]],
                 name: str = ""):
        self.dim: Dict[SimplexId, int] = dict(dims)
        self.faces: Dict[SimplexId, Tuple[Simplex, ...]] = {
            y: tuple((z, tuple(f)) for z, f in fs) for y, fs in faces.items()}
        self.name = name
        self.simplices: Dict[int, List[SimplexId]] = {}
        for y, k in self.dim.items():
            self.simplices.setdefault(k, []).append(y)
        for y, k in self.dim.items():
            fs = self.faces.get(y, ())
            if len(fs) != (k + 1 if k > 0 else 0):
                raise ValueError(f"simplex {y!r} of dimension {k} needs {k + 1} faces")
            for z, f in fs:
                if z not in self.dim or len(f) != k or max(f) != self.dim[z] or \
                        any(b - a not in (0, 1) for a, b in zip(f, f[1:])) or f[0] != 0:
                    raise ValueError(f"bad face {(z, f)!r} of {y!r}")
        bad = self.check_identities()
        if bad is not None:
            raise ValueError(f"simplicial identity fails on {bad!r}")

    def __repr__(self) -> str:
        counts = {k: len(v) for k, v in sorted(self.simplices.items())}
        return f"FiniteSimplicialSet({self.name or '?'}, {counts})"

    @property
    def top_dimension(self) -> int:
        return max(self.simplices)

    def nondegenerate(self, y: SimplexId) -> Simplex:
        return (y, _identity(self.dim[y]))

    def face(self, s: Simplex, i: int) -> Simplex:
        """d_i of a (possibly degenerate) simplex."""
        y, f = s
        n = len(f) - 1
        if n == 0:
            raise ValueError("vertices have no faces")
        g = f[:i] + f[i + 1:]
        v = f[i]
        if v in g:
            return (y, g)
        g2 = tuple(x if x < v else x - 1 for x in g)
        z, h = self.faces[y][v]
        return (z, tuple(h[x] for x in g2))

    def restrict(self, s: Simplex, vertices: Sequence[int]) -> Simplex:
        """The face of s spanned by a strictly increasing vertex sequence."""
        n = len(s[1]) - 1
        keep = set(vertices)
        for j in range(n, -1, -1):
            if j not in keep:
                s = self.face(s, j)
        return s

    def degeneracy(self, s: Simplex, i: int) -> Simplex:
        y, f = s
        return (y, f[:i + 1] + f[i:])

    def check_identities(self):
        """First simplex violating d_i d_j = d_(j-1) d_i (i < j), or None."""
        for y, k in self.dim.items():
            if k < 2:
                continue
            s = self.nondegenerate(y)
            for j in range(k + 1):
                for i in range(j):
                    if self.face(self.face(s, j), i) != self.face(self.face(s, i), j - 1):
                        return y
        return None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "simplices": [{"id": str(y), "dim": k,
                           "faces": [[str(z), list(f)] for z, f in self.faces.get(y, ())]}
                          for y, k in self.dim.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteSimplicialSet":
        dims = {s["id"]: int(s["dim"]) for s in obj["simplices"]}
        faces = {s["id"]: [(z, tuple(f)) for z, f in s.get("faces", [])]
                 for s in obj["simplices"]}
        return cls(dims, faces, obj.get("name", ""))


# ---------------------------------------------------------------------------
# Example spaces
# ---------------------------------------------------------------------------


def _complex(facets: Sequence[Sequence[int]], name: str) -> FiniteSimplicialSet:
    """Ordered simplicial complex generated by the given facets."""
    simplices = set()
    for F in facets:
        F = tuple(sorted(F))
        for r in range(1, len(F) + 1):
            for sub in _subsets(F, r):
                simplices.add(sub)
    dims = {s: len(s) - 1 for s in simplices}
    faces = {s: [(s[:i] + s[i + 1:], _identity(len(s) - 2)) for i in range(len(s))]
             for s in simplices if len(s) > 1}
    return FiniteSimplicialSet(dims, faces, name)


def _subsets(F, r):
    from itertools import combinations
    return combinations(F, r)


def standard_simplex(n: int) -> FiniteSimplicialSet:
    return _complex([range(n + 1)], f"Delta^{n}")


def boundary_simplex(n: int) -> FiniteSimplicialSet:
    """The boundary of the n-simplex (an (n-1)-sphere)."""
    full = tuple(range(n + 1))
    return _complex([full[:i] + full[i + 1:] for i in range(n + 1)], f"dDelta^{n}")


def rp2_model() -> FiniteSimplicialSet:
    """RP^2 with one nondegenerate simplex v, a, s in dimensions 0, 1, 2.

    d0 a = d1 a = v; d0 s = d2 s = a, d1 s = s0 v.
    """
    dims = {"v": 0, "a": 1, "s": 2}
    faces = {"a": [("v", (0,)), ("v", (0,))],
             "s": [("a", (0, 1)), ("v", (0, 0)), ("a", (0, 1))]}
    return FiniteSimplicialSet(dims, faces, "RP2")


def sphere_model(n: int) -> FiniteSimplicialSet:
    """S^n = Delta^n / boundary: one vertex and one n-simplex."""
    dims = {"v": 0, "e": n}
    faces = {"e": [("v", (0,) * n) for _ in range(n + 1)]}
    return FiniteSimplicialSet(dims, faces, f"S{n}")


def random_simplicial_set(seed: int, vertices: int = 6, facets: int = 5,
                          dim: int = 3) -> FiniteSimplicialSet:
    """A random ordered simplicial complex with ``facets`` facets of dimension
    ``dim``, wedged with a pinched 2-cell so that degenerate faces occur."""
    rng = random.Random(seed)
    fs = [rng.sample(range(vertices), dim + 1) for _ in range(facets)]
    base = _complex(fs, f"random-{seed}")
    dims = dict(base.dim)
    faces = {y: list(f) for y, f in base.faces.items()}
    # a 2-simplex with boundary a * s0(v): edge (0,1)... (a loop-free pinch)
    v = (0,)
    dims["loop"] = 1
    faces["loop"] = [(v, (0,)), (v, (0,))]
    dims["pinch"] = 2
    faces["pinch"] = [("loop", (0, 1)), ("loop", (0, 1)), (v, (0, 0))]
    return FiniteSimplicialSet(dims, faces, f"random-{seed}")


# ---------------------------------------------------------------------------
# Cochains
# ---------------------------------------------------------------------------


@dataclass
class NormalizedCochain:
    """A normalized cochain: values on nondegenerate simplices of one dimension."""

    space: FiniteSimplicialSet
    degree: int
    values: Dict[SimplexId, object] = field(default_factory=dict)
    ring: CoefficientRing = QQ

    def __post_init__(self):
        clean = {}
        for y, x in self.values.items():
            if self.space.dim.get(y) != self.degree:
                raise ValueError(f"{y!r} is not a {self.degree}-simplex")
            x = self.ring(x)
            if x != 0:
                clean[y] = x
        self.values = clean

    def __call__(self, s: Simplex):
        y, f = s
        if len(f) - 1 != self.degree or f != _identity(self.space.dim[y]):
            return 0
        return self.values.get(y, 0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, NormalizedCochain) and self.degree == other.degree
                and self.values == other.values)

    def __add__(self, other: "NormalizedCochain") -> "NormalizedCochain":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        vals = dict(self.values)
        for y, x in other.values.items():
            vals[y] = self.ring.norm(vals.get(y, 0) + x)
        return NormalizedCochain(self.space, self.degree, vals, self.ring)

    def scale(self, c) -> "NormalizedCochain":
        return NormalizedCochain(self.space, self.degree,
                                 {y: self.ring.norm(c * x) for y, x in self.values.items()},
                                 self.ring)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.values

    @classmethod
    def zero(cls, space, degree, ring=QQ):
        return cls(space, degree, {}, ring)

    @classmethod
    def random(cls, space, degree, rng: random.Random, ring=QQ, span: int = 3):
        vals = {}
        for y in space.simplices.get(degree, []):
            vals[y] = rng.randint(-span, span) if ring.characteristic == 0 else \
                rng.randrange(ring.characteristic)
        return cls(space, degree, vals, ring)

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "values": {str(y): str(x) for y, x in sorted(self.values.items(), key=str)}}

    @classmethod
    def from_json(cls, space: FiniteSimplicialSet, obj: dict, ring=QQ) -> "NormalizedCochain":
        return cls(space, int(obj["degree"]), dict(obj.get("values", {})), ring)


def coboundary(c: NormalizedCochain) -> NormalizedCochain:
    """(dc)(x) = sum_i (-1)^i c(d_i x)."""
    X = c.space
    vals = {}
    for y in X.simplices.get(c.degree + 1, []):
        s = X.nondegenerate(y)
        tot = 0
        for i in range(c.degree + 2):
            v = c(X.face(s, i))
            if v:
                tot += -v if i % 2 else v
        vals[y] = tot
    return NormalizedCochain(X, c.degree + 1, vals, c.ring)


def cochain_basis(space: FiniteSimplicialSet, degree: int, ring=QQ) -> List[NormalizedCochain]:
    return [NormalizedCochain(space, degree, {y: 1}, ring)
            for y in space.simplices.get(degree, [])]


def is_coboundary(c: NormalizedCochain) -> bool:
    """Whether c = d(b) for some cochain b (field coefficients)."""
    if c.is_zero():
        return True
    if c.degree == 0:
        return False
    from .coeffring import EchelonBasis
    X = c.space
    idx = {y: i for i, y in enumerate(X.simplices.get(c.degree, []))}
    ech = EchelonBasis(c.ring)
    for b in cochain_basis(X, c.degree - 1, c.ring):
        ech.add({idx[y]: x for y, x in coboundary(b).values.items()})
    return ech.contains({idx[y]: x for y, x in c.values.items()})


# ---------------------------------------------------------------------------
# Surjections and interval cuts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Surjection:
    """A sequence (u(1), ..., u(m)) onto {1..n} with no equal neighbours."""

    seq: Tuple[int, ...]

    def __post_init__(self):
        seq = tuple(int(x) for x in self.seq)
        object.__setattr__(self, "seq", seq)
        if not seq:
            raise ValueError("empty surjection")
        n = max(seq)
        if set(seq) != set(range(1, n + 1)):
            raise ValueError(f"{seq} is not a surjection onto 1..{n}")
        if any(a == b for a, b in zip(seq, seq[1:])):
            raise ValueError(f"{seq} is degenerate (equal consecutive entries)")

    @classmethod
    def parse(cls, text: str) -> "Surjection":
        return cls(tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",")))

    @property
    def arity(self) -> int:
        return max(self.seq)

    @property
    def length(self) -> int:
        return len(self.seq)

    @property
    def degree(self) -> int:
        """Operations lower the total degree by this much."""
        return len(self.seq) - self.arity

    def is_final(self, j: int) -> bool:
        """Whether position j (0-based) is the last occurrence of its letter."""
        return self.seq[j] not in self.seq[j + 1:]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.seq)) + ")"


def _koszul_group_sign(letters: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of stably sorting items by letter, items carrying the given degrees."""
    e = 0
    for j in range(len(letters)):
        for k in range(j + 1, len(letters)):
            if letters[k] < letters[j]:
                e += degrees[j] * degrees[k]
    return e


def cut_sign(u: Surjection, cuts: Sequence[int], cochain_degrees: Sequence[int]) -> int:
    """Sign attached to one interval cut (cuts = (n_0, ..., n_m))."""
    m = u.length
    lengths = [cuts[j + 1] - cuts[j] for j in range(m)]
    degs = [lengths[j] + (0 if u.is_final(j) else 1) for j in range(m)]
    e = _koszul_group_sign(u.seq, degs)
    for j in range(m):
        if not u.is_final(j):
            e += cuts[j + 1] + j
    return -1 if e % 2 else 1


def interval_cut(u: Surjection, cochains: Sequence[NormalizedCochain], sigma: Simplex,
                 sign_fn=None) -> object:
    """Value of the interval-cut operation of u on (c_1, ..., c_r) at sigma."""
    if len(cochains) != u.arity:
        raise ValueError("arity/degree mismatch: expected "
                         f"{u.arity} cochains, got {len(cochains)}")
    X = cochains[0].space
    ring = cochains[0].ring
    n = len(sigma[1]) - 1
    degs = [c.degree for c in cochains]
    if sum(degs) - u.degree != n:
        raise ValueError(f"arity/degree mismatch: operation of degree {sum(degs) - u.degree} "
                         f"on a {n}-simplex")
    if sigma[1] != _identity(X.dim[sigma[0]]):
        return ring(0)  # normalized: zero on degenerate simplices
    sign_fn = sign_fn or cut_sign
    m = u.length
    total = 0
    for inner in combinations_with_replacement(range(n + 1), m - 1):
        cuts = (0,) + inner + (n,)
        prod = 1
        for i, c in enumerate(cochains, start=1):
            verts: List[int] = []
            for j in range(m):
                if u.seq[j] == i:
                    verts.extend(range(cuts[j], cuts[j + 1] + 1))
            if len(verts) != c.degree + 1 or any(a >= b for a, b in zip(verts, verts[1:])):
                prod = 0
                break
            v = c(X.restrict(sigma, verts))
            if not v:
                prod = 0
                break
            prod *= v
        if prod:
            total += sign_fn(u, cuts, degs) * prod
    return ring(total) if ring.characteristic else ring.norm(total)


def interval_cut_cochain(u: Surjection, cochains: Sequence[NormalizedCochain],
                         sign_fn=None) -> NormalizedCochain:
    if len(cochains) != u.arity:
        raise ValueError(f"arity/degree mismatch: expected {u.arity} cochains, "
                         f"got {len(cochains)}")
    X = cochains[0].space
    deg = sum(c.degree for c in cochains) - u.degree
    if deg < 0:
        raise ValueError("arity/degree mismatch: negative result degree")
    vals = {y: interval_cut(u, cochains, X.nondegenerate(y), sign_fn)
            for y in X.simplices.get(deg, [])}
    return NormalizedCochain(X, deg, vals, cochains[0].ring)


def alternating(i: int) -> Surjection:
    return Surjection(tuple(1 + (k % 2) for k in range(i + 2)))


def cup_i_sign(i: int) -> int:
    """(-1)^(i(i+1)/2): the normalization under which the Steenrod relation holds."""
    return 1 if i % 4 in (0, 3) else -1


def cup_i(i: int, a: NormalizedCochain, b: NormalizedCochain, sign_fn=None) -> NormalizedCochain:
    """a u_i b: the alternating surjection (1,2,1,2,...) of length i + 2."""
    if i < 0:
        raise ValueError("cup_i needs i >= 0")
    return interval_cut_cochain(alternating(i), [a, b], sign_fn).scale(cup_i_sign(i))


def cup(a: NormalizedCochain, b: NormalizedCochain) -> NormalizedCochain:
    """The Alexander-Whitney product."""
    return cup_i(0, a, b)


# ---------------------------------------------------------------------------
# The Steenrod relation and HGA operations
# ---------------------------------------------------------------------------


@dataclass
class RelationReport:
    ok: bool
    trials: int
    witness: Optional[Tuple[NormalizedCochain, NormalizedCochain]] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def relation_defect(i: int, a: NormalizedCochain, b: NormalizedCochain,
                    op=None, literal: bool = False) -> NormalizedCochain:
    """D(mu_(i+1))(a, b) - (a u_i b - (-1)^(|a||b| + i) b u_i a); zero when
    the relation holds.  D f = d f - (-1)^{|f|} f d with |mu_(i+1)| = -(i+1).

    The factor (-1)^i is forced: applying D to both sides of
    D mu_(j+1) = mu_j - mu_j chi gives 0 = 2 (mu_(j-1) - mu_(j-1) chi) for j >= 1.
    ``literal=True`` drops it, to exhibit that failure.
    """
    op = op or cup_i
    X, ring = a.space, a.ring
    n = a.degree + b.degree - i
    twist = a.degree * b.degree + (0 if literal else i)
    rhs = op(i, a, b) - op(i, b, a).scale(-1 if twist % 2 else 1)
    lhs = NormalizedCochain.zero(X, n, ring)
    if n - 1 >= 0:
        lhs = coboundary(op(i + 1, a, b))
    inner = op(i + 1, coboundary(a), b) + \
        op(i + 1, a, coboundary(b)).scale(-1 if a.degree % 2 else 1)
    lhs = lhs - inner.scale(-1 if (i + 1) % 2 else 1)
    return lhs - rhs


def steenrod_relation_check(i: int, space: FiniteSimplicialSet, trials: int = 200,
                            ring: CoefficientRing = QQ, seed: int = 0, op=None,
                            max_degree: Optional[int] = None,
                            literal: bool = False) -> RelationReport:
    """Check D(u_(i+1)) = u_i - (-1)^i u_i chi on random pairs of cochains."""
    if i < 0:
        raise ValueError("i must be >= 0")
    rng = random.Random(seed)
    top = space.top_dimension
    pairs = []
    for p in range(0, top + 1):
        for q in range(0, top + 1):
            # the relation lives in degree p + q - i; it must be reachable
            if 0 <= p + q - i <= top and (max_degree is None or p + q - i <= max_degree):
                pairs.append((p, q))
    for t in range(trials):
        p, q = pairs[t % len(pairs)]
        a = NormalizedCochain.random(space, p, rng, ring)
        b = NormalizedCochain.random(space, q, rng, ring)
        if not relation_defect(i, a, b, op, literal).is_zero():
            return RelationReport(False, t + 1, (a, b),
                                  f"relation fails for degrees ({p}, {q})")
    return RelationReport(True, trials)


def e_surjection(l: int) -> Surjection:
    """(1, 2, 1, 3, ..., 1, l+1, 1)."""
    if l < 1:
        raise ValueError("E_l needs l >= 1")
    seq = [1]
    for k in range(2, l + 2):
        seq += [k, 1]
    return Surjection(tuple(seq))


def f_surjection(p: int, q: int) -> Surjection:
    """The surjection of F_{p,q} on inputs a_1..a_p, b_1..b_q (labels 1..p+q).

    The pairs (1, p+1), (1, p+2), ..., (1, p+q) followed by the pairs
    (1, p+q), (2, p+q), ..., (p, p+q); length 2(p+q).  For p = q = 1 this
    is (1,2,1,2).
    """
    if p < 1 or q < 1:
        raise ValueError("F_{p,q} needs p, q >= 1")
    seq: List[int] = []
    for k in range(1, q + 1):
        seq += [1, p + k]
    for k in range(1, p + 1):
        seq += [k, p + q]
    return Surjection(tuple(seq))


def hga_operation(kind: str, cochains: Sequence[NormalizedCochain], l: int = 1,
                  p: int = 1, q: int = 1, sign_fn=None) -> NormalizedCochain:
    """E_l (kind "E", arity l+1) or F_{p,q} (kind "F", arity p+q)."""
    if kind == "E":
        u = e_surjection(l)
    elif kind == "F":
        u = f_surjection(p, q)
    else:
        raise ValueError(f"unknown operation kind {kind!r}")
    if len(cochains) != u.arity:
        raise ValueError(f"arity/degree mismatch: {kind} needs {u.arity} cochains")
    return interval_cut_cochain(u, cochains, sign_fn)

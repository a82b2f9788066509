"""Exact coefficient rings and the linear algebra built on them.

Supported rings are the rationals, prime fields F_p, the integers and the
localizations Z[1/m].  Elements are plain Python numbers: ``int`` or
``Fraction`` in characteristic zero, ``int`` in ``range(p)`` for F_p.
Nothing in here ever touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "CoefficientRing",
    "QQ",
    "ZZ",
    "GF",
    "ZZloc",
    "parse_ring",
    "ExactMatrix",
    "EchelonBasis",
    "rank",
    "rank_and_kernel",
    "smith_normal_form",
    "abelian_invariants",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class CoefficientRing:
    """A commutative coefficient ring.

    ``kind`` is one of ``"Q"``, ``"Fp"``, ``"Z"``, ``"Zloc"``; ``modulus`` is
    the prime p for F_p and the inverted integer m for Z[1/m].
    """

    kind: str
    modulus: int = 0
    _primes: Tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.kind == "Fp":
            if not _is_prime(self.modulus):
                raise ValueError(f"F_p needs a prime, got {self.modulus}")
        elif self.kind == "Zloc":
            if self.modulus < 2:
                raise ValueError("localized ring Z[1/m] needs m >= 2")
            object.__setattr__(self, "_primes", tuple(_prime_factors(self.modulus)))
        elif self.kind not in ("Q", "Z"):
            raise ValueError(f"unknown coefficient ring kind {self.kind!r}")

    # -- predicates ---------------------------------------------------------
    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind == "Fp" else 0

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "Fp")

    @property
    def two_is_unit(self) -> bool:
        if self.kind == "Q":
            return True
        if self.kind == "Fp":
            return self.modulus != 2
        if self.kind == "Zloc":
            return self.modulus % 2 == 0
        return False

    @property
    def name(self) -> str:
        return {
            "Q": "Q",
            "Z": "Z",
            "Fp": f"F{self.modulus}",
            "Zloc": f"Z[1/{self.modulus}]",
        }[self.kind]

    def __str__(self) -> str:
        return self.name

    # -- element arithmetic -------------------------------------------------
    def __call__(self, x):
        """Coerce ``x`` (int, Fraction or str) into the ring, normalized."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "Fp":
            if isinstance(x, Fraction):
                if x.denominator % self.modulus == 0:
                    raise ValueError(f"{x} has no image in F{self.modulus}")
                return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
            return int(x) % self.modulus
        if isinstance(x, Fraction):
            if x.denominator == 1:
                x = x.numerator
            elif not self.contains(x):
                raise ValueError(f"{x} is not an element of {self.name}")
        return x

    def norm(self, x):
        """Cheap normalization of an arithmetic result already in the ring."""
        if self.kind == "Fp":
            return x % self.modulus
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def contains(self, x) -> bool:
        if self.kind == "Fp":
            return not (isinstance(x, Fraction) and x.denominator % self.modulus == 0)
        if self.kind == "Q":
            return True
        den = x.denominator if isinstance(x, Fraction) else 1
        if self.kind == "Z":
            return den == 1
        for p in self._primes:
            while den % p == 0:
                den //= p
        return den == 1

    def is_unit(self, x) -> bool:
        if x == 0:
            return False
        if self.is_field:
            return True
        if self.kind == "Z":
            return x in (1, -1)
        return self.contains(Fraction(1) / Fraction(x))

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("zero is not invertible")
        if self.kind == "Fp":
            return pow(x, -1, self.modulus)
        if not self.is_unit(x):
            raise ValueError(f"{x} is not a unit of {self.name}")
        return self.norm(Fraction(1) / Fraction(x))

    def to_json(self) -> str:
        return self.name


QQ = CoefficientRing("Q")
ZZ = CoefficientRing("Z")


def GF(p: int) -> CoefficientRing:
    return CoefficientRing("Fp", p)


def ZZloc(m: int) -> CoefficientRing:
    return CoefficientRing("Zloc", m)


def parse_ring(text: str) -> CoefficientRing:
    """Parse ``Q``, ``Z``, ``F2``/``Fp:7``, ``Z-inv2``, ``Z[1/6]``."""
    t = text.strip()
    if t in ("Q", "QQ"):
        return QQ
    if t in ("Z", "ZZ"):
        return ZZ
    if t.startswith("F"):
        digits = t[1:].lstrip("p:")
        return GF(int(digits))
    if t.startswith("Z-inv"):
        return ZZloc(int(t[5:]))
    if t.startswith("Z[1/") and t.endswith("]"):
        return ZZloc(int(t[4:-1]))
    raise ValueError(f"cannot parse coefficient ring {text!r}")


# ---------------------------------------------------------------------------
# Sparse matrices
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Sparse matrix with entries in a :class:`CoefficientRing`."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: CoefficientRing, rows: int, cols: int,
                 entries: Optional[Dict[Tuple[int, int], object]] = None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            v = ring(v)
            if v != 0:
                self.entries[(i, j)] = v

    @classmethod
    def from_dense(cls, ring, data: Sequence[Sequence]) -> "ExactMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v != 0}
        return cls(ring, rows, cols, ent)

    @classmethod
    def from_columns(cls, ring, rows: int, columns: Sequence[Dict[int, object]]) -> "ExactMatrix":
        ent = {(i, j): v for j, col in enumerate(columns) for i, v in col.items()}
        return cls(ring, rows, len(columns), ent)

    def to_dense(self) -> List[List]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self) -> List[Dict[int, object]]:
        out: List[Dict[int, object]] = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def apply(self, vec: Dict[int, object]) -> Dict[int, object]:
        """Multiply by a sparse column vector given as ``{col: value}``."""
        out: Dict[int, object] = {}
        cols: Dict[int, List[Tuple[int, object]]] = {}
        for (i, j), v in self.entries.items():
            cols.setdefault(j, []).append((i, v))
        norm = self.ring.norm
        for j, x in vec.items():
            for i, v in cols.get(j, ()):
                out[i] = norm(out.get(i, 0) + v * x)
        return {i: v for i, v in out.items() if v != 0}

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: Dict[int, List[Tuple[int, object]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: Dict[Tuple[int, int], object] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return ExactMatrix(self.ring, self.rows, other.cols, acc)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.cols, self.rows,
                           {(j, i): v for (i, j), v in self.entries.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExactMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.ring}, {self.rows}x{self.cols}, nnz={len(self.entries)})"


def _magnitude(x) -> int:
    if isinstance(x, Fraction):
        return abs(x.numerator) + abs(x.denominator)
    return abs(x)


def _require_field(ring: CoefficientRing):
    if not ring.is_field:
        raise ValueError("field required")


class EchelonBasis:
    """Incrementally maintained row-echelon basis of a subspace of k^n.

    Vectors are sparse ``{index: value}`` dicts.  When ``track`` is set,
    each stored row remembers which inserted vectors it is a combination of,
    so :meth:`solve` can express a vector in terms of the inserted ones.
    """

    def __init__(self, ring: CoefficientRing, track: bool = False):
        _require_field(ring)
        self.ring = ring
        self.track = track
        self.pivots: Dict[int, Tuple[Dict[int, object], Dict[int, object]]] = {}
        self.count = 0

    def __len__(self) -> int:
        return len(self.pivots)

    def _reduce(self, vec: Dict[int, object], tag: Dict[int, object]):
        ring = self.ring
        norm = ring.norm
        v = dict(vec)
        t = dict(tag)
        while v:
            # lowest index with a stored pivot
            hits = [c for c in v if c in self.pivots]
            if not hits:
                break
            c = min(hits)
            prow, ptag = self.pivots[c]
            f = v[c]
            for k, x in prow.items():
                nv = norm(v.get(k, 0) - f * x)
                if nv == 0:
                    v.pop(k, None)
                else:
                    v[k] = nv
            if self.track:
                for k, x in ptag.items():
                    nt = norm(t.get(k, 0) - f * x)
                    if nt == 0:
                        t.pop(k, None)
                    else:
                        t[k] = nt
        return v, t

    def reduce(self, vec: Dict[int, object]) -> Dict[int, object]:
        return self._reduce(vec, {})[0]

    def contains(self, vec: Dict[int, object]) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Dict[int, object]) -> bool:
        """Insert ``vec``; return True when it enlarged the span."""
        idx = self.count
        self.count += 1
        tag = {idx: self.ring(1)} if self.track else {}
        v, t = self._reduce(vec, tag)
        if not v:
            return False
        c = min(v)
        inv = self.ring.inv(v[c])
        norm = self.ring.norm
        v = {k: norm(x * inv) for k, x in v.items()}
        t = {k: norm(x * inv) for k, x in t.items()}
        self.pivots[c] = (v, t)
        return True

    def solve(self, vec: Dict[int, object]) -> Optional[Dict[int, object]]:
        """Coefficients over inserted vectors summing to ``vec``, or None."""
        if not self.track:
            raise ValueError("solve needs track=True")
        v, t = self._reduce(vec, {})
        if v:
            return None
        norm = self.ring.norm
        return {k: norm(-x) for k, x in t.items() if x != 0}


def _rank_rows_field(ring: CoefficientRing, rows: Iterable[Dict[int, object]]) -> int:
    if ring.kind == "Q":
        return _rank_rows_integral(rows)
    p = ring.modulus
    pivots: Dict[int, Dict[int, int]] = {}
    for row in rows:
        v = {k: x % p for k, x in row.items() if x % p}
        while v:
            c = min(v)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(v[c], -1, p)
                pivots[c] = {k: x * inv % p for k, x in v.items()}
                break
            f = v[c]
            for k, x in prow.items():
                nv = (v.get(k, 0) - f * x) % p
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return len(pivots)


def _primitive(v: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    return {k: x // g for k, x in v.items()}


def _rank_rows_integral(rows: Iterable[Dict[int, object]]) -> int:
    """Rank over Q by fraction-free elimination on integer rows."""
    pivots: Dict[int, Dict[int, int]] = {}
    for row in rows:
        den = 1
        for x in row.values():
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        v = {k: int(x * den) for k, x in row.items() if x != 0}
        v = _primitive(v) if v else v
        while v:
            c = min(v)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = v
                break
            a, b = prow[c], v[c]
            g = gcd(a, b)
            a //= g
            b //= g
            nv = {k: a * x for k, x in v.items()}
            for k, x in prow.items():
                y = nv.get(k, 0) - b * x
                if y:
                    nv[k] = y
                else:
                    nv.pop(k, None)
            v = _primitive(nv) if nv else nv
    return len(pivots)


def rank(m: ExactMatrix) -> int:
    """Rank over a field (fast path: no kernel bookkeeping)."""
    _require_field(m.ring)
    return _rank_rows_field(m.ring, m.row_dicts())


def rank_of_rows(ring: CoefficientRing, rows: Iterable[Dict[int, object]]) -> int:
    _require_field(ring)
    return _rank_rows_field(ring, rows)


def rank_and_kernel(m: ExactMatrix) -> Tuple[int, List[Dict[int, object]]]:
    """Rank and a kernel basis (sparse column vectors) of ``m`` over a field.

    Full reduced row echelon form, pivoting on the smallest-magnitude entry
    of each column to keep rational coefficients small.
    """
    ring = m.ring
    _require_field(ring)
    norm = ring.norm
    rows = [r for r in m.row_dicts() if r]
    by_col: Dict[int, set] = {}
    for i, r in enumerate(rows):
        for c in r:
            by_col.setdefault(c, set()).add(i)
    used = set()
    pivot_of_col: Dict[int, int] = {}
    for c in range(m.cols):
        cands = [i for i in by_col.get(c, ()) if i not in used and rows[i].get(c, 0) != 0]
        if not cands:
            continue
        pi = min(cands, key=lambda i: (_magnitude(rows[i][c]), len(rows[i]), i))
        used.add(pi)
        prow = rows[pi]
        inv = ring.inv(prow[c])
        prow = {k: norm(x * inv) for k, x in prow.items()}
        rows[pi] = prow
        pivot_of_col[c] = pi
        for i in list(by_col.get(c, ())):
            if i == pi:
                continue
            r = rows[i]
            f = r.get(c, 0)
            if f == 0:
                continue
            for k, x in prow.items():
                nv = norm(r.get(k, 0) - f * x)
                if nv == 0:
                    r.pop(k, None)
                    by_col.get(k, set()).discard(i)
                else:
                    if k not in r:
                        by_col.setdefault(k, set()).add(i)
                    r[k] = nv
    rk = len(pivot_of_col)
    kernel = []
    for free in range(m.cols):
        if free in pivot_of_col:
            continue
        vec = {free: ring(1)}
        for pc, pi in pivot_of_col.items():
            x = rows[pi].get(free, 0)
            if x != 0:
                vec[pc] = norm(-x)
        kernel.append(vec)
    return rk, kernel


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------


def _identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: ExactMatrix):
    """Smith normal form of an integer matrix.

    Returns ``(invariants, U, D, V)`` with ``U @ m @ V == D`` (dense lists),
    U and V unimodular, and ``invariants`` the nonzero diagonal entries
    d1 | d2 | ... of D, all positive.
    """
    for v in m.entries.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            raise ValueError("integer entries required")
    A = [[int(x) for x in row] for row in m.to_dense()]
    r, c = m.rows, m.cols
    U = _identity(r)
    V = _identity(c)

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, f):  # row dst += f * row src
        if f:
            rs, rd = M[src], M[dst]
            for k in range(len(rd)):
                rd[k] += f * rs[k]

    def add_col(M, src, dst, f):  # col dst += f * col src
        if f:
            for row in M:
                row[dst] += f * row[src]

    t = 0
    while t < min(r, c):
        nz = [(abs(A[i][j]), i, j) for i in range(t, r) for j in range(t, c) if A[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(A, t, i0)
        swap_rows(U, t, i0)
        swap_cols(A, t, j0)
        swap_cols(V, t, j0)
        while True:
            done = True
            for i in range(t + 1, r):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(A, t, i, -q)
                    add_row(U, t, i, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, c):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(A, t, j, -q)
                    add_col(V, t, j, -q)
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: pivot must divide the remaining block
                bad = [(i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                       if A[i][j] % A[t][t]]
                if not bad:
                    break
                i, _ = bad[0]
                add_row(A, i, t, 1)
                add_row(U, i, t, 1)
                continue
            # move the smallest remaining entry of row/col t onto the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, r) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, c) if A[t][j]]
            _, i1, j1 = min(cands)
            if i1 != t:
                swap_rows(A, t, i1)
                swap_rows(U, t, i1)
            if j1 != t:
                swap_cols(A, t, j1)
                swap_cols(V, t, j1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    invariants = tuple(A[i][i] for i in range(min(r, c)) if A[i][i])
    return invariants, U, A, V


def abelian_invariants(ring: CoefficientRing, rows: int, incoming: Optional[ExactMatrix],
                       outgoing: Optional[ExactMatrix]) -> Tuple[int, Tuple[int, ...]]:
    """Homology ker(outgoing)/im(incoming) of a Z (or Z[1/m]) complex slice.

    ``rows`` is the dimension of the middle term.  Returns (free rank,
    torsion invariants).  Over Z[1/m] the matrices must still be integral;
    invariants that become units after inverting m are dropped.
    """
    out_rank = 0
    if outgoing is not None and outgoing.entries:
        out_rank = len(smith_normal_form(outgoing)[0])
    inv: Tuple[int, ...] = ()
    if incoming is not None and incoming.entries:
        inv = smith_normal_form(incoming)[0]
    free = rows - out_rank - len(inv)
    torsion = []
    for d in inv:
        if ring.kind == "Zloc":
            for q in _prime_factors(ring.modulus):
                while d % q == 0:
                    d //= q
        if d != 1:
            torsion.append(d)
    return free, tuple(torsion)

"""Generalized Laplacians, critical ideals, algebraic co-rank and twin theory."""

from __future__ import annotations

import heapq

import logging
import random
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import combinations, product
from math import gcd, prod
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .groebner import DEFAULT_BUDGET, Budget, Ideal, triviality_evidence
from .polyring import DEGREVLEX, ZZ, CoefficientRing, MonomialOrder, Polynomial, PolyRing, Terms, Var
from .sgraph import (
    Cotree,
    SignedMultidigraph,
    TwinVector,
    blowup,
    complete,
    complete_bipartite,
    duplicate_replicate,
    trivial,
)

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """A theorem was asked for outside its hypotheses."""


class BlowupMismatch(RuntimeError):
    """Fast-path and direct co-rank of a blowup disagree."""


# ---------------------------------------------------------------------------
# matrices


def graph_ring(g: SignedMultidigraph, coeffs: CoefficientRing = ZZ, order: MonomialOrder = DEGREVLEX) -> PolyRing:
    return PolyRing(coeffs, tuple(v.var for v in g.vertices), order)


class SymbolicMatrix:
    """Rectangular grid of polynomials over one ring."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: PolyRing, rows: Sequence[Sequence]):
        grid = []
        for row in rows:
            grid.append(tuple(_lift(ring, e) for e in row))
        if grid and any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("ragged matrix")
        self.ring = ring
        self.rows = tuple(grid)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SymbolicMatrix":
        return SymbolicMatrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows])

    def substitute(self, assignment) -> "SymbolicMatrix":
        return SymbolicMatrix(self.ring, [[e.substitute(assignment) for e in r] for r in self.rows])

    def det(self) -> Polynomial:
        return bareiss_det(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolicMatrix) and self.rows == other.rows

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)


def _lift(ring: PolyRing, e) -> Polynomial:
    if isinstance(e, Polynomial):
        if e.ring != ring:
            raise ValueError("matrix entries must share one ring")
        return e
    return ring.const(int(e))


def generalized_laplacian(g: SignedMultidigraph, ring: Optional[PolyRing] = None) -> SymbolicMatrix:
    """L(G, X): x_v on the diagonal, -w_uv off it."""
    ring = ring or graph_ring(g)
    w = g.matrix()
    rows = []
    for i, v in enumerate(g.vertices):
        rows.append([ring.var(v.var) if i == j else -w[i][j] for j in range(g.n)])
    return SymbolicMatrix(ring, rows)


def cofactor_det(m: SymbolicMatrix) -> Polynomial:
    """Determinant by plain Laplace expansion along the first row."""
    r, c = m.shape
    if r != c:
        raise ValueError("determinant of a non-square matrix")
    ring = m.ring

    def rec(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Polynomial:
        if not rows:
            return ring.one()
        total = ring.zero()
        r0 = rows[0]
        for k, col in enumerate(cols):
            e = m.rows[r0][col]
            if e.is_zero():
                continue
            sub = rec(rows[1:], cols[:k] + cols[k + 1 :])
            total = total + e * sub if k % 2 == 0 else total - e * sub
        return total

    return rec(tuple(range(r)), tuple(range(c)))


def divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Quotient a/b, which must be exact."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = a.ring
    # any monomial order works for exact division; lex compares tuples natively
    bm = max(b.terms)
    bc = b.terms[bm]
    mod = ring.coeffs.modulus
    rem = dict(a.terms)
    heap = [tuple(-e for e in m) for m in rem]
    heapq.heapify(heap)
    q: Terms = {}
    while rem:
        m = tuple(-e for e in heapq.heappop(heap))
        c = rem.get(m)
        if c is None:
            continue
        s = tuple(x - y for x, y in zip(m, bm))
        if min(s, default=0) < 0:
            raise ArithmeticError("inexact polynomial division")
        if mod:
            k = (c * pow(bc, -1, mod)) % mod
        else:
            if c % bc:
                raise ArithmeticError("inexact polynomial division")
            k = c // bc
        q[s] = k
        for mb, cb in b.terms.items():
            t = tuple(x + y for x, y in zip(mb, s))
            old = rem.get(t)
            v = (0 if old is None else old) - k * cb
            if mod:
                v %= mod
            if v:
                rem[t] = v
                if old is None:
                    heapq.heappush(heap, tuple(-e for e in t))
            elif old is not None:
                del rem[t]
    return Polynomial.from_terms(ring, q)


def bareiss_det(m: SymbolicMatrix) -> Polynomial:
    """Fraction-free Gaussian elimination; exact over Z[X] and Z/p[X]."""
    n, c = m.shape
    if n != c:
        raise ValueError("determinant of a non-square matrix")
    ring = m.ring
    if n == 0:
        return ring.one()
    a = [list(r) for r in m.rows]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = piv * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = divexact(num, prev) if k else num
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def join_matrix(P: SymbolicMatrix, a: Sequence, Q: SymbolicMatrix, b: Sequence) -> SymbolicMatrix:
    """J(P, a; Q, b) = [[P, 1^T b], [a^T 1, Q]]."""
    p1, p2 = _dims(P)
    q1, q2 = _dims(Q)
    if len(a) != q1 or len(b) != q2:
        raise ValueError("join vectors do not match the blocks")
    if p1 + q1 != p2 + q2:
        raise ValueError("join is not square")
    ring = P.ring
    rows = []
    for i in range(p1):
        rows.append(list(P.rows[i]) + list(b))
    for i in range(q1):
        rows.append([a[i]] * p2 + list(Q.rows[i]))
    return SymbolicMatrix(ring, rows)


def _dims(m: SymbolicMatrix) -> Tuple[int, int]:
    if not m.rows:
        return 0, getattr(m, "_cols", 0)
    return m.shape


def empty_matrix(ring: PolyRing, rows: int, cols: int) -> SymbolicMatrix:
    """Matrix with a zero dimension (e.g. 1x0), kept with its column count."""
    if rows and cols:
        raise ValueError("use SymbolicMatrix for non-empty matrices")
    mat = SymbolicMatrix.__new__(_EmptyMatrix)
    mat.ring = ring
    mat.rows = tuple(() for _ in range(rows))
    mat._cols = cols
    return mat


class _EmptyMatrix(SymbolicMatrix):
    __slots__ = ("_cols",)

    @property
    def shape(self):
        return len(self.rows), self._cols


def join_determinant(P: SymbolicMatrix, a: Sequence, Q: SymbolicMatrix, b: Sequence) -> Polynomial:
    """det J(P, a; Q, b) through the four-case block formula."""
    ring = P.ring
    p1, p2 = _dims(P)
    q1, q2 = _dims(Q)
    if len(a) != q1 or len(b) != q2:
        raise ValueError("join vectors do not match the blocks")
    if p1 + q1 != p2 + q2:
        raise ValueError("join is not square")
    a = [_lift(ring, x) for x in a]
    b = [_lift(ring, x) for x in b]
    one, zero = ring.one(), ring.zero()
    if p1 == p2:
        # [[P, 1^T], [1, 0]] and [[0, b], [a^T, Q]]
        bordered_p = SymbolicMatrix(ring, [list(P.rows[i]) + [one] for i in range(p1)] + [[one] * p2 + [zero]])
        bordered_q = SymbolicMatrix(ring, [[zero] + b] + [[a[i]] + list(Q.rows[i]) for i in range(q1)])
        return _det(P) * _det(Q) - bordered_p.det() * bordered_q.det()
    if p1 == p2 + 1:
        left = SymbolicMatrix(ring, [list(P.rows[i]) + [one] for i in range(p1)])
        right = SymbolicMatrix(ring, [b] + [list(r) for r in Q.rows])
        return left.det() * right.det()
    if p2 == p1 + 1:
        left = SymbolicMatrix(ring, [list(r) for r in P.rows] + [[one] * p2])
        right = SymbolicMatrix(ring, [[a[i]] + list(Q.rows[i]) for i in range(q1)])
        return left.det() * right.det()
    return zero


def _det(m: SymbolicMatrix) -> Polynomial:
    r, c = _dims(m)
    if r == 0 and c == 0:
        return m.ring.one()
    return m.det()


# ---------------------------------------------------------------------------
# minor tables


class MinorTable:
    """All nonzero i x i minors of a matrix, built level by level.

    Level i is grown from level i-1 by Laplace expansion along the first row,
    so every subminor is computed once and shared.
    """

    def __init__(self, m: SymbolicMatrix):
        self.matrix = m
        self.ring = m.ring
        nr, nc = m.shape
        self.nrows, self.ncols = nr, nc
        # integer arithmetic throughout; reduction mod p happens on export
        self._entries = [[dict(e.terms) for e in row] for row in m.rows]
        lvl1 = {}
        for i in range(nr):
            for j in range(nc):
                if self._entries[i][j]:
                    lvl1[((i,), (j,))] = self._entries[i][j]
        self._levels: Dict[int, Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Terms]] = {1: lvl1}

    def level(self, s: int) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Terms]:
        if s < 1:
            raise ValueError("minor size must be positive")
        if s > min(self.nrows, self.ncols):
            return {}
        top = max(self._levels)
        while top < s:
            self._levels[top + 1] = self._grow(self._levels[top])
            top += 1
        return self._levels[s]

    def _grow(self, prev):
        ent = self._entries
        ncols = self.ncols
        acc: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Terms] = {}
        for (rows, cols), d in prev.items():
            for r0 in range(rows[0]):
                row = ent[r0]
                new_rows = (r0,) + rows
                for c in range(ncols):
                    e = row[c]
                    if not e:
                        continue
                    pos = bisect_left(cols, c)
                    if pos < len(cols) and cols[pos] == c:
                        continue
                    new_cols = cols[:pos] + (c,) + cols[pos:]
                    key = (new_rows, new_cols)
                    tgt = acc.get(key)
                    if tgt is None:
                        tgt = acc[key] = {}
                    sgn = -1 if pos % 2 else 1
                    for me, ce in e.items():
                        ce *= sgn
                        if any(me):
                            for md, cd in d.items():
                                t = tuple(x + y for x, y in zip(me, md))
                                tgt[t] = tgt.get(t, 0) + ce * cd
                        else:
                            for md, cd in d.items():
                                tgt[md] = tgt.get(md, 0) + ce * cd
        out = {}
        for key, t in acc.items():
            clean = {m: c for m, c in t.items() if c}
            if clean:
                out[key] = clean
        return out

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
        if len(rows) != len(cols):
            raise ValueError("minor needs as many rows as columns")
        if not rows:
            return self.ring.one()
        return Polynomial.from_terms(self.ring, self.level(len(rows)).get((rows, cols), {}))

    def minors(self, s: int, where=None) -> List[Polynomial]:
        out = []
        for (rows, cols), t in self.level(s).items():
            if where is None or where(rows, cols):
                p = Polynomial.from_terms(self.ring, t)
                if p:
                    out.append(p)
        return out


def _zero_ideal(ring: PolyRing) -> Ideal:
    return Ideal.zero(ring)


@dataclass
class CriticalIdealResult:
    graph: str
    index: int
    ideal: Ideal
    trivial: Optional[bool] = None
    generator_count_raw: int = 0
    generator_count: int = 0
    evidence: dict = field(default_factory=dict)


class CriticalIdeals:
    """Critical ideals of one graph over one coefficient ring, cached by index."""

    def __init__(
        self, g: SignedMultidigraph, coeffs: CoefficientRing = ZZ, name: str = "", order: MonomialOrder = DEGREVLEX
    ):
        self.graph = g
        self.name = name
        self.ring = graph_ring(g, coeffs, order)
        self.laplacian = generalized_laplacian(g, graph_ring(g, ZZ))
        self.table = MinorTable(self.laplacian)
        self._ideals: Dict[int, Ideal] = {}
        self._raw: Dict[int, int] = {}
        self._decided: Dict[int, tuple] = {}

    def ideal(self, i: int) -> Ideal:
        if i < 0:
            raise ValueError("critical ideal index must be >= 0")
        if i == 0:
            return Ideal.unit(self.ring)
        if i not in self._ideals:
            if i > self.graph.n:
                self._ideals[i] = _zero_ideal(self.ring)
                self._raw[i] = 0
            else:
                lvl = self.table.level(i)
                self._raw[i] = len(lvl)
                gens = {Polynomial.from_terms(self.ring, t) for t in _dedupe_terms(lvl.values())}
                self._ideals[i] = Ideal(self.ring, gens)
        return self._ideals[i]

    def result(self, i: int, budget: Budget = DEFAULT_BUDGET, decide: bool = True) -> CriticalIdealResult:
        ideal = self.ideal(i)
        res = CriticalIdealResult(self.name, i, ideal, None, self._raw.get(i, 0), len(ideal))
        if decide:
            res.trivial, res.evidence = triviality_evidence(ideal, budget)
        return res

    def decide(self, i: int, budget: Budget = DEFAULT_BUDGET, certificates: bool = True):
        """``(trivial, evidence)`` for I_i, trying cheap exact certificates first."""
        if i in self._decided:
            return self._decided[i]
        ans = None
        if certificates and 1 <= i <= self.graph.n:
            ans = constant_minor_certificate(self.graph, i, self.ring.coeffs)
            if ans is None:
                ans = rank_point_certificate(self.graph, i, self.ring.coeffs)
        if ans is None:
            ans = triviality_evidence(self.ideal(i), budget)
        self._decided[i] = ans
        return ans

    def bordered_classes(self, v, j: int) -> Dict[str, List[Polynomial]]:
        """The four generator classes of I_j obtained by pivoting on vertex v."""
        g = self.graph
        iv = g.index(g.vertex(v))
        out: Dict[str, List[Polynomial]] = {"inner": [], "column": [], "row": [], "pivot": []}
        for (rows, cols), t in self.table.level(j).items():
            p = Polynomial.from_terms(self.ring, t)
            if not p:
                continue
            if iv not in rows and iv not in cols:
                out["inner"].append(p)
            elif iv not in rows:
                out["column"].append(p)
            elif iv not in cols:
                out["row"].append(p)
            else:
                out["pivot"].append(p)
        return out


# ---------------------------------------------------------------------------
# exact certificates that avoid enumerating every minor


def _int_det(a: List[List[int]]) -> int:
    """Integer Bareiss determinant."""
    a = [row[:] for row in a]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rank_mod(a: List[List[int]], p: int) -> int:
    a = [[x % p for x in row] for row in a]
    rows, cols = len(a), len(a[0]) if a else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        pr = a[rank]
        for r in range(rows):
            if r != rank and a[r][c]:
                f = a[r][c] * inv % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], pr)]
        rank += 1
    return rank


CONSTANT_MINOR_CAP = 20000


def constant_minor_certificate(g: SignedMultidigraph, i: int, coeffs: CoefficientRing, cap: int = CONSTANT_MINOR_CAP):
    """Prove I_i trivial from minors avoiding the diagonal (pure integers).

    Returns ``(True, evidence)`` once the constants found generate the unit
    ideal, or None when no proof turns up within ``cap`` submatrices.
    """
    n = g.n
    if 2 * i > n:
        return None
    w = g.matrix()
    mod = coeffs.modulus
    acc = 0
    seen = 0
    for rows in combinations(range(n), i):
        rest = [c for c in range(n) if c not in rows]
        for cols in combinations(rest, i):
            seen += 1
            if seen > cap:
                return None
            d = _int_det([[-w[r][c] for c in cols] for r in rows])
            if not d:
                continue
            if mod:
                if d % mod:
                    return True, {"route": "constant-minor", "rows": rows, "cols": cols, "value": d}
                continue
            acc = gcd(acc, d)
            if acc == 1:
                return True, {"route": "constant-minors", "checked": seen}
    return None


POINT_CAP = 2500


def rank_point_certificate(g: SignedMultidigraph, i: int, coeffs: CoefficientRing, cap: int = POINT_CAP, seed: int = 0):
    """Prove I_i nontrivial by a point over F_p where L(G, x) has rank < i.

    At such a point every i x i minor vanishes mod p, so 1 is not in I_i.
    Points constant on each family of copies are tried first.
    """
    n = g.n
    w = g.matrix()
    names = []
    for v in g.vertices:
        if v.name not in names:
            names.append(v.name)
    cls = [names.index(v.name) for v in g.vertices]
    primes = [coeffs.modulus] if coeffs.modulus else [2, 3, 5, 7]
    rng = random.Random(seed)
    for p in primes:
        k = len(names)
        if p**k <= cap:
            pts = product(range(p), repeat=k)
        else:
            pts = (tuple(rng.randrange(p) for _ in range(k)) for _ in range(cap // 4))
        for vals in pts:
            a = [[vals[cls[r]] if r == c else -w[r][c] for c in range(n)] for r in range(n)]
            if _rank_mod(a, p) < i:
                point = {str(v.var): vals[cls[t]] % p for t, v in enumerate(g.vertices)}
                return False, {"route": "rank-deficient-point", "prime": p, "point": point}
    return None


def _degree_in(p: Polynomial, i: int) -> int:
    return max((m[i] for m in p.terms), default=0)


def _dedupe_terms(items: Iterable[Terms]) -> List[Terms]:
    seen = {}
    for t in items:
        key = frozenset(t.items())
        neg = frozenset((m, -c) for m, c in t.items())
        if key in seen or neg in seen:
            continue
        seen[key] = t
    return list(seen.values())


def critical_ideal(
    g: SignedMultidigraph, i: int, coeffs: CoefficientRing = ZZ, budget: Budget = DEFAULT_BUDGET, decide: bool = True
) -> CriticalIdealResult:
    if i < 1:
        raise ValueError("critical ideal index must be >= 1")
    return CriticalIdeals(g, coeffs).result(i, budget, decide)


# ---------------------------------------------------------------------------
# co-rank


@dataclass
class CorankReport:
    gamma: int
    ring: str
    first_nontrivial: Optional[int]
    ideal: Optional[Ideal] = None
    evidence: dict = field(default_factory=dict)
    method: str = "direct"


def corank(
    g: SignedMultidigraph,
    coeffs: CoefficientRing = ZZ,
    budget: Budget = DEFAULT_BUDGET,
    cache: Optional[CriticalIdeals] = None,
    with_ideal: bool = False,
    order: MonomialOrder = DEGREVLEX,
) -> CorankReport:
    """Largest i with I_i trivial, scanning upward from i = 1."""
    ci = cache or CriticalIdeals(g, coeffs, order=order)
    gamma = 0
    for i in range(1, g.n + 1):
        trivial_i, ev = ci.decide(i, budget)
        if not trivial_i:
            return CorankReport(gamma, str(coeffs), i, ci.ideal(i) if with_ideal else None, ev)
        gamma = i
    # I_n = <det L> has the term x_1...x_n, so the loop always returns
    raise AssertionError("top critical ideal reported trivial")


def phi(g: SignedMultidigraph, d: TwinVector, ring: PolyRing) -> Dict[Var, int]:
    """Evaluation attached to d: duplicated -> 0, replicated -> -1, untouched kept."""
    out = {}
    for v in g.vertices:
        c = d.entries[v]
        if c > 0:
            out[v.var] = 0
        elif c < 0:
            out[v.var] = -1
    return out


def corank_blowup(
    g: SignedMultidigraph,
    d: TwinVector,
    coeffs: CoefficientRing = ZZ,
    budget: Budget = DEFAULT_BUDGET,
    check: bool = False,
    order: MonomialOrder = DEGREVLEX,
) -> CorankReport:
    """gamma(G^d) from the evaluated ideals I_j(G)|phi(d), without building G^d."""
    ci = CriticalIdeals(g, coeffs, order=order)
    assign = phi(g, d, ci.ring)
    gamma = 0
    report = None
    for j in range(1, g.n + 1):
        ideal = ci.ideal(j).substitute(assign)
        trivial_j, ev = triviality_evidence(ideal, budget)
        if not trivial_j:
            report = CorankReport(gamma, str(coeffs), j, ideal, ev, "phi")
            break
        gamma = j
    if report is None:
        report = CorankReport(gamma, str(coeffs), None, None, {}, "phi")
    if check:
        direct = corank(blowup(g, d.support()), coeffs, budget, order=order)
        if direct.gamma != report.gamma:
            raise BlowupMismatch(
                f"phi evaluation gives {report.gamma}, direct construction gives {direct.gamma}"
            )
        report.method = "phi+check"
    return report


def blowup_ideal_superset(g: SignedMultidigraph, d: TwinVector, j: int, coeffs: CoefficientRing = ZZ) -> Ideal:
    """<x_{v^i} (d_v >= 1), x_{v^i} + 1 (d_v <= -1), I_j(G)|phi(d)> in the ring of G^d."""
    if not 1 <= j <= g.n:
        raise ValueError(f"index {j} outside 1..{g.n}")
    big = blowup(g, d)
    ring = graph_ring(big, coeffs)
    ci = CriticalIdeals(g, coeffs)
    evaluated = ci.ideal(j).substitute(phi(g, d, ci.ring))
    gens = [ring.convert(p) for p in evaluated.generators]
    for u in big.vertices:
        c = d.entries[g.vertex(u.name)]
        if c > 0:
            gens.append(ring.var(u.var))
        elif c < 0:
            gens.append(ring.var(u.var) + 1)
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# twin lemmas


def _twin_products(ring: PolyRing, xs: Sequence[Polynomial], l: int, shift: int) -> List[Polynomial]:
    """P_l (shift 0) or P~_l (shift 1): products of l distinct (x + shift)."""
    if l == 0:
        return [ring.one()]
    return [prod((x + shift for x in c), start=ring.one()) for c in combinations(xs, l)]


def _elementary_cofactor_sum(ring: PolyRing, xs: Sequence[Polynomial]) -> Polynomial:
    """sum over t of prod_{s != t} xs[s]."""
    total = ring.zero()
    for t in range(len(xs)):
        total = total + prod((xs[s] for s in range(len(xs)) if s != t), start=ring.one())
    return total


def _times(ps: Sequence[Polynomial], qs: Iterable[Polynomial]) -> List[Polynomial]:
    qs = list(qs)
    return [p * q for p in ps for q in qs]


def dup_rep_expanded_ideal(
    g: SignedMultidigraph, v, k: int, j: int, kind: str = "duplicate", coeffs: CoefficientRing = ZZ
) -> Ideal:
    """I_j(d^k(G, v)) or I_j(r^k(G, v)) assembled from data of G alone."""
    if kind not in ("duplicate", "replicate"):
        raise ValueError(f"unknown twin kind {kind!r}")
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if g.n < 2:
        raise PreconditionError("the graph needs at least two vertices")
    if not 1 <= j <= g.n + k:
        raise ValueError(f"index {j} outside 1..{g.n + k}")
    v = g.vertex(v)
    big = duplicate_replicate(g, v, k, kind)
    ring = graph_ring(big, coeffs)
    copies = [u for u in big.vertices if u.name == v.name and u.copy >= v.copy]
    xs = [ring.var(u.var) for u in copies]
    shift = 0 if kind == "duplicate" else 1
    value = 0 if kind == "duplicate" else -1
    m = min(k, j - 1)

    ci = CriticalIdeals(g, coeffs)
    small = ci.ring
    iv = g.index(v)
    xvar = v.var

    def conv(ps):
        return [ring.convert(p) for p in ps]

    gens: List[Polynomial] = []
    for l in range(m):
        ev = ci.ideal(j - l).substitute({xvar: value}) if j - l <= g.n else Ideal.zero(small)
        gens += _times(_twin_products(ring, xs, l, shift), conv(ev.generators))
    pm = _twin_products(ring, xs, m, shift)
    s = j - m
    if 1 <= s <= g.n - 1:
        lvl = ci.table.level(s)
        inner, col, row = [], [], []
        for (rows, cols), t in lvl.items():
            p = Polynomial.from_terms(small, t)
            if iv not in rows and iv not in cols:
                inner.append(p)
            elif iv in cols and iv not in rows:
                col.append(p)
            elif iv in rows and iv not in cols:
                row.append(p)
        gens += _times(pm, conv(inner + col + row))
    # S_j^k
    if j <= k + 1:
        if kind == "duplicate":
            gens += _twin_products(ring, xs, j, 0)
        else:
            for c in combinations(xs, j):
                shifted = [x + 1 for x in c]
                gens.append(prod(shifted, start=ring.one()) - _elementary_cofactor_sum(ring, shifted))
            if j <= k:
                # j x j minors of the copy clique with one off-diagonal row give
                # -prod of (j - 1) shifted copies; no other family covers them when v is isolated
                gens += _twin_products(ring, xs, j - 1, 1)
    else:
        shifted = [x + shift for x in xs]
        full = prod(shifted, start=ring.one())
        side = _elementary_cofactor_sum(ring, shifted)
        size = j - k
        if size <= g.n:
            for (rows, cols), t in ci.table.level(size).items():
                if iv not in rows or iv not in cols:
                    continue
                minor = Polynomial.from_terms(small, t)
                # det J(0, a'; M, b') (resp. J(-1, ...)) is the minor at x_v = value,
                # and the signed cofactor det M is the slope in the linear variable x_v
                det_j = minor.substitute({xvar: value})
                det_m = divexact(minor - minor.substitute({xvar: 0}), small.var(xvar))
                gens.append(ring.convert(det_m) * full + ring.convert(det_j) * side)
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# stabilization


@dataclass(frozen=True)
class StabilizationConstants:
    kind: str
    gamma_twin: int
    gamma_v: int
    lam: int

    def __post_init__(self):
        if self.lam != (0 if self.gamma_twin == self.gamma_v else 1):
            raise AssertionError("lambda inconsistent with the co-ranks")
        if not 0 <= self.gamma_twin - self.gamma_v <= 2:
            raise AssertionError("co-rank gap outside [0, 2]")


def stabilization_constants(
    g: SignedMultidigraph, v, kind: str = "duplicate", coeffs: CoefficientRing = ZZ, budget: Budget = DEFAULT_BUDGET
) -> StabilizationConstants:
    v = g.vertex(v)
    gv = corank(g.delete_vertex(v), coeffs, budget).gamma
    gt = corank(duplicate_replicate(g, v, 1, kind), coeffs, budget).gamma
    return StabilizationConstants(kind, gt, gv, 0 if gt == gv else 1)


def stabilized_twin_ideal(
    g: SignedMultidigraph,
    v,
    k: int,
    i: int,
    kind: str = "duplicate",
    coeffs: CoefficientRing = ZZ,
    budget: Budget = DEFAULT_BUDGET,
    constants: Optional[StabilizationConstants] = None,
) -> Tuple[int, int, Ideal]:
    """Asserted value of I_{gamma_t + k}(twin^{k + lambda + i}(G, v)).

    Returns ``(index, copies, ideal)`` where the ideal lives in the ring of the
    graph with ``copies`` extra twins of v.
    """
    if k < 1 or i < 0:
        raise PreconditionError("need k >= 1 and i >= 0")
    gamma = corank(g, coeffs, budget).gamma
    if gamma < 2:
        raise PreconditionError(f"co-rank {gamma} < 2; stabilization needs at least 2")
    v = g.vertex(v)
    c = constants or stabilization_constants(g, v, kind, coeffs, budget)
    copies = k + c.lam + i
    index = c.gamma_twin + k
    return index, copies, twin_formula_ideal(g, v, copies, index, k, kind, coeffs)


def twin_formula_ideal(
    g: SignedMultidigraph, v, copies: int, index: int, k: int, kind: str = "duplicate", coeffs: CoefficientRing = ZZ
) -> Ideal:
    """<{P_l(v) * I_{index-l}(G)|x_v=0}_{l<=k}> (P~ and x_v=-1 for replication).

    The ring is that of the graph with ``copies`` extra twins of v.  Used both
    for the stabilized value and for below-threshold negative controls.
    """
    v = g.vertex(v)
    big = duplicate_replicate(g, v, copies, kind)
    ring = graph_ring(big, coeffs)
    xs = [ring.var(u.var) for u in big.vertices if u.name == v.name]
    shift, value = (0, 0) if kind == "duplicate" else (1, -1)
    ci = CriticalIdeals(g, coeffs)
    gens = []
    for l in range(k + 1):
        ev = ci.ideal(index - l).substitute({v.var: value})
        gens += _times(_twin_products(ring, xs, l, shift), [ring.convert(p) for p in ev.generators])
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# closed forms


def _side_vars(ring: PolyRing, name: str, count: int) -> List[Polynomial]:
    return [ring.var(Var(name, c)) for c in range(count)]


def _sigma(ring: PolyRing, xs: Sequence[Polynomial], j: int) -> List[Polynomial]:
    n = len(xs)
    if j == n - 1:
        return [_elementary_cofactor_sum(ring, xs)]
    return _twin_products(ring, xs, j, 0)


def complete_closed_form(n: int, j: int, coeffs: CoefficientRing = ZZ) -> Ideal:
    if n < 2 or j not in (n - 1, n):
        raise PreconditionError("complete-graph forms cover j in {n-1, n} with n >= 2")
    ring = graph_ring(complete(n), coeffs)
    shifted = [x + 1 for x in ring.gens()]
    if j == n:
        return Ideal(ring, [prod(shifted, start=ring.one()) - _elementary_cofactor_sum(ring, shifted)])
    return Ideal(ring, [prod(c, start=ring.one()) for c in combinations(shifted, n - 2)])


def bipartite_closed_form(n: int, m: int, j: int, coeffs: CoefficientRing = ZZ) -> Ideal:
    if not 2 <= n <= m:
        raise PreconditionError("need 2 <= n <= m")
    if not 1 <= j <= n + m:
        raise PreconditionError(f"index {j} outside 1..{n + m}")
    ring = graph_ring(complete_bipartite(n, m), coeffs)
    u = _side_vars(ring, "1", n)
    w = _side_vars(ring, "2", m)
    if j <= 2:
        return Ideal.unit(ring)
    if j <= n + m - 2:
        gens = []
        for r in range(0, n):
            s = j - 2 - r
            if 0 <= s <= m - 1:
                gens += _times(_sigma(ring, u, r), _sigma(ring, w, s))
        return Ideal(ring, gens)
    if j == n + m - 1:
        gens = _times(_sigma(ring, u, n - 1), _sigma(ring, w, m - 2))
        gens += _times(_sigma(ring, u, n - 2), _sigma(ring, w, m - 1))
        gens += _times(_twin_products(ring, u, n - 1, 0), _twin_products(ring, w, m - 1, 0))
        return Ideal(ring, gens)
    top = prod(u + w, start=ring.one())
    return Ideal(ring, [top - _sigma(ring, u, n - 1)[0] * _sigma(ring, w, m - 1)[0]])


def trivial_closed_form(k: int, l: int, coeffs: CoefficientRing = ZZ) -> Ideal:
    ring = graph_ring(trivial(k), coeffs)
    if l > k:
        return Ideal.zero(ring)
    return Ideal(ring, _twin_products(ring, ring.gens(), l, 0))


def union_closed_form(ladder_g: Sequence[Ideal], ladder_h: Sequence[Ideal], ring: PolyRing, j: int) -> Ideal:
    """I_j(G + H) from I_0..I_{|G|}(G) and I_0..I_{|H|}(H)."""

    def at(ladder, i):
        return ladder[i] if i < len(ladder) else None

    gens = []
    for i in range(j + 1):
        a, b = at(ladder_g, i), at(ladder_h, j - i)
        if a is None or b is None:
            continue
        ga = [ring.convert(p) for p in a.generators]
        gb = [ring.convert(p) for p in b.generators]
        gens += _times(ga, gb)
    return Ideal(ring, gens)


def ideal_ladder(g: SignedMultidigraph, coeffs: CoefficientRing = ZZ) -> List[Ideal]:
    ci = CriticalIdeals(g, coeffs)
    return [ci.ideal(i) for i in range(g.n + 1)]


def closed_form_ideal(spec: str, *args, coeffs: CoefficientRing = ZZ) -> Ideal:
    """Dispatch: ``complete n j``, ``bipartite n m j``, ``trivial k l``."""
    table = {"complete": complete_closed_form, "bipartite": bipartite_closed_form, "trivial": trivial_closed_form}
    if spec not in table:
        raise ValueError(f"unknown closed form {spec!r}")
    return table[spec](*args, coeffs=coeffs)


# ---------------------------------------------------------------------------
# cographs


@dataclass(frozen=True)
class CographBound:
    certified: int
    conjectured: int


def cograph_lower_bound(t: Cotree) -> CographBound:
    """Certified lower bound on gamma of a cograph, plus the conjectured one."""
    return CographBound(max(_threshold_bound(t), _recursive_bound(t)), _conjectured_bound(t))


def _threshold_bound(t: Cotree, depth: int = 1) -> int:
    """floor((d+1)/2) for the deepest join node at depth d (root at depth 1).

    One sibling leaf per node on the path to that join, plus a leaf below it,
    induces Th_{d+1}, and gamma(Th_{2k}) >= k.
    """
    if t.is_leaf():
        return 0
    here = (depth + 1) // 2 if t.kind == "join" else 0
    return max([here] + [_threshold_bound(c, depth + 1) for c in t.children])


def _recursive_bound(t: Cotree) -> int:
    if t.is_leaf():
        return 0
    kids = [_recursive_bound(c) for c in t.children]
    if t.kind == "union":
        rec = sum(max(b, 1 if c.has_edge() else 0) for b, c in zip(kids, t.children))
    else:
        noncomplete = sum(1 for c in t.children if not c.is_complete())
        rec = max(max(kids), noncomplete - 1)
    # every node bound applies to an induced subgraph, so the threshold bound does too
    return max(rec, _threshold_bound(t))


def _conjectured_bound(t: Cotree) -> int:
    internal = t.internal_nodes()
    if not internal:
        return 0
    edges = len(internal) - 1
    inner = sum(1 for node in internal if any(not c.is_leaf() for c in node.children))
    return edges - inner

"""Strong Groebner bases over Z, ordinary ones over Z/p, and ideal decisions.

Over the integers the completion follows the Kandri-Rody/Kapur recipe for
Euclidean domains: besides S-polynomials, every critical pair whose leading
coefficients do not divide each other spawns a G-polynomial (a Bezout
combination whose leading coefficient is their gcd).  Reduction first looks
for an exact reducer (leading monomial and leading coefficient both divide)
and otherwise shrinks the coefficient by Euclidean division.

The finished basis is checked once more from scratch: every S-polynomial of
the interreduced basis must reduce to zero and every G-polynomial leading
term must be strongly divisible by some basis leading term.  Pair-pruning
criteria therefore only affect speed, never the answer.
"""

from __future__ import annotations

import heapq
import logging
import os
from dataclasses import dataclass
from itertools import product
from math import gcd
from operator import add, sub
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .polyring import (
    DEGREVLEX,
    CoefficientRing,
    MonomialOrder,
    Polynomial,
    PolyRing,
    RingMismatchError,
    Terms,
    format_terms,
)

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """The completion hit a configured resource cap; no answer was produced."""


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 200_000
    max_degree: int = 60

    def __post_init__(self):
        if self.max_pairs <= 0 or self.max_degree <= 0:
            raise ValueError("budgets must be positive")

    @classmethod
    def from_env(cls, environ=None) -> "Budget":
        env = os.environ if environ is None else environ
        kw = {}
        if env.get("CRITICALIS_MAX_PAIRS"):
            kw["max_pairs"] = int(env["CRITICALIS_MAX_PAIRS"])
        if env.get("CRITICALIS_MAX_DEGREE"):
            kw["max_degree"] = int(env["CRITICALIS_MAX_DEGREE"])
        return cls(**kw)


DEFAULT_BUDGET = Budget()


def _normalize_sign(p: Polynomial) -> Polynomial:
    if not p.terms:
        return p
    lc = p.terms[max(p.terms, key=DEGREVLEX.key)]
    mod = p.ring.coeffs.modulus
    if mod:
        if lc != 1:
            return p.scale(pow(lc, -1, mod))
        return p
    return -p if lc < 0 else p


def _generator_sort_key(p: Polynomial):
    return (p.total_degree(), len(p.terms), str(p))


class Ideal:
    """Finitely generated ideal with a canonical generator list."""

    __slots__ = ("ring", "generators")

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial] = ()):
        seen = {}
        for g in generators:
            if isinstance(g, int):
                g = ring.const(g)
            if g.ring != ring:
                raise RingMismatchError(f"generator lives in {g.ring}, ideal in {ring}")
            if g.is_zero():
                continue
            g = _normalize_sign(g)
            seen.setdefault(g, None)
        self.ring = ring
        self.generators = tuple(sorted(seen, key=_generator_sort_key))

    @classmethod
    def zero(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, ())

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.one()])

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __repr__(self) -> str:
        return f"Ideal({self})"

    def strings(self) -> List[str]:
        return [str(g) for g in self.generators]

    def convert(self, ring: PolyRing) -> "Ideal":
        return Ideal(ring, [ring.convert(g) for g in self.generators])

    def substitute(self, assignment) -> "Ideal":
        return Ideal(self.ring, [g.substitute(assignment) for g in self.generators])

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatchError("ideal sum across rings")
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatchError("ideal product across rings")
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])


class StrongBasis:
    """Completed (strong) Groebner basis of ``ideal``."""

    def __init__(self, ideal: Ideal, basis: Sequence[Polynomial], order: MonomialOrder):
        self.ideal = ideal
        self.basis = tuple(basis)
        self.order = order

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant() and self.ring.coeffs.is_unit(
            self.basis[0].constant_value()
        )

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()

    def __str__(self) -> str:
        return "{" + ", ".join(str(g) for g in self.basis) + "}"


# ---------------------------------------------------------------------------
# raw-term machinery shared by completion and normal forms


class _Elem:
    __slots__ = ("terms", "lm", "lc", "mask", "deg")

    def __init__(self, terms: Terms, key):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]
        self.mask = _mask(self.lm)
        self.deg = sum(self.lm)


def _mask(m) -> int:
    x = 0
    for i, e in enumerate(m):
        if e:
            x |= 1 << i
    return x


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _shift(terms: Terms, s, c: int) -> Terms:
    if any(s):
        return {tuple(map(add, m, s)): c * a for m, a in terms.items()}
    return {m: c * a for m, a in terms.items()}


def _combine(a: Terms, b: Terms, mod: int) -> Terms:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if mod:
            v %= mod
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


class _Reducer:
    """Reduction of raw term dicts modulo a list of basis elements."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.mod = ring.coeffs.modulus
        key = ring.order.key
        self.key = key
        self._neg = {}

    def negkey(self, m):
        k = self._neg.get(m)
        if k is None:
            k = tuple(-x for x in self.key(m))
            self._neg[m] = k
        return k

    def reduce(self, terms: Terms, elems: Sequence[_Elem], full: bool = True) -> Terms:
        mod = self.mod
        p = dict(terms)
        heap = [(self.negkey(m), m) for m in p]
        heapq.heapify(heap)
        rem: Terms = {}
        negkey = self.negkey
        while heap:
            _, m = heapq.heappop(heap)
            c = p.get(m)
            if c is None:
                continue
            mm = _mask(m)
            while True:
                red = None
                q = 0
                for e in elems:
                    if e.mask & ~mm or not _divides(e.lm, m):
                        continue
                    if mod:
                        red, q = e, (c * pow(e.lc, -1, mod)) % mod
                        break
                    if c % e.lc == 0:
                        red, q = e, c // e.lc
                        break
                    if red is None and (c < 0 or c >= abs(e.lc)):
                        red, q = e, c // e.lc
                if red is None:
                    break
                s = tuple(map(sub, m, red.lm))
                for mg, cg in red.terms.items():
                    t = tuple(map(add, mg, s)) if s else mg
                    v = p.get(t)
                    if v is None:
                        v = -q * cg
                        if mod:
                            v %= mod
                        if v:
                            p[t] = v
                            heapq.heappush(heap, (negkey(t), t))
                    else:
                        v -= q * cg
                        if mod:
                            v %= mod
                        if v:
                            p[t] = v
                        else:
                            del p[t]
                c = p.get(m)
                if c is None:
                    break
            if c is not None:
                rem[m] = c
                del p[m]
                if not full:
                    rem.update(p)
                    return rem
        return rem


# ---------------------------------------------------------------------------
# completion


class _Completion:
    def __init__(self, ring: PolyRing, budget: Budget, stop_on_unit: bool):
        self.ring = ring
        self.budget = budget
        self.stop_on_unit = stop_on_unit
        self.mod = ring.coeffs.modulus
        self.red = _Reducer(ring)
        self.key = ring.order.key
        self.G: List[_Elem] = []
        # indices whose leading term a newer element strongly divides; they
        # finish their queued pairs but start no new ones and stop reducing
        self.dead: Set[int] = set()
        self.live: List[_Elem] = []
        self.queue = []
        self.pending = set()
        self.made: Set[Tuple[int, int]] = set()
        self.seq = 0
        self.pairs_done = 0
        self.unit = False

    # queue entries: (order key of lcm, seq, kind, payload); smallest first

    def push_input(self, terms: Terms):
        m = max(terms, key=self.key)
        self.seq += 1
        heapq.heappush(self.queue, (self.key(m), self.seq, 0, terms))

    def _push_pair(self, i: int, j: int):
        a, b = self.G[i], self.G[j]
        L = _lcm(a.lm, b.lm)
        self.seq += 1
        self.pending.add((i, j))
        self.made.add((i, j))
        heapq.heappush(self.queue, (self.key(L), self.seq, 1, (i, j)))

    def _monic(self, terms: Terms) -> Terms:
        if self.mod:
            lc = terms[max(terms, key=self.key)]
            inv = pow(lc, -1, self.mod)
            return {m: (c * inv) % self.mod for m, c in terms.items()}
        lc = terms[max(terms, key=self.key)]
        if lc < 0:
            return {m: -c for m, c in terms.items()}
        return terms

    def add(self, terms: Terms):
        terms = self._monic(terms)
        e = _Elem(terms, self.key)
        if e.deg > self.budget.max_degree:
            raise BudgetExceeded(f"basis degree {e.deg} exceeds cap {self.budget.max_degree}")
        if not any(e.lm) and self.ring.coeffs.is_unit(e.lc):
            self.unit = True
            self._reset([e])
            return
        self.G.append(e)
        j = len(self.G) - 1
        for i in range(j):
            if i in self.dead:
                continue
            self._push_pair(i, j)
            f = self.G[i]
            if _divides(e.lm, f.lm) and (self.mod or f.lc % e.lc == 0):
                self.dead.add(i)
        self.live = [f for k, f in enumerate(self.G) if k not in self.dead]

    def _reset(self, elems: List[_Elem]):
        self.G = list(elems)
        self.dead = set()
        self.live = list(elems)
        self.made = set()

    def _s_poly(self, a: _Elem, b: _Elem) -> Terms:
        L = _lcm(a.lm, b.lm)
        if self.mod:
            ca, cb = b.lc, a.lc
        else:
            g = gcd(a.lc, b.lc)
            ca, cb = b.lc // g, a.lc // g
        return _combine(
            _shift(a.terms, tuple(map(sub, L, a.lm)), ca),
            _shift(b.terms, tuple(map(sub, L, b.lm)), -cb),
            self.mod,
        )

    def _g_poly(self, a: _Elem, b: _Elem) -> Terms:
        L = _lcm(a.lm, b.lm)
        g, s, t = _xgcd(a.lc, b.lc)
        return _combine(
            _shift(a.terms, tuple(map(sub, L, a.lm)), s),
            _shift(b.terms, tuple(map(sub, L, b.lm)), t),
            0,
        )

    def _strongly_divisible(self, m, c, skip=()) -> bool:
        mm = _mask(m)
        for k, e in enumerate(self.G):
            if k in skip or k in self.dead:
                continue
            if e.mask & ~mm or not _divides(e.lm, m):
                continue
            if self.mod or c % e.lc == 0:
                return True
        return False

    def _chain_skip(self, i: int, j: int) -> bool:
        a, b = self.G[i], self.G[j]
        L = _lcm(a.lm, b.lm)
        C = 1 if self.mod else a.lc * b.lc // gcd(a.lc, b.lc)
        mL = _mask(L)
        pend, made = self.pending, self.made
        for k, e in enumerate(self.G):
            if k == i or k == j:
                continue
            if e.mask & ~mL or not _divides(e.lm, L):
                continue
            if not self.mod and C % e.lc:
                continue
            p1 = (i, k) if i < k else (k, i)
            p2 = (j, k) if j < k else (k, j)
            if p1 not in made or p2 not in made:
                continue
            if p1 not in pend and p2 not in pend:
                return True
            # both side pairs have strictly smaller lcm, so they are settled first
            if _lcm(a.lm, e.lm) != L and _lcm(b.lm, e.lm) != L:
                return True
        return False

    def _process_pair(self, i: int, j: int):
        self.pending.discard((i, j))
        self.pairs_done += 1
        if self.pairs_done > self.budget.max_pairs:
            raise BudgetExceeded(f"more than {self.budget.max_pairs} critical pairs")
        a, b = self.G[i], self.G[j]
        coprime_m = not any(x and y for x, y in zip(a.lm, b.lm))
        coprime_c = self.mod or gcd(a.lc, b.lc) == 1
        if not (coprime_m and coprime_c) and not self._chain_skip(i, j):
            h = self.red.reduce(self._s_poly(a, b), self.live)
            if h:
                self.add(h)
                if self.unit:
                    return
        if not self.mod and a.lc % b.lc and b.lc % a.lc:
            L = _lcm(a.lm, b.lm)
            if not self._strongly_divisible(L, gcd(a.lc, b.lc)):
                h = self.red.reduce(self._g_poly(a, b), self.live)
                if h:
                    self.add(h)

    def drain(self):
        while self.queue and not self.unit:
            _, _, kind, payload = heapq.heappop(self.queue)
            if kind == 0:
                h = self.red.reduce(payload, self.live)
                if h:
                    self.add(h)
            else:
                self._process_pair(*payload)

    def interreduce(self) -> List[_Elem]:
        if self.unit:
            return self.G
        key = self.key
        elems = sorted(self.live, key=lambda e: (key(e.lm), abs(e.lc)))
        kept: List[_Elem] = []
        for e in elems:
            if any(
                _divides(f.lm, e.lm) and (self.mod or e.lc % f.lc == 0) for f in kept
            ):
                continue
            kept.append(e)
        out = []
        for idx, e in enumerate(kept):
            others = kept[:idx] + kept[idx + 1 :]
            tail = {m: c for m, c in e.terms.items() if m != e.lm}
            tail = self.red.reduce(tail, others) if tail else {}
            tail[e.lm] = e.lc
            out.append(_Elem(self._monic(tail), key))
        return out

    def verify(self, elems: List[_Elem]) -> List[Terms]:
        """Return witnesses violating the strong-basis closure (empty = closed)."""
        self._reset(elems)
        bad = []
        for j in range(len(elems)):
            for i in range(j):
                a, b = elems[i], elems[j]
                coprime_m = not any(x and y for x, y in zip(a.lm, b.lm))
                coprime_c = self.mod or gcd(a.lc, b.lc) == 1
                if not (coprime_m and coprime_c):
                    h = self.red.reduce(self._s_poly(a, b), elems)
                    if h:
                        bad.append(h)
                if not self.mod and a.lc % b.lc and b.lc % a.lc:
                    L = _lcm(a.lm, b.lm)
                    if not self._strongly_divisible(L, gcd(a.lc, b.lc)):
                        h = self.red.reduce(self._g_poly(a, b), elems)
                        if h:
                            bad.append(h)
        return bad

    def run(self, gens: Iterable[Terms]) -> List[_Elem]:
        for t in gens:
            if t:
                self.push_input(t)
        while True:
            self.drain()
            if self.unit:
                return self.G
            elems = self.interreduce()
            bad = self.verify(elems)
            if not bad:
                return elems
            log.warning("basis failed closure check; resuming with %d witnesses", len(bad))
            self.queue, self.pending = [], set()
            self._reset([])
            for e in elems:
                self.push_input(e.terms)
            for t in bad:
                self.push_input(t)


def _xgcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def strong_groebner(
    ideal: Ideal,
    order: Optional[MonomialOrder] = None,
    budget: Budget = DEFAULT_BUDGET,
    stop_on_unit: bool = True,
) -> StrongBasis:
    """Strong Groebner basis over Z (ordinary reduced basis over Z/p)."""
    ring = ideal.ring if order is None else ideal.ring.with_order(order)
    comp = _Completion(ring, budget, stop_on_unit)
    elems = comp.run(g.terms for g in reversed(ideal.generators))
    basis = [Polynomial(ring, e.terms) for e in elems]
    basis.sort(key=lambda p: ring.order.key(p.leading_monomial()))
    if ring != ideal.ring:
        ideal = Ideal(ring, [Polynomial(ring, g.terms) for g in ideal.generators])
    return StrongBasis(ideal, basis, ring.order)


def normal_form(p: Polynomial, basis: StrongBasis) -> Polynomial:
    ring = basis.ring
    if p.ring.variables != ring.variables or p.ring.coeffs != ring.coeffs:
        raise RingMismatchError(f"{p.ring} vs {ring}")
    red = _Reducer(ring)
    elems = [_Elem(g.terms, ring.order.key) for g in basis.basis]
    return Polynomial(p.ring, red.reduce(p.terms, elems))


def closure_violations(basis: StrongBasis) -> List[Polynomial]:
    """Nonzero S/G-polynomial remainders of ``basis`` (empty when closed)."""
    ring = basis.ring
    comp = _Completion(ring, DEFAULT_BUDGET, True)
    elems = [_Elem(g.terms, ring.order.key) for g in basis.basis]
    return [Polynomial(ring, t) for t in comp.verify(elems)]


def ideal_contains(ideal: Ideal, p: Polynomial, budget: Budget = DEFAULT_BUDGET) -> bool:
    return normal_form(p, strong_groebner(ideal, budget=budget)).is_zero()


def ideal_subset(a: Ideal, b: Ideal, budget: Budget = DEFAULT_BUDGET) -> bool:
    """Whether every generator of ``a`` lies in ``b``."""
    _check_same(a, b)
    gb = strong_groebner(b, budget=budget)
    return all(normal_form(g, gb).is_zero() for g in a.generators)


def ideal_equal(a: Ideal, b: Ideal, budget: Budget = DEFAULT_BUDGET) -> bool:
    _check_same(a, b)
    if set(a.generators) == set(b.generators):
        return True
    return ideal_subset(a, b, budget) and ideal_subset(b, a, budget)


def _check_same(a: Ideal, b: Ideal):
    if a.ring.coeffs != b.ring.coeffs or a.ring.variables != b.ring.variables:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")


# ---------------------------------------------------------------------------
# triviality


def is_trivial_ideal(ideal: Ideal, budget: Budget = DEFAULT_BUDGET, shortcuts: bool = True) -> bool:
    """Decide whether 1 lies in ``ideal`` over its coefficient ring."""
    return triviality_evidence(ideal, budget, shortcuts)[0]


def triviality_evidence(ideal: Ideal, budget: Budget = DEFAULT_BUDGET, shortcuts: bool = True):
    """Return ``(trivial, evidence)`` where evidence names the deciding route.

    Routes, in order: a unit generator; constants with gcd 1 (over Z);
    elimination of unit-linear variables; a common zero over a small prime
    field (proves non-triviality); and finally the strong Groebner basis.
    """
    coeffs = ideal.ring.coeffs
    gens = list(ideal.generators)
    if not gens:
        return False, {"route": "zero-ideal"}
    verdict = _constant_shortcut(gens, coeffs)
    if verdict is not None:
        return verdict, {"route": "constants"}
    if shortcuts:
        reduced = _eliminate_linear(ideal)
        verdict = _constant_shortcut(list(reduced.generators), coeffs)
        if verdict is not None:
            return verdict, {"route": "linear-elimination"}
        if not reduced.generators:
            return False, {"route": "linear-elimination"}
        point = find_common_zero(reduced)
        if point is not None:
            return False, {"route": "common-zero", "prime": point[0], "point": point[1]}
        ideal = reduced
    gb = strong_groebner(ideal, budget=budget)
    return gb.is_unit(), {"route": "groebner", "basis": [str(g) for g in gb.basis]}


def _constant_shortcut(gens, coeffs: CoefficientRing):
    g = 0
    for p in gens:
        if p.is_constant():
            c = p.constant_value()
            if coeffs.is_unit(c):
                return True
            g = gcd(g, c)
    if not coeffs.is_field and g == 1:
        return True
    return None


def _eliminate_linear(ideal: Ideal) -> Ideal:
    """Repeatedly solve generators of the form u*x + f (u a unit, x not in f)."""
    ring = ideal.ring
    mod = ring.coeffs.modulus
    gens = [g for g in ideal.generators]
    while True:
        best = None
        for gi, g in enumerate(gens):
            for m, c in g.terms.items():
                if sum(m) != 1 or not ring.coeffs.is_unit(c):
                    continue
                i = m.index(1)
                if any(mm[i] for mm in g.terms if mm != m):
                    continue
                cost = len(g.terms)
                if best is None or cost < best[0]:
                    best = (cost, gi, i, m, c)
        if best is None:
            return Ideal(ring, gens)
        _, gi, i, m, c = best
        g = gens.pop(gi)
        inv = pow(c, -1, mod) if mod else c
        rest = Polynomial.from_terms(ring, {mm: -cc * inv for mm, cc in g.terms.items() if mm != m})
        sub_ = {ring.variables[i]: rest}
        gens = [h.substitute(sub_) for h in gens]
        gens = [h for h in gens if h]
        if _constant_shortcut(gens, ring.coeffs) is not None:
            return Ideal(ring, gens)


POINT_SEARCH_LIMIT = 1 << 17


def find_common_zero(ideal: Ideal, primes: Sequence[int] = (2, 3, 5, 7), limit: int = POINT_SEARCH_LIMIT):
    """Search small prime fields for a common zero of all generators.

    Any hit certifies that 1 is not in the ideal.  Returns ``(p, point)`` with
    ``point`` a dict from variable name to residue, or None.
    """
    ring = ideal.ring
    mod = ring.coeffs.modulus
    gens = sorted(ideal.generators, key=lambda g: len(g.terms))
    used = sorted({i for g in gens for m in g.terms for i, e in enumerate(m) if e})
    if mod:
        primes = [mod]
    for p in primes:
        n = len(used)
        if p**n > limit:
            continue
        if n == 0:
            if all(g.constant_value() % p == 0 for g in gens):
                return p, {}
            continue
        pts = np.array(list(product(range(p), repeat=n)), dtype=np.int64)
        col = {v: k for k, v in enumerate(used)}
        for g in gens:
            if not len(pts):
                break
            val = np.zeros(len(pts), dtype=np.int64)
            for m, c in g.terms.items():
                t = np.full(len(pts), c % p, dtype=np.int64)
                for i, e in enumerate(m):
                    if e:
                        t = (t * pow_mod_column(pts[:, col[i]], e, p)) % p
                val = (val + t) % p
            pts = pts[val == 0]
        if len(pts):
            point = {str(ring.variables[v]): int(pts[0][k]) for v, k in col.items()}
            return p, point
    return None


def pow_mod_column(x, e: int, p: int):
    r = np.ones_like(x)
    for _ in range(e):
        r = (r * x) % p
    return r


def format_basis(basis: StrongBasis) -> List[str]:
    return [format_terms(g.terms, basis.ring.variables) for g in basis.basis]

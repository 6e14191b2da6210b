"""Exact sparse multivariate polynomials over the integers and over Z/p.

A polynomial lives in a :class:`PolyRing`, which fixes the coefficient ring,
an ordered tuple of variables and a monomial order.  Monomials are dense
exponent tuples aligned with the ring's variable tuple; terms are stored in a
plain ``dict`` mapping exponent tuples to nonzero Python ints, so coefficient
size is never an issue.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Dict, Iterable, Mapping, Tuple, Union

Monomial = Tuple[int, ...]
Terms = Dict[Monomial, int]


class RingMismatchError(ValueError):
    """Operands live in different polynomial rings."""


class PolynomialSyntaxError(ValueError):
    """Text could not be parsed as a polynomial."""


def _natural_key(name: str):
    return tuple(int(t) if t.isdigit() else t for t in re.findall(r"\d+|\D+", name))


@dataclass(frozen=True)
class Var:
    """Variable ``x_{v^i}`` attached to copy ``copy`` of vertex ``name``."""

    name: str
    copy: int = 0

    def __str__(self) -> str:
        if self.copy:
            return f"x{self.name}_{self.copy}"
        return f"x{self.name}"

    def sort_key(self):
        return (_natural_key(self.name), self.copy)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class CoefficientRing:
    """The integers (``modulus == 0``) or the prime field Z/p."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus and not _is_prime(self.modulus):
            raise ValueError(f"Z/{self.modulus} is not a field: modulus must be prime")

    @property
    def is_field(self) -> bool:
        return self.modulus != 0

    def reduce(self, c: int) -> int:
        return c % self.modulus if self.modulus else c

    def is_unit(self, c: int) -> bool:
        if self.modulus:
            return c % self.modulus != 0
        return c in (1, -1)

    def __str__(self) -> str:
        return f"Z/{self.modulus}" if self.modulus else "Z"

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        t = text.strip().replace(" ", "")
        if t in ("Z", "ZZ"):
            return ZZ
        m = re.fullmatch(r"(?:Z/|GF\(|F)(\d+)\)?", t)
        if not m:
            raise ValueError(f"unknown coefficient ring {text!r}")
        return cls(int(m.group(1)))


ZZ = CoefficientRing(0)


def GF(p: int) -> CoefficientRing:
    return CoefficientRing(p)


def _degrevlex_key(m: Monomial):
    return (sum(m),) + tuple(-e for e in reversed(m))


def _grlex_key(m: Monomial):
    return (sum(m),) + m


def _lex_key(m: Monomial):
    return m


_ORDER_KEYS = {"degrevlex": _degrevlex_key, "grlex": _grlex_key, "lex": _lex_key}


@dataclass(frozen=True)
class MonomialOrder:
    """Total monomial order; larger key means larger monomial."""

    kind: str = "degrevlex"

    def __post_init__(self):
        if self.kind not in _ORDER_KEYS:
            raise ValueError(f"unknown monomial order {self.kind!r}")

    @property
    def key(self):
        return _ORDER_KEYS[self.kind]

    def __str__(self) -> str:
        return self.kind


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")


@dataclass(frozen=True)
class PolyRing:
    coeffs: CoefficientRing = ZZ
    variables: Tuple[Var, ...] = ()
    order: MonomialOrder = DEGREVLEX
    _index: Dict[Var, int] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        index = {v: i for i, v in enumerate(variables)}
        if len(index) != len(variables):
            raise ValueError("duplicate variables in ring")
        object.__setattr__(self, "_index", index)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, v: Var) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"variable {v} is not in the ring") from None

    def __contains__(self, v: Var) -> bool:
        return v in self._index

    @cached_property
    def one_monomial(self) -> Monomial:
        return (0,) * len(self.variables)

    def __str__(self) -> str:
        names = ",".join(str(v) for v in self.variables)
        return f"{self.coeffs}[{names}]"

    # constructors

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial.from_terms(self, {self.one_monomial: c})

    def var(self, v: Union[Var, int]) -> "Polynomial":
        i = v if isinstance(v, int) else self.index(v)
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def parse(self, text: str) -> "Polynomial":
        return _Parser(text, self).parse()

    def with_coeffs(self, coeffs: CoefficientRing) -> "PolyRing":
        return PolyRing(coeffs, self.variables, self.order)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.coeffs, self.variables, order)

    def convert(self, p: "Polynomial") -> "Polynomial":
        """Map ``p`` into this ring by variable identity (coefficients reduced)."""
        if p.ring == self:
            return p
        pos = []
        for i, v in enumerate(p.ring.variables):
            if v in self._index:
                pos.append((i, self._index[v]))
        mapped_vars = {i for i, _ in pos}
        out: Terms = {}
        n = self.nvars
        for m, c in p.terms.items():
            for i, e in enumerate(m):
                if e and i not in mapped_vars:
                    raise RingMismatchError(f"variable {p.ring.variables[i]} missing from {self}")
            t = [0] * n
            for i, j in pos:
                t[j] = m[i]
            t = tuple(t)
            out[t] = out.get(t, 0) + c
        return Polynomial.from_terms(self, out)


Scalar = Union[int, "Polynomial"]


class Polynomial:
    """Immutable polynomial; ``terms`` never holds zero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Terms):
        # callers guarantee normalized terms; use from_terms otherwise
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring: PolyRing, terms: Mapping[Monomial, int]) -> "Polynomial":
        p = ring.coeffs.modulus
        if p:
            clean = {m: c % p for m, c in terms.items() if c % p}
        else:
            clean = {m: c for m, c in terms.items() if c}
        return cls(ring, clean)

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.one_monomial in self.terms)

    def constant_value(self) -> int:
        return self.terms.get(self.ring.one_monomial, 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=self.ring.order.key)

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def used_variables(self):
        idx = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    idx.add(i)
        return [self.ring.variables[i] for i in sorted(idx)]

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial.from_terms(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial.from_terms(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return Polynomial.from_terms(self.ring, out)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial.from_terms(self.ring, mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: int) -> "Polynomial":
        return Polynomial.from_terms(self.ring, {m: c * a for m, a in self.terms.items()})

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # substitution and evaluation

    def substitute(self, assignment: Mapping[Var, Scalar]) -> "Polynomial":
        """Simultaneously replace the assigned variables; others stay put."""
        if not assignment:
            return self
        ring = self.ring
        images = {}
        for v, img in assignment.items():
            i = ring.index(v)
            if isinstance(img, Polynomial):
                if img.ring != ring:
                    raise RingMismatchError(f"image of {v} lives in {img.ring}")
                images[i] = img.terms
            else:
                images[i] = {ring.one_monomial: int(img)} if int(img) else {}
        return Polynomial.from_terms(ring, _substitute_terms(self.terms, images, ring.nvars))

    def evaluate(self, point: Mapping[Var, int]) -> int:
        """Exact value with every used variable assigned."""
        ring = self.ring
        vals = [None] * ring.nvars
        for v, a in point.items():
            if v in ring:
                vals[ring.index(v)] = int(a)
        total = 0
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    if vals[i] is None:
                        raise KeyError(f"variable {ring.variables[i]} is unassigned")
                    t *= vals[i] ** e
            total += t
        return ring.coeffs.reduce(total)

    # printing

    def __str__(self) -> str:
        return format_terms(self.terms, self.ring.variables)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def mul_terms(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = get(m, 0) + ca * cb
    return out


def _substitute_terms(terms: Terms, images: Dict[int, Terms], n: int) -> Terms:
    powers: Dict[Tuple[int, int], Terms] = {}
    one = (0,) * n

    def power(i, e):
        key = (i, e)
        if key not in powers:
            if e == 1:
                powers[key] = images[i]
            else:
                powers[key] = mul_terms(power(i, e - 1), images[i])
        return powers[key]

    out: Terms = {}
    for m, c in terms.items():
        rest = list(m)
        acc: Terms = {one: c}
        for i in images:
            e = m[i]
            if e:
                rest[i] = 0
                acc = mul_terms(acc, power(i, e))
                if not acc:
                    break
        if not acc:
            continue
        rest = tuple(rest)
        for ma, ca in acc.items():
            mm = tuple(x + y for x, y in zip(ma, rest))
            out[mm] = out.get(mm, 0) + ca
    return out


def format_terms(terms: Terms, variables) -> str:
    if not terms:
        return "0"
    parts = []
    for m, c in sorted(terms.items(), key=lambda t: _degrevlex_key(t[0]), reverse=True):
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(str(variables[i]))
            elif e:
                factors.append(f"{variables[i]}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(x[A-Za-z0-9]+(?:_\d+)?)|(\*\*|[-+*^()]))")
_VAR = re.compile(r"x([A-Za-z0-9]+?)(?:_(\d+))?")


def parse_var(token: str) -> Var:
    m = _VAR.fullmatch(token)
    if not m:
        raise PolynomialSyntaxError(f"bad variable {token!r}")
    return Var(m.group(1), int(m.group(2) or 0))


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character at {pos} in {text!r}")
        num, var, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif var is not None:
            tokens.append(("var", parse_var(var)))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise PolynomialSyntaxError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise PolynomialSyntaxError(f"trailing input at token {self.i}")
        return p

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer")
            base = base**val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "var":
            if val not in self.ring:
                raise PolynomialSyntaxError(f"variable {val} is not in {self.ring}")
            return self.ring.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise PolynomialSyntaxError("missing ')'")
            return p
        if kind == "op" and val == "-":
            return -self.factor()
        raise PolynomialSyntaxError(f"unexpected token {val!r}")


def variables_in(texts: Iterable[str]):
    found = set()
    for t in texts:
        for kind, val in _tokenize(t):
            if kind == "var":
                found.add(val)
    return sorted(found, key=Var.sort_key)


def parse_polynomial(text: str, ring: PolyRing = None, coeffs: CoefficientRing = ZZ) -> Polynomial:
    """Parse ``text``; without a ring, one is built from the variables found."""
    if ring is None:
        ring = PolyRing(coeffs, tuple(variables_in([text])))
    return ring.parse(text)


def parse_polynomials(texts, ring: PolyRing = None, coeffs: CoefficientRing = ZZ):
    texts = list(texts)
    if ring is None:
        ring = PolyRing(coeffs, tuple(variables_in(texts)))
    return [ring.parse(t) for t in texts]

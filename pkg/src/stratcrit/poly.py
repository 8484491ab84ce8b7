"""Exact multivariate polynomials over the rationals.

A :class:`Poly` is an immutable map from dense exponent tuples to nonzero
``gmpy2.mpq`` coefficients, tied to an ordered tuple of variable names.
Monomials are plain tuples of non-negative ints.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

Rat = type(mpq(0))
Monomial = tuple

__all__ = [
    "Rat",
    "rat",
    "format_rat",
    "Poly",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "LOCAL",
    "compare_monomials",
    "parse_poly",
    "partial_derivative",
    "evaluate",
    "substitute",
    "ParseError",
    "PolySyntaxError",
    "UnknownVariableError",
]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def rat(value) -> Rat:
    """Coerce ints, strings ``"p/q"``, Fractions and mpq values to mpq."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise ValueError(f"not a rational literal: {value!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return mpq(int(m.group(1)), den)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rat(q) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _madd(a, b):
    return tuple(map(operator.add, a, b))


def _msub(a, b):
    return tuple(map(operator.sub, a, b))


def _mdivides(a, b):
    """True when monomial ``a`` divides ``b``."""
    return all(map(operator.le, a, b))


def _mlcm(a, b):
    return tuple(map(max, a, b))


# ---------------------------------------------------------------- orders


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on a fixed arity.

    ``kind`` is one of ``"grevlex"``, ``"lex"``, ``"local"`` (negative
    degree reverse lexicographic, so 1 is the largest monomial) or
    ``"elim"`` (a block order: grevlex on the first ``block`` permuted
    variables, ties broken by grevlex on the rest). ``perm`` lists ring
    indices from most to least significant; empty means identity.
    """

    kind: str = "grevlex"
    perm: tuple = ()
    block: int = 0
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "local", "elim"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        object.__setattr__(self, "perm", tuple(self.perm))

    @property
    def is_global(self) -> bool:
        return self.kind != "local"

    @property
    def spec(self) -> str:
        """Stable textual name, used in cache keys."""
        s = self.kind if self.kind != "elim" else f"elim{self.block}"
        if self.perm:
            s += ":" + ",".join(map(str, self.perm))
        return s

    @classmethod
    def from_spec(cls, spec: str) -> "MonomialOrder":
        """Inverse of ``spec``."""
        head, _, perm = spec.partition(":")
        perm = tuple(int(i) for i in perm.split(",")) if perm else ()
        if head.startswith("elim"):
            return cls("elim", perm, int(head[4:]))
        return cls(head, perm)

    def key(self, m):
        """Flat int tuple; larger tuple means larger monomial."""
        k = self._memo.get(m)
        if k is None:
            k = self._memo[m] = self._key(m)
        return k

    def _key(self, m):
        if self.perm:
            m = tuple(m[i] for i in self.perm)
        if self.kind == "grevlex":
            return (sum(m),) + tuple(-e for e in reversed(m))
        if self.kind == "local":
            return (-sum(m),) + tuple(-e for e in reversed(m))
        if self.kind == "lex":
            return tuple(m)
        a, b = m[: self.block], m[self.block :]
        return ((sum(a),) + tuple(-e for e in reversed(a))
                + (sum(b),) + tuple(-e for e in reversed(b)))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")
LOCAL = MonomialOrder("local")


def compare_monomials(a, b, order: MonomialOrder = GREVLEX) -> int:
    """Return 1, 0 or -1 as ``a`` is greater than, equal to or less than ``b``."""
    if len(a) != len(b):
        raise ValueError("monomials of different arity")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------- Poly


class Poly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping | None = None, *, _clean=False):
        self.ring = tuple(ring)
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            n = len(self.ring)
            clean = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise ValueError(f"exponent {m} does not match ring arity {n}")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                c = rat(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
                    if not clean[m]:
                        del clean[m]
            self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, ring):
        return cls(ring, {}, _clean=True)

    @classmethod
    def const(cls, ring, c):
        c = rat(c)
        ring = tuple(ring)
        return cls(ring, {(0,) * len(ring): c} if c else {}, _clean=True)

    @classmethod
    def var(cls, ring, name):
        ring = tuple(ring)
        i = ring.index(name)
        m = tuple(1 if j == i else 0 for j in range(len(ring)))
        return cls(ring, {m: mpq(1)}, _clean=True)

    @classmethod
    def monomial(cls, ring, exps, c=1):
        return cls(ring, {tuple(exps): c})

    # basic queries
    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Rat:
        return self.terms.get((0,) * self.nvars, mpq(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def variables(self) -> set:
        """Indices of variables that occur."""
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def lead(self, order: MonomialOrder = GREVLEX):
        """Leading (monomial, coefficient) under ``order``."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        _, c = self.lead(order)
        inv = 1 / c
        return Poly(self.ring, {m: v * inv for m, v in self.terms.items()}, _clean=True)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Rat, Fraction)) and not isinstance(other, bool):
            return Poly.const(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _madd(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.ring, {m: c for m, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative int")
        result = Poly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        c = rat(c)
        if not c:
            return Poly.zero(self.ring)
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()}, _clean=True)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Rat, Fraction)) and not isinstance(other, bool):
            return self.terms == Poly.const(self.ring, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, ring={list(self.ring)})"

    def __str__(self):
        return format_poly(self)

    # calculus and substitution
    def diff(self, i: int) -> "Poly":
        return partial_derivative(self, i)

    def gradient(self) -> list:
        return [partial_derivative(self, i) for i in range(self.nvars)]

    def __call__(self, *point):
        return evaluate(self, point)

    def subs(self, assignments: Mapping) -> "Poly":
        return substitute(self, assignments)

    def change_ring(self, ring: Sequence[str]) -> "Poly":
        """Re-express in ``ring``; every occurring variable must exist there."""
        ring = tuple(ring)
        idx = []
        for i, name in enumerate(self.ring):
            if name in ring:
                idx.append(ring.index(name))
            else:
                idx.append(None)
        out = {}
        n = len(ring)
        for m, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(m):
                if e:
                    if idx[i] is None:
                        raise ValueError(f"variable {self.ring[i]!r} not in target ring")
                    new[idx[i]] = e
            out[tuple(new)] = c
        return Poly(ring, out, _clean=True)


def partial_derivative(p: Poly, var_index: int) -> Poly:
    if not 0 <= var_index < p.nvars:
        raise IndexError(f"variable index {var_index} out of range")
    out = {}
    for m, c in p.terms.items():
        e = m[var_index]
        if e:
            mm = m[:var_index] + (e - 1,) + m[var_index + 1:]
            out[mm] = c * e
    return Poly(p.ring, out, _clean=True)


def evaluate(p: Poly, point: Sequence) -> Rat:
    if len(point) != p.nvars:
        raise ValueError(f"point has {len(point)} coordinates, ring has {p.nvars}")
    pt = [rat(v) for v in point]
    total = mpq(0)
    for m, c in p.terms.items():
        t = c
        for v, e in zip(pt, m):
            if e:
                t *= v ** e
        total += t
    return total


def substitute(p: Poly, assignments: Mapping) -> Poly:
    """Substitute polynomials (or rationals) for variables.

    Keys are variable names or indices; values are Polys in ``p.ring``
    or rational constants.
    """
    subs = {}
    for k, v in assignments.items():
        i = p.ring.index(k) if isinstance(k, str) else int(k)
        if not 0 <= i < p.nvars:
            raise IndexError(f"variable index {i} out of range")
        if not isinstance(v, Poly):
            v = Poly.const(p.ring, v)
        elif v.ring != p.ring:
            raise ValueError("substituted polynomial lives in a different ring")
        subs[i] = v
    if not subs:
        return p
    powers = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            powers[key] = subs[i] ** e
        return powers[key]

    result = Poly.zero(p.ring)
    for m, c in p.terms.items():
        kept = tuple(0 if i in subs else e for i, e in enumerate(m))
        term = Poly(p.ring, {kept: c}, _clean=True)
        for i, e in enumerate(m):
            if e and i in subs:
                term = term * power(i, e)
        result = result + term
    return result


# ---------------------------------------------------------------- format


def _format_monomial(ring, m) -> str:
    parts = []
    for name, e in zip(ring, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text: terms in grevlex-descending order, parseable back."""
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms(GREVLEX):
        mon = _format_monomial(p.ring, m)
        neg = c < 0
        a = -c if neg else c
        if not mon:
            body = format_rat(a)
        elif a == 1:
            body = mon
        else:
            body = f"{format_rat(a)}*{mon}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------- parser


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class PolySyntaxError(ParseError):
    pass


class UnknownVariableError(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown variable {name!r}", offset)
        self.name = name


_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S)")


def _tokenize(src: str):
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), pos))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), pos))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise PolySyntaxError(f"unexpected character {ch!r}", _byte_offset(src, pos))
            tokens.append((ch, ch, pos))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


def _byte_offset(src: str, char_index: int) -> int:
    return len(src[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, src, ring):
        self.src = src
        self.ring = tuple(ring)
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            self.fail(f"expected {kind!r}", tok)
        self.i += 1
        return tok

    def fail(self, msg, tok):
        found = "end of input" if tok[0] == "end" else repr(tok[1])
        raise PolySyntaxError(f"{msg}, found {found}", _byte_offset(self.src, tok[2]))

    def parse(self):
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail("unexpected token", tok)
        return p

    def expr(self):
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek()[0] in "+-":
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.fail("expected a natural exponent", tok)
            self.take()
            base = base ** tok[1]
        return base

    def base(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            num = tok[1]
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.peek()
                if den_tok[0] != "int":
                    self.fail("expected a positive integer denominator", den_tok)
                self.take()
                if den_tok[1] == 0:
                    raise PolySyntaxError("zero denominator", _byte_offset(self.src, den_tok[2]))
                return Poly.const(self.ring, mpq(num, den_tok[1]))
            return Poly.const(self.ring, num)
        if tok[0] == "name":
            self.take()
            if tok[1] not in self.ring:
                raise UnknownVariableError(tok[1], _byte_offset(self.src, tok[2]))
            return Poly.var(self.ring, tok[1])
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        self.fail("expected a number, variable or '('", tok)


def parse_poly(src: str, ring: Iterable[str]) -> Poly:
    """Parse ``src`` into a canonical expanded :class:`Poly` over ``ring``.

    >>> str(parse_poly("(x+y)^2", ["x", "y"]))
    'x^2 + 2*x*y + y^2'
    """
    ring = tuple(ring)
    if len(set(ring)) != len(ring):
        raise ValueError(f"duplicate variable names in ring {ring}")
    return _Parser(src, ring).parse()

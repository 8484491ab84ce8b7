"""Groebner bases, Mora standard bases and the ideal calculus.

Global orders go through Buchberger's algorithm (Gebauer-Moeller pair
pruning, sugar selection).  The local order goes through Mora's tangent
cone algorithm with ecart-driven weak normal forms; it is what makes
multiplicities *at the origin* computable.  A truncation oracle
(``dim k[x]/(I + m^N)`` for growing ``N``) is kept as an independent
cross-check of the Mora route.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import hashlib
import math
import operator
import os
import tempfile
import threading
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

from .poly import GREVLEX, LOCAL, MonomialOrder, Poly, format_poly, parse_poly, rat

INFINITE = math.inf
NEG_INF = -math.inf

__all__ = [
    "INFINITE",
    "NEG_INF",
    "Limits",
    "limits_scope",
    "current_limits",
    "ResourceLimitError",
    "Cancelled",
    "BasisCache",
    "CACHE",
    "set_cache_dir",
    "IdealHandle",
    "LocallyClosedSet",
    "groebner_basis",
    "standard_basis",
    "tangent_cone",
    "is_groebner",
    "normal_form",
    "is_member",
    "ideal_sum",
    "ideal_product",
    "intersect",
    "ideal_quotient",
    "saturation",
    "eliminate",
    "dimension",
    "local_dimension_at_origin",
    "radical_membership",
    "radical_contains",
    "local_multiplicity_at_origin",
    "truncation_multiplicity",
    "translate_to_origin",
    "contains_origin",
    "locally_contained_at_origin",
    "set_union",
    "set_difference_closure",
    "set_equal",
    "set_subset",
]


# ---------------------------------------------------------------- limits


class ResourceLimitError(RuntimeError):
    """A configured size or degree cap was exceeded."""


class Cancelled(RuntimeError):
    """The cooperative cancellation token fired."""


@dataclass(frozen=True)
class Limits:
    max_basis: int = 5000
    max_degree: int = 60
    max_saturation_steps: int = 64
    max_truncation: int = 40
    cancel: object = None  # anything with is_set(), e.g. threading.Event
    deadline: float | None = None  # time.monotonic() value

    def with_budget(self, seconds: float | None) -> "Limits":
        """Copy whose deadline is ``seconds`` from now (``None`` clears it)."""
        when = None if seconds is None else time.monotonic() + seconds
        return dataclasses.replace(self, deadline=when)

    def check_cancel(self):
        if self.cancel is not None and self.cancel.is_set():
            raise Cancelled("computation cancelled")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError("time budget exhausted")


_LIMITS = contextvars.ContextVar("stratcrit_limits", default=Limits())


def current_limits() -> Limits:
    return _LIMITS.get()


@contextlib.contextmanager
def limits_scope(limits: Limits):
    token = _LIMITS.set(limits)
    try:
        yield limits
    finally:
        _LIMITS.reset(token)


# ---------------------------------------------------------------- monomials

_add = operator.add
_sub = operator.sub
_le = operator.le


def _mmul(a, b):
    return tuple(map(_add, a, b))


def _mdiv(a, b):
    return tuple(map(_sub, a, b))


def _divides(a, b):
    return all(map(_le, a, b))


def _lcm(a, b):
    return tuple(map(max, a, b))


def _coprime(a, b):
    return not any(x and y for x, y in zip(a, b))


# ---------------------------------------------------------------- core


class _Elt:
    """A monic basis element with cached data."""

    __slots__ = ("lm", "terms", "sugar", "ecart", "deg")

    def __init__(self, lm, terms, sugar):
        self.lm = lm
        self.terms = terms
        self.sugar = sugar
        self.deg = max(map(sum, terms))
        self.ecart = self.deg - sum(lm)


def _monic(terms, key):
    lm = max(terms, key=key)
    inv = 1 / terms[lm]
    if inv == 1:
        return lm, terms
    return lm, {m: c * inv for m, c in terms.items()}


def _spoly(f: _Elt, g: _Elt):
    l = _lcm(f.lm, g.lm)
    qf, qg = _mdiv(l, f.lm), _mdiv(l, g.lm)
    out = {_mmul(m, qf): c for m, c in f.terms.items()}
    for m, c in g.terms.items():
        mm = _mmul(m, qg)
        v = out.get(mm)
        if v is None:
            out[mm] = -c
        else:
            v -= c
            if v:
                out[mm] = v
            else:
                del out[mm]
    sugar = max(f.sugar + sum(qf), g.sugar + sum(qg))
    return out, sugar


def _subtract_multiple(p, c, q, g_terms):
    """In place: p -= c * x^q * g."""
    for mg, cg in g_terms.items():
        mm = _mmul(mg, q)
        v = p.get(mm)
        if v is None:
            p[mm] = -c * cg
        else:
            v -= c * cg
            if v:
                p[mm] = v
            else:
                del p[mm]


def _reduce_full(p, G, key, limits):
    """Full (top and tail) reduction of dict ``p`` by monic elements ``G``."""
    p = dict(p)
    r = {}
    steps = 0
    while p:
        m = max(p, key=key)
        c = p[m]
        for g in G:
            if _divides(g.lm, m):
                _subtract_multiple(p, c, _mdiv(m, g.lm), g.terms)
                break
        else:
            r[m] = p.pop(m)
        steps += 1
        if steps & 1023 == 0:
            limits.check_cancel()
    return r


def _reduce_mora(p, T, key, limits):
    """Mora's weak normal form w.r.t. elements ``T`` (local order)."""
    h = dict(p)
    T = list(T)
    steps = 0
    while h:
        m = max(h, key=key)
        best = None
        for t in T:
            if _divides(t.lm, m) and (best is None or t.ecart < best.ecart):
                best = t
                if t.ecart == 0:
                    break
        if best is None:
            break
        h_deg = max(map(sum, h))
        h_ecart = h_deg - sum(m)
        if best.ecart > h_ecart:
            lm, terms = _monic(dict(h), key)
            T.append(_Elt(lm, terms, h_deg))
        c = h[m]
        _subtract_multiple(h, c, _mdiv(m, best.lm), best.terms)
        steps += 1
        if steps & 255 == 0:
            limits.check_cancel()
    return h


def _update(G, B, h_idx, elts):
    """Gebauer-Moeller update of active set ``G`` and pair list ``B``."""
    h = elts[h_idx]
    C = [g for g in G]
    D = []
    lcms = {g: _lcm(h.lm, elts[g].lm) for g in C}
    i = 0
    while i < len(C):
        g1 = C[i]
        l1 = lcms[g1]
        keep = _coprime(h.lm, elts[g1].lm) or not any(
            _divides(lcms[g2], l1) for g2 in C[i + 1:] + D
        )
        if keep:
            D.append(g1)
        i += 1
    E = [g for g in D if not _coprime(h.lm, elts[g].lm)]
    B_new = []
    for pair in B:
        g1, g2, l12 = pair[2], pair[3], pair[4]
        if (not _divides(h.lm, l12)
                or _lcm(elts[g1].lm, h.lm) == l12
                or _lcm(h.lm, elts[g2].lm) == l12):
            B_new.append(pair)
    for g in E:
        l = lcms[g]
        a, b = (g, h_idx) if g < h_idx else (h_idx, g)
        B_new.append((None, None, a, b, l))
    G_new = [g for g in G if not _divides(h.lm, elts[g].lm)]
    G_new.append(h_idx)
    return G_new, B_new


def _pair_sugar(elts, a, b, l):
    fa, fb = elts[a], elts[b]
    return max(fa.sugar + sum(l) - sum(fa.lm), fb.sugar + sum(l) - sum(fb.lm))


def _buchberger(polys, order: MonomialOrder, limits: Limits):
    """Core loop shared by the global (full NF) and local (Mora NF) cases.

    Returns the list of active monic elements (minimal w.r.t. leading
    monomials).  For global orders the result is inter-reduced.
    """
    key = order.key
    local = not order.is_global
    elts: list[_Elt] = []
    G: list[int] = []
    B: list[tuple] = []

    def check(e: _Elt):
        if e.deg > limits.max_degree:
            raise ResourceLimitError(
                f"basis element of degree {e.deg} exceeds degree cap {limits.max_degree}")
        if len(elts) > limits.max_basis:
            raise ResourceLimitError(
                f"basis size exceeds cap {limits.max_basis}")

    def add(terms, sugar):
        nonlocal G, B
        lm, terms = _monic(terms, key)
        e = _Elt(lm, terms, sugar)
        elts.append(e)
        check(e)
        G, B = _update(G, B, len(elts) - 1, elts)
        return e

    ordered = sorted((p for p in polys if p), key=lambda t: (max(map(sum, t)), key(max(t, key=key))))
    for p in ordered:
        if local:
            h = _reduce_mora(p, [elts[g] for g in G], key, limits)
        else:
            h = _reduce_full(p, [elts[g] for g in G], key, limits)
        if h:
            e = add(h, max(map(sum, p)))
            if not any(e.lm):
                return [_Elt(e.lm, {e.lm: mpq(1)}, 0)]

    while B:
        limits.check_cancel()
        best_i, best_k = None, None
        for i, (s, k, a, b, l) in enumerate(B):
            if s is None:
                s = _pair_sugar(elts, a, b, l)
                k = key(l)
                B[i] = (s, k, a, b, l)
            cand = (s, k, a, b)
            if best_k is None or cand < best_k:
                best_i, best_k = i, cand
        _, _, a, b, _ = B.pop(best_i)
        sp, sugar = _spoly(elts[a], elts[b])
        if not sp:
            continue
        active = [elts[g] for g in G]
        if local:
            h = _reduce_mora(sp, active, key, limits)
        else:
            h = _reduce_full(sp, active, key, limits)
        if h:
            e = add(h, sugar)
            if not any(e.lm):
                return [_Elt(e.lm, {e.lm: mpq(1)}, 0)]

    result = [elts[g] for g in G]
    if not local:
        reduced = []
        for i, e in enumerate(result):
            others = result[:i] + result[i + 1:]
            tail = _reduce_full({m: c for m, c in e.terms.items() if m != e.lm}, others, key, limits)
            tail[e.lm] = mpq(1)
            reduced.append(_Elt(e.lm, tail, e.sugar))
        result = reduced
    result.sort(key=lambda e: key(e.lm), reverse=True)
    return result


# ---------------------------------------------------------------- cache


def _content_hash(ring, order: MonomialOrder, gens) -> str:
    h = hashlib.sha256()
    h.update(("ring=" + ",".join(ring) + "\n").encode())
    h.update(("order=" + order.spec + "\n").encode())
    for s in sorted(format_poly(g) for g in gens):
        h.update((s + "\n").encode())
    return h.hexdigest()


class BasisCache:
    """Keyed store of bases: in memory, optionally mirrored to a directory.

    One file per (ideal hash, order) key; writes go through a temporary
    file and ``os.replace`` so readers never see partial records.
    """

    def __init__(self, directory: str | None = None):
        self._mem: dict = {}
        self._lock = threading.Lock()
        self.directory = directory
        self.hits = 0
        self.misses = 0

    def clear(self):
        with self._lock:
            self._mem.clear()
            self.hits = self.misses = 0

    def _path(self, key):
        return os.path.join(self.directory, key + ".basis")

    def get(self, key, ring):
        with self._lock:
            got = self._mem.get(key)
        if got is not None:
            self.hits += 1
            return got[1]
        if self.directory:
            path = self._path(key)
            if os.path.exists(path):
                with open(path, encoding="utf-8") as fh:
                    lines = fh.read().splitlines()
                ring_line, order_line = lines[0], lines[1]
                if ring_line != "ring " + ",".join(ring):
                    return None
                basis = tuple(parse_poly(s, ring) for s in lines[2:] if s)
                with self._lock:
                    self._mem.setdefault(key, (order_line[6:], basis))
                self.hits += 1
                return basis
        self.misses += 1
        return None

    def put(self, key, ring, order: MonomialOrder, basis):
        with self._lock:
            if key in self._mem:
                return
            self._mem[key] = (order.spec, tuple(basis))
        if self.directory:
            os.makedirs(self.directory, exist_ok=True)
            path = self._path(key)
            if os.path.exists(path):
                return
            text = "ring " + ",".join(ring) + "\norder " + order.spec + "\n"
            text += "".join(format_poly(b) + "\n" for b in basis)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, path)

    def items(self):
        """Snapshot of (key, order spec, basis) records held in memory."""
        with self._lock:
            return [(k, v[0], v[1]) for k, v in self._mem.items()]


CACHE = BasisCache()


def set_cache_dir(directory: str | None):
    CACHE.directory = directory


# ---------------------------------------------------------------- ideals


def _as_poly(g, ring):
    if isinstance(g, Poly):
        if g.ring != tuple(ring):
            raise ValueError(f"generator ring {g.ring} differs from ideal ring {tuple(ring)}")
        return g
    if isinstance(g, str):
        return parse_poly(g, ring)
    return Poly.const(ring, g)


class IdealHandle:
    """Generators of an ideal plus memoised bases keyed by order."""

    __slots__ = ("ring", "generators", "_bases")

    def __init__(self, ring: Sequence[str], generators: Iterable = ()):
        self.ring = tuple(ring)
        gens = []
        seen = set()
        for g in generators:
            p = _as_poly(g, self.ring)
            if p.terms and p not in seen:
                seen.add(p)
                gens.append(p)
        self.generators = tuple(gens)
        self._bases = {}

    @classmethod
    def unit(cls, ring):
        return cls(ring, [Poly.const(ring, 1)])

    @classmethod
    def zero(cls, ring):
        return cls(ring, [])

    @classmethod
    def maximal(cls, ring, point=None):
        ring = tuple(ring)
        point = point or [0] * len(ring)
        return cls(ring, [Poly.var(ring, v) - rat(c) for v, c in zip(ring, point)])

    def __repr__(self):
        return f"IdealHandle({[format_poly(g) for g in self.generators]}, ring={list(self.ring)})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def content_hash(self, order: MonomialOrder = GREVLEX) -> str:
        return _content_hash(self.ring, order, self.generators)

    def basis(self, order: MonomialOrder = GREVLEX, limits: Limits | None = None):
        got = self._bases.get(order)
        if got is not None:
            return got
        if not self.generators:
            basis = ()
        else:
            key = self.content_hash(order)
            basis = CACHE.get(key, self.ring)
            if basis is None:
                limits = limits or current_limits()
                elts = _buchberger([g.terms for g in self.generators], order, limits)
                basis = tuple(Poly(self.ring, e.terms, _clean=True) for e in elts)
                CACHE.put(key, self.ring, order, basis)
        self._bases[order] = basis
        return basis

    def is_unit(self) -> bool:
        b = self.basis()
        return len(b) == 1 and b[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def gb_ideal(self) -> "IdealHandle":
        """Same ideal, generated by its reduced grevlex basis."""
        return IdealHandle(self.ring, self.basis())

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return self.ring == other.ring and self.basis() == other.basis()

    def __hash__(self):
        return hash((self.ring, self.basis()))

    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        return ideal_product(self, other)

    def subs(self, assignments) -> "IdealHandle":
        return IdealHandle(self.ring, [g.subs(assignments) for g in self.generators])

    def change_ring(self, ring) -> "IdealHandle":
        return IdealHandle(ring, [g.change_ring(ring) for g in self.generators])

    def leading_monomials(self, order: MonomialOrder = GREVLEX):
        return [b.lead(order)[0] for b in self.basis(order)]


def _check_same_ring(*ideals):
    rings = {I.ring for I in ideals}
    if len(rings) != 1:
        raise ValueError(f"ideals live in different rings: {sorted(rings)}")


def groebner_basis(I: IdealHandle, order: MonomialOrder = GREVLEX) -> list:
    """Reduced Groebner basis of ``I`` under a global ``order``."""
    if not order.is_global:
        raise ValueError("groebner_basis needs a global order; use standard_basis for local")
    return list(I.basis(order))


def standard_basis(I: IdealHandle, order: MonomialOrder = LOCAL) -> list:
    """Mora standard basis (minimal, not tail-reduced) under a local order."""
    if order.is_global:
        raise ValueError("standard_basis expects a local order")
    return list(I.basis(order))


def tangent_cone(I: IdealHandle) -> IdealHandle:
    """Ideal of the tangent cone at 0: lowest-degree forms of a local standard basis.

    The local order ranks by degree first, so these forms generate the
    whole ideal of initial forms.
    """
    forms = []
    for g in I.basis(LOCAL):
        low = min(sum(m) for m in g.terms)
        forms.append(Poly(I.ring, {m: c for m, c in g.terms.items() if sum(m) == low}, _clean=True))
    return IdealHandle(I.ring, forms)


def is_groebner(basis: Sequence[Poly], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    if not basis:
        return True
    key = order.key
    limits = current_limits()
    elts = []
    for b in basis:
        lm, terms = _monic(dict(b.terms), key)
        elts.append(_Elt(lm, terms, b.degree()))
    for f, g in combinations(elts, 2):
        sp, _ = _spoly(f, g)
        if not sp:
            continue
        if order.is_global:
            r = _reduce_full(sp, elts, key, limits)
        else:
            r = _reduce_mora(sp, elts, key, limits)
        if r:
            return False
    return True


def normal_form(p: Poly, I: IdealHandle, order: MonomialOrder = GREVLEX) -> Poly:
    """Unique remainder of ``p`` modulo ``I`` under a global order."""
    if not order.is_global:
        raise ValueError("normal_form needs a global order")
    if p.ring != I.ring:
        raise ValueError("polynomial and ideal live in different rings")
    basis = I.basis(order)
    key = order.key
    elts = []
    for b in basis:
        lm, terms = _monic(dict(b.terms), key)
        elts.append(_Elt(lm, terms, 0))
    return Poly(p.ring, _reduce_full(p.terms, elts, key, current_limits()), _clean=True)


def is_member(p: Poly, I: IdealHandle) -> bool:
    return normal_form(p, I).is_zero()


def ideal_sum(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _check_same_ring(I, J)
    return IdealHandle(I.ring, I.generators + J.generators)


def ideal_product(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    _check_same_ring(I, J)
    return IdealHandle(I.ring, [f * g for f in I.generators for g in J.generators])


def _fresh_names(ring, count, stem="_e"):
    out = []
    i = 0
    while len(out) < count:
        name = f"{stem}{i}"
        if name not in ring:
            out.append(name)
        i += 1
    return out


def _elimination_order(ring, drop):
    drop_idx = [ring.index(v) for v in drop]
    keep_idx = [i for i in range(len(ring)) if i not in drop_idx]
    return MonomialOrder("elim", tuple(drop_idx + keep_idx), len(drop_idx))


def eliminate(I: IdealHandle, keep: Iterable[str]) -> IdealHandle:
    """``I`` intersected with the subring on ``keep`` (same ambient ring)."""
    keep = list(keep)
    unknown = [v for v in keep if v not in I.ring]
    if unknown:
        raise ValueError(f"variables {unknown} are not in the ring")
    drop = [v for v in I.ring if v not in keep]
    if not drop:
        return I
    order = _elimination_order(I.ring, drop)
    drop_idx = {I.ring.index(v) for v in drop}
    basis = I.basis(order)
    kept = [b for b in basis if not (b.variables() & drop_idx)]
    return IdealHandle(I.ring, kept)


def _eliminate_fresh(I_ext: IdealHandle, fresh, ring) -> IdealHandle:
    J = eliminate(I_ext, [v for v in I_ext.ring if v not in fresh])
    return IdealHandle(ring, [g.change_ring(ring) for g in J.generators])


def intersect(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """Ideal intersection via ``t*I + (1-t)*J`` and elimination of ``t``."""
    _check_same_ring(I, J)
    if I.is_zero() or J.is_zero():
        return IdealHandle.zero(I.ring)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    (t,) = _fresh_names(I.ring, 1, "_t")
    ext = (t,) + I.ring
    tv = Poly.var(ext, t)
    gens = [tv * g.change_ring(ext) for g in I.generators]
    gens += [(1 - tv) * g.change_ring(ext) for g in J.generators]
    return _eliminate_fresh(IdealHandle(ext, gens), [t], I.ring)


def intersect_all(ideals: Sequence[IdealHandle]) -> IdealHandle:
    ideals = list(ideals)
    if not ideals:
        raise ValueError("need at least one ideal")
    out = ideals[0]
    for J in ideals[1:]:
        out = intersect(out, J)
    return out


def divide_exact(p: Poly, g: Poly) -> Poly:
    """Exact quotient ``p / g``; raises if ``g`` does not divide ``p``."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    key = GREVLEX.key
    lm_g, lc_g = g.lead(GREVLEX)
    rem = dict(p.terms)
    quo = {}
    while rem:
        m = max(rem, key=key)
        if not _divides(lm_g, m):
            raise ValueError("polynomial division is not exact")
        q = _mdiv(m, lm_g)
        c = rem[m] / lc_g
        quo[q] = c
        _subtract_multiple(rem, c, q, g.terms)
    return Poly(p.ring, quo, _clean=True)


def _quotient_by_poly(I: IdealHandle, g: Poly) -> IdealHandle:
    if g.is_zero():
        return IdealHandle.unit(I.ring)
    if g.is_constant():
        return I
    K = intersect(I, IdealHandle(I.ring, [g]))
    return IdealHandle(I.ring, [divide_exact(k, g) for k in K.generators])


def ideal_quotient(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """``I : J``."""
    _check_same_ring(I, J)
    if J.is_zero():
        return IdealHandle.unit(I.ring)
    return intersect_all([_quotient_by_poly(I, g) for g in J.generators])


def _saturate_by_poly(I: IdealHandle, g: Poly) -> IdealHandle:
    """``I : g^inf`` via Rabinowitsch: eliminate ``s`` from ``I + <1 - s*g>``."""
    if g.is_zero():
        return IdealHandle.unit(I.ring)
    if g.is_constant() or I.is_unit() or I.is_zero():
        return I
    (s,) = _fresh_names(I.ring, 1, "_s")
    ext = (s,) + I.ring
    gens = [h.change_ring(ext) for h in I.generators]
    gens.append(1 - Poly.var(ext, s) * g.change_ring(ext))
    return _eliminate_fresh(IdealHandle(ext, gens), [s], I.ring)


def saturation(I: IdealHandle, J: IdealHandle, method: str = "rabinowitsch") -> IdealHandle:
    """``I : J^inf``.

    ``method="rabinowitsch"`` intersects the per-generator saturations;
    ``method="iterated"`` repeats ``I <- I : J`` until the basis stops
    changing (bounded by ``Limits.max_saturation_steps``).
    """
    _check_same_ring(I, J)
    if J.is_zero():
        return IdealHandle.unit(I.ring)
    if J.is_unit():
        return I
    if method == "rabinowitsch":
        parts = [_saturate_by_poly(I, g) for g in J.generators]
        return intersect_all(parts).gb_ideal()
    if method != "iterated":
        raise ValueError(f"unknown saturation method {method!r}")
    limits = current_limits()
    cur = I.gb_ideal()
    for _ in range(limits.max_saturation_steps):
        nxt = ideal_quotient(cur, J).gb_ideal()
        if nxt.basis() == cur.basis():
            return cur
        cur = nxt
    raise ResourceLimitError(
        f"saturation did not stabilise within {limits.max_saturation_steps} quotient steps")


def _max_independent_set(lms, n) -> int:
    """Largest set of variables containing the support of no monomial."""
    supports = []
    for m in lms:
        s = 0
        for i, e in enumerate(m):
            if e:
                s |= 1 << i
        supports.append(s)
    if 0 in supports:
        return -1
    # minimal supports suffice
    supports = sorted(set(supports), key=lambda s: bin(s).count("1"))
    minimal = []
    for s in supports:
        if not any((t & s) == t for t in minimal):
            minimal.append(s)
    best = 0

    def search(i, chosen, size):
        nonlocal best
        if size + (n - i) <= best:
            return
        if i == n:
            best = max(best, size)
            return
        bit = 1 << i
        new = chosen | bit
        if not any((t & new) == t for t in minimal):
            search(i + 1, new, size + 1)
        search(i + 1, chosen, size)

    search(0, 0, 0)
    return best


def dimension(I: IdealHandle):
    """Krull dimension of ``V(I)``; ``NEG_INF`` for the unit ideal."""
    if I.is_zero():
        return len(I.ring)
    lms = I.leading_monomials(GREVLEX)
    d = _max_independent_set(lms, len(I.ring))
    return NEG_INF if d < 0 else d


def local_dimension_at_origin(I: IdealHandle):
    """Dimension of ``V(I)`` at the origin (``NEG_INF`` if 0 is not on it)."""
    if I.is_zero():
        return len(I.ring)
    lms = I.leading_monomials(LOCAL)
    d = _max_independent_set(lms, len(I.ring))
    return NEG_INF if d < 0 else d


def radical_membership(p: Poly, I: IdealHandle) -> bool:
    """True iff ``p`` vanishes on ``V(I)`` (Rabinowitsch trick)."""
    if p.ring != I.ring:
        raise ValueError("polynomial and ideal live in different rings")
    if p.is_zero():
        return True
    if I.is_unit():
        return True
    if I.is_zero():
        return False
    if is_member(p, I):
        return True
    (s,) = _fresh_names(I.ring, 1, "_r")
    ext = (s,) + I.ring
    gens = [h.change_ring(ext) for h in I.generators]
    gens.append(1 - Poly.var(ext, s) * p.change_ring(ext))
    return IdealHandle(ext, gens).is_unit()


def radical_contains(I: IdealHandle, J: IdealHandle) -> bool:
    """``J ⊆ rad(I)``, i.e. ``V(I) ⊆ V(J)``."""
    _check_same_ring(I, J)
    return all(radical_membership(g, I) for g in J.generators)


def _count_standard(lms, n):
    """Number of monomials outside the monomial ideal; ``None`` if infinite."""
    lms = [tuple(m) for m in lms]
    if any(not any(m) for m in lms):
        return 0
    if n == 0:
        return 1
    last = n - 1
    pure = [m[last] for m in lms if not any(m[:last])]
    if not pure:
        return None
    bound = min(pure)
    total = 0
    for k in range(bound):
        sub = [m[:last] for m in lms if m[last] <= k]
        c = _count_standard(sub, last)
        if c is None:
            return None
        total += c
    return total


def local_multiplicity_at_origin(I: IdealHandle):
    """Colength of ``I`` in the local ring at 0 (Mora standard basis).

    ``INFINITE`` when ``V(I)`` is positive dimensional through 0, and 0
    when the origin is not on ``V(I)``.
    """
    if I.is_zero():
        return INFINITE if I.ring else 1
    lms = I.leading_monomials(LOCAL)
    c = _count_standard(lms, len(I.ring))
    return INFINITE if c is None else c


def truncation_colength(I: IdealHandle, N: int) -> int:
    """``dim k[x]/(I + m^N)``, computed with a global basis."""
    ring = I.ring
    n = len(ring)
    mons = []

    def gen(i, left, cur):
        if i == n - 1:
            mons.append(cur + (left,))
            return
        for e in range(left, -1, -1):
            gen(i + 1, left - e, cur + (e,))

    if n:
        gen(0, N, ())
    powers = [Poly(ring, {m: mpq(1)}, _clean=True) for m in mons]
    J = IdealHandle(ring, list(I.generators) + powers)
    c = _count_standard(J.leading_monomials(GREVLEX), n)
    return c


def truncation_multiplicity(I: IdealHandle, max_n: int | None = None):
    """Independent oracle for the local colength: grow ``N`` until stable.

    The sequence ``dim k[x]/(I + m^N)`` is non-decreasing and constant
    from the first repeat on (Nakayama), so two consecutive repeats are
    required before returning.  Returns ``INFINITE`` if no stabilisation
    happens below ``max_n``.
    """
    max_n = max_n or current_limits().max_truncation
    prev = None
    repeats = 0
    for N in range(1, max_n + 1):
        c = truncation_colength(I, N)
        if c == prev:
            repeats += 1
            if repeats >= 2:
                return c
        else:
            repeats = 0
        prev = c
    return INFINITE


def translate_to_origin(I: IdealHandle, point: Sequence) -> IdealHandle:
    """Substitute ``z_i -> z_i + point_i`` so that ``point`` moves to 0."""
    if len(point) != len(I.ring):
        raise ValueError(f"point has {len(point)} coordinates, ring has {len(I.ring)}")
    subs = {i: Poly.var(I.ring, v) + rat(c) for i, (v, c) in enumerate(zip(I.ring, point)) if rat(c)}
    if not subs:
        return I
    return IdealHandle(I.ring, [g.subs(subs) for g in I.generators])


def contains_origin(I: IdealHandle) -> bool:
    return all(g.constant_term() == 0 for g in I.generators)


def vanishes_at(I: IdealHandle, point) -> bool:
    return all(g(*point) == 0 for g in I.generators)


def locally_contained_at_origin(I: IdealHandle, J: IdealHandle) -> bool:
    """Near 0, ``V(I) ⊆ V(J)``.

    Components of ``V(I)`` not inside ``V(g)`` survive in ``I : g^inf``;
    the containment holds near 0 iff none of them passes through 0.
    """
    _check_same_ring(I, J)
    for g in J.generators:
        if not contains_origin(_saturate_by_poly(I, g).gb_ideal()):
            continue
        return False
    return True


# ---------------------------------------------------------------- sets


@dataclass(frozen=True)
class LocallyClosedSet:
    """The point set ``V(closure) - V(boundary)``."""

    closure: IdealHandle
    boundary: IdealHandle = None

    def __post_init__(self):
        if self.boundary is None:
            object.__setattr__(self, "boundary", IdealHandle.unit(self.closure.ring))
        _check_same_ring(self.closure, self.boundary)

    @classmethod
    def closed(cls, ideal: IdealHandle):
        return cls(ideal, IdealHandle.unit(ideal.ring))

    @property
    def ring(self):
        return self.closure.ring

    def is_closed_form(self) -> bool:
        return self.boundary.is_unit()

    def contains_point(self, point) -> bool:
        return vanishes_at(self.closure, point) and not vanishes_at(self.boundary, point)

    def zariski_closure(self) -> IdealHandle:
        if self.boundary.is_unit():
            return self.closure
        return saturation(self.closure, self.boundary)

    def is_empty(self) -> bool:
        return radical_contains(self.closure, self.boundary)


def set_subset(A: LocallyClosedSet, B: LocallyClosedSet) -> bool:
    """Point-set containment ``A ⊆ B``."""
    _check_same_ring(A.closure, B.closure)
    if not radical_contains(A.zariski_closure(), B.closure):
        return False
    if B.boundary.is_unit():
        return True
    return radical_contains(ideal_sum(A.closure, B.boundary), A.boundary)


def set_equal(A: LocallyClosedSet, B: LocallyClosedSet) -> bool:
    return set_subset(A, B) and set_subset(B, A)


def set_union(A: LocallyClosedSet, B: LocallyClosedSet) -> LocallyClosedSet:
    """Union, represented as ``V(cA ∩ cB)`` minus the closure of the gap.

    Exact whenever the union is locally closed (always for closed inputs).
    """
    _check_same_ring(A.closure, B.closure)
    closure = intersect(A.closure, B.closure)
    if A.boundary.is_unit() and B.boundary.is_unit():
        return LocallyClosedSet(closure)
    parts = [ideal_sum(A.boundary, B.boundary)]
    if not A.boundary.is_unit():
        parts.append(saturation(A.boundary, B.closure))
    if not B.boundary.is_unit():
        parts.append(saturation(B.boundary, A.closure))
    boundary = intersect_all(parts).gb_ideal()
    return LocallyClosedSet(closure, boundary)


def set_difference_closure(A: LocallyClosedSet, B: LocallyClosedSet) -> LocallyClosedSet:
    """Zariski closure of ``A`` minus the closure of ``B``, as a closed set."""
    _check_same_ring(A.closure, B.closure)
    remove = ideal_product(A.boundary, B.zariski_closure())
    return LocallyClosedSet(saturation(A.closure, remove))

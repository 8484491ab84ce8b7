"""Conormal and relative conormal ideals in the cotangent ring.

The cotangent ring is the base ring followed by one covector variable per
base variable.  Blow-ups of the graph of ``df`` are only ever computed as
fibres over a chosen point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .geometry import all_minors, jacobian_matrix
from .ideal import (
    INFINITE,
    IdealHandle,
    dimension,
    ideal_sum,
    local_dimension_at_origin,
    local_multiplicity_at_origin,
    radical_contains,
    saturation,
    translate_to_origin,
)
from .poly import Poly, rat

__all__ = [
    "NotIsolated",
    "FunctionVanishesOnComponent",
    "CotangentRing",
    "ConormalIdeal",
    "ExceptionalFibre",
    "conormal_ideal",
    "relative_conormal_ideal",
    "image_ddf_ideal",
    "critical_ideal",
    "check_not_vanishing",
    "cotangent_multiplicity",
    "exceptional_fibre",
    "is_w_homogeneous",
]


class NotIsolated(ValueError):
    """An intersection that should be 0-dimensional at a point is not."""


class FunctionVanishesOnComponent(ValueError):
    """``f`` is identically zero on some component of a stratum closure."""


def _fresh(base, stem):
    taken = set(base)
    out = []
    for v in base:
        name = f"{stem}_{v}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        out.append(name)
    return tuple(out)


@dataclass(frozen=True)
class CotangentRing:
    """Base variables ``z`` followed by covector variables ``w``."""

    base: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))

    @property
    def fibre(self) -> tuple:
        return _fresh(self.base, "w")

    @property
    def ring(self) -> tuple:
        return self.base + self.fibre

    @property
    def n(self) -> int:
        return len(self.base)

    def lift(self, p: Poly) -> Poly:
        return p.change_ring(self.ring)

    def lift_ideal(self, I: IdealHandle) -> IdealHandle:
        return I.change_ring(self.ring)

    def w(self, i: int) -> Poly:
        return Poly.var(self.ring, self.fibre[i])

    def w_vars(self) -> list:
        return [self.w(i) for i in range(self.n)]

    def substitute_gradient(self, g: Poly, f: Poly) -> Poly:
        """``g(z, grad f(z))`` as a polynomial in the base ring."""
        grad = [self.lift(d) for d in f.gradient()]
        sub = {self.n + i: grad[i] for i in range(self.n)}
        return g.subs(sub).change_ring(self.base)

    def project(self, g: Poly) -> Poly:
        """Drop the covector variables (they must not occur)."""
        return g.change_ring(self.base)


@dataclass(frozen=True)
class ConormalIdeal:
    ideal: IdealHandle
    source: str
    cot: CotangentRing


@dataclass(frozen=True)
class ExceptionalFibre:
    """Fibre over ``point`` of the blow-up along the image of ``df``.

    ``ideal`` lives in the projective variables ``u`` and is saturated by
    the irrelevant ideal: the unit ideal means an empty fibre, the zero
    ideal the whole projective space.
    """

    point: tuple
    ideal: IdealHandle

    @property
    def is_empty(self) -> bool:
        return self.ideal.is_unit()

    @property
    def is_full(self) -> bool:
        return self.ideal.is_zero() or all(b.is_zero() for b in self.ideal.basis())

    @property
    def projective_dimension(self):
        d = dimension(self.ideal)
        return d - 1


def is_w_homogeneous(I: IdealHandle, cot: CotangentRing) -> bool:
    """Every reduced-basis element is homogeneous in the covector variables."""
    n = cot.n
    for g in I.basis():
        degs = {sum(m[n:]) for m in g.terms}
        if len(degs) > 1:
            return False
    return True


def _stack(M, *rows):
    return [list(r) for r in M] + [list(r) for r in rows]


def _sat_by_polys(I: IdealHandle, polys) -> IdealHandle:
    polys = [p for p in polys if not p.is_zero()]
    if not polys or any(p.is_constant() for p in polys):
        return I
    return saturation(I, IdealHandle(I.ring, polys))


def conormal_ideal(M_closure: IdealHandle, codim: int, source: str = "M") -> ConormalIdeal:
    """Closure of the conormal of the regular part of ``V(M_closure)``."""
    base = M_closure.ring
    cot = CotangentRing(base)
    n = cot.n
    if codim < 0 or codim > n:
        raise ValueError(f"codim {codim} out of range")
    gens = list(M_closure.generators)
    w = cot.w_vars()
    if codim == 0:
        if gens and not all(g.is_zero() for g in gens):
            raise ValueError("codim 0 requires the zero ideal")
        return ConormalIdeal(IdealHandle(cot.ring, w), source, cot)
    if len(gens) < codim:
        raise ValueError(f"codim {codim} needs at least {codim} equations")
    J = [[cot.lift(e) for e in row] for row in jacobian_matrix(gens)]
    big = all_minors(_stack(J, w), codim + 1)
    I = IdealHandle(cot.ring, [cot.lift(g) for g in gens] + big)
    I = _sat_by_polys(I, all_minors(J, codim))
    return ConormalIdeal(I.gb_ideal(), source, cot)


def image_ddf_ideal(f: Poly, cot: CotangentRing | None = None) -> IdealHandle:
    """``<w_i - df/dz_i>``: the graph of ``df``."""
    cot = cot or CotangentRing(f.ring)
    if f.ring != cot.base:
        raise ValueError("function ring differs from the cotangent base")
    grad = f.gradient()
    return IdealHandle(cot.ring, [cot.w(i) - cot.lift(grad[i]) for i in range(cot.n)])


def critical_ideal(S_closure: IdealHandle, codim: int, f: Poly) -> IdealHandle:
    """``I(S) + (c+1)``-minors of ``[Jac; grad f]``: critical points of ``f|S``."""
    gens = list(S_closure.generators)
    grad = f.gradient()
    M = (jacobian_matrix(gens) if codim else []) + [grad]
    return IdealHandle(S_closure.ring, gens + all_minors(M, codim + 1))


def check_not_vanishing(S_closure: IdealHandle, f: Poly, name: str = "stratum"):
    """Raise unless ``f`` is nonzero on every component of ``V(S_closure)``."""
    if f.is_zero():
        raise FunctionVanishesOnComponent(f"f is zero on {name}")
    rest = saturation(S_closure, IdealHandle(S_closure.ring, [f]))
    if not radical_contains(S_closure, rest):
        raise FunctionVanishesOnComponent(f"f vanishes on a component of {name}")


def relative_conormal_ideal(S_closure: IdealHandle, codim: int, f: Poly,
                            source: str = "S") -> ConormalIdeal:
    """Covectors killing ``T S ∩ ker df`` over the non-critical part of ``S``."""
    check_not_vanishing(S_closure, f, source)
    cot = CotangentRing(S_closure.ring)
    gens = list(S_closure.generators)
    J = [[cot.lift(e) for e in row] for row in jacobian_matrix(gens)] if codim else []
    grad = [cot.lift(d) for d in f.gradient()]
    big = all_minors(_stack(J, grad, cot.w_vars()), codim + 2)
    I = IdealHandle(cot.ring, [cot.lift(g) for g in gens] + big)
    if codim:
        I = _sat_by_polys(I, all_minors(J, codim))
    crit = critical_ideal(S_closure, codim, f)
    I = saturation(I, cot.lift_ideal(crit))
    return ConormalIdeal(I.gb_ideal(), source, cot)


def _point_with_gradient(f: Poly, x):
    x = tuple(rat(c) for c in x)
    if len(x) != f.nvars:
        raise ValueError(f"point has {len(x)} coordinates, ring has {f.nvars}")
    return x, tuple(d(*x) for d in f.gradient())


def cotangent_multiplicity(C: ConormalIdeal, f: Poly, x: Sequence) -> int:
    """Local intersection number of ``V(C)`` and the graph of ``df`` at ``(x, df(x))``."""
    x, grad = _point_with_gradient(f, x)
    I = ideal_sum(C.ideal, image_ddf_ideal(f, C.cot))
    I0 = translate_to_origin(I, x + grad)
    if local_dimension_at_origin(I0) > 0:
        raise NotIsolated("not isolated with respect to this cycle")
    m = local_multiplicity_at_origin(I0)
    if m == INFINITE:
        raise NotIsolated("not isolated with respect to this cycle")
    return int(m)


def exceptional_fibre(C: ConormalIdeal, f: Poly, x: Sequence) -> ExceptionalFibre:
    """Fibre over ``(x, df(x))`` of the blow-up of ``V(C)`` along the graph of ``df``."""
    x, grad = _point_with_gradient(f, x)
    cot = C.cot
    n = cot.n
    u_names = _fresh(cot.ring, "u")[:n]
    full = cot.ring + u_names
    u = [Poly.var(full, v) for v in u_names]
    gf = f.gradient()
    g = [Poly.var(full, cot.fibre[i]) - gf[i].change_ring(full) for i in range(n)]
    rel = [u[i] * g[j] - u[j] * g[i] for i in range(n) for j in range(i + 1, n)]
    I = IdealHandle(full, [c.change_ring(full) for c in C.ideal.generators] + rel)
    I = saturation(I, IdealHandle(full, g))
    sub = {i: x[i] for i in range(n)}
    sub.update({n + i: grad[i] for i in range(n)})
    fib = IdealHandle(full, [h.subs(sub) for h in I.generators]).change_ring(u_names)
    fib = saturation(fib, IdealHandle(u_names, [Poly.var(u_names, v) for v in u_names]))
    return ExceptionalFibre(x, fib.gb_ideal())

"""Varieties, Jacobian minors, singular loci and stratification data.

Stratifications are user input.  Each stratum carries the reduced Betti
numbers of its complex link, with the convention that an empty link (a
maximal stratum) has ``{-1: 1}``; these weights are the only topological
data the Milnor-fibre formulas need.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .ideal import (
    IdealHandle,
    NEG_INF,
    dimension,
    ideal_product,
    radical_contains,
)
from .poly import Poly, partial_derivative

__all__ = [
    "MissingLinkData",
    "jacobian_matrix",
    "all_minors",
    "minors_ideal",
    "Variety",
    "singular_locus",
    "Stratum",
    "Stratification",
    "CycleTable",
    "tilde_betti_weight",
    "perverse_cycle",
    "default_stratification",
]


class MissingLinkData(ValueError):
    """A stratum's complex-link Betti numbers are needed but were not given."""


def jacobian_matrix(gens: Sequence[Poly]) -> list:
    """Rows are generators, columns are partial derivatives."""
    gens = list(gens)
    if not gens:
        raise ValueError("jacobian_matrix needs at least one polynomial")
    n = gens[0].nvars
    return [[partial_derivative(g, i) for i in range(n)] for g in gens]


def _row_minors(rows, ncols, k):
    """All k x k minors using the given k rows, keyed by column tuple.

    Laplace expansion along rows with memoisation on column subsets.
    """
    ring = rows[0][0].ring
    layer = {(): Poly.const(ring, 1)}
    for depth in range(k):
        row = rows[depth]
        nxt = {}
        for cols in combinations(range(ncols), depth + 1):
            acc = Poly.zero(ring)
            for pos, c in enumerate(cols):
                entry = row[c]
                if entry.is_zero():
                    continue
                rest = cols[:pos] + cols[pos + 1:]
                sub = layer.get(rest)
                if sub is None or sub.is_zero():
                    continue
                sign = -1 if (depth + pos) % 2 else 1
                term = entry * sub
                acc = acc + term if sign > 0 else acc - term
            nxt[cols] = acc
        layer = nxt
    return layer


def all_minors(M, size: int) -> list:
    """Every ``size x size`` minor of ``M`` (zero ones dropped)."""
    rows, cols = len(M), len(M[0]) if M else 0
    if size == 0:
        ring = M[0][0].ring
        return [Poly.const(ring, 1)]
    if size > min(rows, cols):
        return []
    out = []
    for rsel in combinations(range(rows), size):
        sub = [M[r] for r in rsel]
        for val in _row_minors(sub, cols, size).values():
            if not val.is_zero():
                out.append(val)
    return out


def minors_ideal(M, size: int) -> IdealHandle:
    """Ideal of all ``size x size`` minors of the polynomial matrix ``M``."""
    if not M or not M[0]:
        raise ValueError("empty matrix")
    if size < 0 or size > min(len(M), len(M[0])):
        raise ValueError(f"minor size {size} out of range for a {len(M)}x{len(M[0])} matrix")
    return IdealHandle(M[0][0].ring, all_minors(M, size))


@dataclass
class Variety:
    """An affine variety given by an ideal; ``codim`` is declared or computed."""

    ideal: IdealHandle
    dim: int | None = None
    codim: int | None = None

    def __post_init__(self):
        n = len(self.ideal.ring)
        if self.dim is None and self.codim is None:
            d = dimension(self.ideal)
            if d == NEG_INF:
                raise ValueError("empty variety")
            self.dim = d
        if self.dim is None:
            self.dim = n - self.codim
        if self.codim is None:
            self.codim = n - self.dim

    @classmethod
    def from_strings(cls, ring, gens, **kw):
        return cls(IdealHandle(ring, gens), **kw)

    @property
    def ring(self):
        return self.ideal.ring

    @property
    def generators(self):
        return self.ideal.generators

    def is_hypersurface(self) -> bool:
        return len(self.ideal.generators) == 1 and self.codim == 1

    def is_ambient(self) -> bool:
        return not self.ideal.generators

    def check_codim(self):
        d = dimension(self.ideal)
        if d != self.dim:
            raise ValueError(
                f"declared dimension {self.dim} but the ideal has dimension {d}")


def _jacobian_or_empty(ideal: IdealHandle):
    return jacobian_matrix(ideal.generators) if ideal.generators else []


def singular_locus(X: Variety) -> IdealHandle:
    """``I(X)`` plus the ``c x c`` minors of the Jacobian (``c`` = codim)."""
    c = X.codim
    if c == 0:
        return IdealHandle.unit(X.ring)
    if not X.generators:
        raise ValueError("codim > 0 but no defining equations")
    J = jacobian_matrix(X.generators)
    if c > len(J):
        raise ValueError(f"codim {c} exceeds the number of equations {len(J)}")
    return IdealHandle(X.ring, list(X.generators) + all_minors(J, c))


@dataclass
class Stratum:
    """A stratum ``V(closure) - V(boundary)`` with its complex-link data."""

    name: str
    closure: IdealHandle
    boundary: IdealHandle
    dim: int
    link_betti: Mapping[int, int] | None = None

    def __post_init__(self):
        if self.link_betti is not None:
            lb = {int(k): int(v) for k, v in self.link_betti.items()}
            if any(k < -1 for k in lb):
                raise ValueError(f"stratum {self.name}: link Betti index below -1")
            if any(v < 0 for v in lb.values()):
                raise ValueError(f"stratum {self.name}: negative link Betti number")
            self.link_betti = {k: v for k, v in sorted(lb.items())}

    @property
    def ring(self):
        return self.closure.ring

    @property
    def codim(self) -> int:
        return len(self.ring) - self.dim

    @property
    def is_maximal(self) -> bool:
        return self.link_betti is not None and {k: v for k, v in self.link_betti.items() if v} == {-1: 1}

    def require_link(self):
        if self.link_betti is None:
            raise MissingLinkData(f"stratum {self.name!r} has no link_betti data")
        return self.link_betti

    @property
    def visible(self) -> bool:
        return any(v for v in self.require_link().values())

    def check_dimension(self):
        d = dimension(self.closure)
        if d != self.dim:
            raise ValueError(f"stratum {self.name}: declared dim {self.dim}, closure has {d}")


def tilde_betti_weight(S: Stratum, k: int) -> int:
    """Reduced Betti number of the link in degree ``k - dim S``."""
    return S.require_link().get(k - S.dim, 0)


@dataclass
class Stratification:
    """Strata of an ambient variety.

    Strata with no link data that lie in no other stratum's closure are
    treated as maximal and get the empty-link weights ``{-1: 1}``.
    """

    strata: list
    ambient: Variety

    def __post_init__(self):
        names = [s.name for s in self.strata]
        if len(set(names)) != len(names):
            raise ValueError("stratum names must be unique")
        for s in self.strata:
            if s.ring != self.ambient.ring:
                raise ValueError(f"stratum {s.name} lives in a different ring")
        for s in self.strata:
            if s.link_betti is None and not self._in_other_closure(s):
                s.link_betti = {-1: 1}

    def _in_other_closure(self, s: Stratum) -> bool:
        for t in self.strata:
            if t is s or t.dim <= s.dim:
                continue
            if radical_contains(s.closure, t.closure):
                return True
        return False

    def __iter__(self):
        return iter(self.strata)

    def __getitem__(self, name):
        for s in self.strata:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def ring(self):
        return self.ambient.ring

    @property
    def dim(self) -> int:
        return max(s.dim for s in self.strata)

    def visible_strata(self):
        return [s for s in self.strata if s.visible]

    def lint(self) -> list:
        """Return a list of human-readable problems (empty when clean)."""
        issues = []
        amb = self.ambient.ideal
        for s in self.strata:
            if not radical_contains(s.closure, amb):
                issues.append(f"{s.name}: closure not contained in the ambient variety")
            if dimension(s.closure) != s.dim:
                issues.append(f"{s.name}: declared dim {s.dim} differs from closure dimension")
            if not radical_contains(s.boundary, s.closure):
                issues.append(f"{s.name}: boundary not contained in closure")
            if s.is_maximal and s.link_betti != {-1: 1}:
                issues.append(f"{s.name}: maximal stratum must have link_betti {{-1: 1}}")
            if not s.boundary.is_unit():
                smaller = [t.closure for t in self.strata if t.dim < s.dim]
                if not smaller:
                    issues.append(f"{s.name}: nonempty boundary but no smaller strata")
                else:
                    union = smaller[0]
                    for c in smaller[1:]:
                        union = ideal_product(union, c)
                    if not radical_contains(s.boundary, union):
                        issues.append(f"{s.name}: boundary not covered by smaller strata")
        cover = self.strata[0].closure
        for s in self.strata[1:]:
            cover = ideal_product(cover, s.closure)
        if not radical_contains(amb, cover):
            issues.append("strata closures do not cover the ambient variety")
        return issues


@dataclass
class CycleTable:
    """Integer weights on strata conormals: a characteristic-cycle shadow."""

    entries: dict = field(default_factory=dict)

    def is_perverse_admissible(self) -> bool:
        """All nonzero weights share one sign (all-zero is admissible)."""
        signs = {v > 0 for v in self.entries.values() if v}
        return len(signs) <= 1

    def support(self):
        return sorted(k for k, v in self.entries.items() if v)


def perverse_cycle(strat: Stratification, k: int) -> CycleTable:
    """Weights ``(-1)^dim X * b~_{k - d_a}(L_a)`` of the ``k``-th perverse piece."""
    sign = -1 if strat.dim % 2 else 1
    return CycleTable({s.name: sign * tilde_betti_weight(s, k) for s in strat.strata})


def default_stratification(X: Variety, point_link_betti: Mapping[int, int] | None = None,
                           ) -> Stratification:
    """``{X - Sing, Sing}`` for a variety that is smooth or singular only at 0.

    The origin's link data must be supplied for anything downstream that
    needs visibility of the point stratum.
    """
    ring = X.ring
    sing = singular_locus(X)
    top_closure = X.ideal
    if sing.is_unit():
        top = Stratum("reg", top_closure, IdealHandle.unit(ring), X.dim, {-1: 1})
        return Stratification([top], X)
    origin = IdealHandle.maximal(ring)
    if not radical_contains(sing, origin):
        raise ValueError("default stratification only supports singular loci inside {0}")
    if not all(g.constant_term() == 0 for g in X.generators):
        raise ValueError("origin is not on the variety")
    top = Stratum("reg", top_closure, origin, X.dim, {-1: 1})
    point = Stratum("origin", origin, IdealHandle.unit(ring), 0,
                    dict(point_link_betti) if point_link_betti is not None else None)
    return Stratification([top, point], X)

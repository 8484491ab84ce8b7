"""Critical loci of a function on a singular space, in their several flavours.

Closed flavours come back as ideals wrapped in ``LocallyClosedSet``.  The
algebraic and Nash flavours are decided one point at a time, and so is
topological criticality when that can be settled exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

from .conormal import (
    ConormalIdeal,
    CotangentRing,
    conormal_ideal,
    critical_ideal,
)
from .geometry import (
    Stratification,
    Stratum,
    Variety,
    singular_locus,
)
from .ideal import (
    INFINITE,
    IdealHandle,
    LocallyClosedSet,
    ideal_sum,
    intersect_all,
    is_member,
    local_dimension_at_origin,
    local_multiplicity_at_origin,
    radical_membership,
    saturation,
    set_equal,
    set_subset,
    translate_to_origin,
    vanishes_at,
)
from .poly import Poly, rat

__all__ = [
    "PointNotOnVariety",
    "AVATARS",
    "AvatarResult",
    "sigma_alg_membership",
    "sigma_reg",
    "sigma_rdf",
    "stratum_critical_ideal",
    "sigma_stratified",
    "conormal_substitution_locus",
    "sigma_cnr",
    "sigma_nash_membership",
    "sigma_C",
    "sigma_C_membership",
    "AuditCheck",
    "AuditReport",
    "containment_audit",
]

AVATARS = ("alg", "reg", "nash", "cnr", "can", "strat", "rdf", "C")


class PointNotOnVariety(ValueError):
    pass


@dataclass
class AvatarResult:
    """One critical locus: a set, or a table of point memberships."""

    avatar: str
    set: LocallyClosedSet | None = None
    memberships: dict = field(default_factory=dict)
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        if self.avatar not in AVATARS:
            raise ValueError(f"unknown avatar {self.avatar!r}")
        if self.avatar in ("cnr", "rdf", "can", "strat") and self.set is not None:
            if not self.set.boundary.is_unit():
                raise ValueError(f"{self.avatar} must be a closed set")


def _point(x, ring):
    pt = tuple(rat(c) for c in x)
    if len(pt) != len(ring):
        raise ValueError(f"point has {len(pt)} coordinates, ring has {len(ring)}")
    return pt


def _require_on(X: Variety, pt):
    if not vanishes_at(X.ideal, pt):
        raise PointNotOnVariety(f"{pt} is not on the variety")


def _square_of_maximal(ring):
    n = len(ring)
    gens = []
    for i, j in combinations_with_replacement(range(n), 2):
        e = [0] * n
        e[i] += 1
        e[j] += 1
        gens.append(Poly.monomial(ring, tuple(e)))
    return gens


def sigma_alg_membership(X: Variety, f: Poly, x: Sequence) -> bool:
    """``f - f(x)`` lies in the square of the maximal ideal of ``X`` at ``x``."""
    pt = _point(x, X.ring)
    _require_on(X, pt)
    I0 = translate_to_origin(X.ideal, pt)
    shift = {i: Poly.var(f.ring, v) + c for i, (v, c) in enumerate(zip(f.ring, pt)) if c}
    g = f.subs(shift) if shift else f
    g = g - g.constant_term()
    return is_member(g, IdealHandle(X.ring, list(I0.generators) + _square_of_maximal(X.ring)))


def _rank_ideal(X: Variety, f: Poly) -> IdealHandle:
    return critical_ideal(X.ideal, X.codim, f)


def sigma_reg(X: Variety, f: Poly) -> LocallyClosedSet:
    """Critical points of ``f`` on the smooth part of ``X``."""
    sing = singular_locus(X)
    closure = _rank_ideal(X, f)
    if not sing.is_unit():
        closure = saturation(closure, sing)
    return LocallyClosedSet(closure.gb_ideal(), sing)


def sigma_rdf(X: Variety, f: Poly) -> LocallyClosedSet:
    """Points where ``[Jac; grad f]`` drops rank, singular points included."""
    return LocallyClosedSet.closed(_rank_ideal(X, f).gb_ideal())


def stratum_critical_ideal(S: Stratum, f: Poly) -> IdealHandle:
    """Closure of the critical locus of ``f`` restricted to one stratum."""
    if S.dim == 0:
        return S.closure.gb_ideal()
    crit = critical_ideal(S.closure, S.codim, f)
    if not S.boundary.is_unit():
        crit = saturation(crit, S.boundary)
    return crit.gb_ideal()


def sigma_stratified(strat: Stratification, f: Poly) -> LocallyClosedSet:
    """Union of the per-stratum critical loci."""
    parts = [stratum_critical_ideal(S, f) for S in strat]
    return LocallyClosedSet.closed(intersect_all(parts).gb_ideal())


def conormal_substitution_locus(C: ConormalIdeal | IdealHandle, f: Poly,
                                cot: CotangentRing | None = None) -> IdealHandle:
    """Points ``z`` with ``(z, grad f(z))`` on the conormal."""
    if isinstance(C, ConormalIdeal):
        ideal, cot = C.ideal, C.cot
    else:
        ideal = C
        cot = cot or CotangentRing(f.ring)
    if ideal.ring != cot.ring or f.ring != cot.base:
        raise ValueError("arity mismatch between conormal ideal and function")
    return IdealHandle(cot.base, [cot.substitute_gradient(g, f) for g in ideal.generators]).gb_ideal()


def sigma_cnr(X: Variety, f: Poly) -> LocallyClosedSet:
    """Points where ``df`` is a limit of conormal covectors of ``X_reg``."""
    C = conormal_ideal(X.ideal, X.codim, "X")
    return LocallyClosedSet.closed(conormal_substitution_locus(C, f))


def sigma_nash_membership(X: Variety, f: Poly, x: Sequence) -> bool:
    """``df(x)`` kills every limit of tangent planes at ``x`` (hypersurfaces only)."""
    pt = _point(x, X.ring)
    if not (X.is_hypersurface() or X.is_ambient()):
        raise ValueError("Nash membership is only implemented for hypersurfaces")
    _require_on(X, pt)
    grad = [d(*pt) for d in f.gradient()]
    if all(g == 0 for g in grad):
        return True
    if X.is_ambient():
        return False
    C = conormal_ideal(X.ideal, 1, "X")
    cot = C.cot
    n = cot.n
    fibre_ring = cot.fibre
    sub = {i: pt[i] for i in range(n)}
    fib = IdealHandle(cot.ring, [g.subs(sub) for g in C.ideal.generators]).change_ring(fibre_ring)
    w = [Poly.var(fibre_ring, v) for v in fibre_ring]
    fib = saturation(fib, IdealHandle(fibre_ring, w))
    for i in range(n):
        for j in range(i + 1, n):
            minor = w[i] * grad[j] - w[j] * grad[i]
            if not radical_membership(minor, fib):
                return False
    return True


def sigma_C(strat: Stratification, f: Poly) -> LocallyClosedSet:
    """Closure of the topological critical locus: conormal loci of visible strata."""
    parts = []
    for S in strat:
        if not S.visible:
            continue
        C = conormal_ideal(S.closure, S.codim, S.name)
        parts.append(conormal_substitution_locus(C, f))
    if not parts:
        return LocallyClosedSet.closed(IdealHandle.unit(strat.ring))
    return LocallyClosedSet.closed(intersect_all(parts).gb_ideal())


def _curve_fibre_count(X: Variety, f: Poly, pt) -> int:
    """Number of Milnor-fibre points of ``f`` at ``pt`` on a reduced curve."""
    v = f(*pt)
    g = f - v
    I = saturation(X.ideal, IdealHandle(X.ring, [g]))
    I = ideal_sum(I, IdealHandle(X.ring, [g]))
    m = local_multiplicity_at_origin(translate_to_origin(I, pt))
    if m == INFINITE:
        raise ValueError("f is not finite on the curve at this point")
    return int(m)


def sigma_C_membership(strat: Stratification, f: Poly, x: Sequence, closure=None):
    """Pointwise topological criticality: ``True``, ``False`` or ``None`` (undecided).

    Decided exactly when ``x`` is off the closure, when ``x`` is isolated in
    the closure (then it belongs to the set), or when ``X`` is a curve (then
    the Milnor fibre is a finite set of points and is counted).
    """
    X = strat.ambient
    pt = _point(x, X.ring)
    _require_on(X, pt)
    closure = closure if closure is not None else sigma_C(strat, f)
    if not closure.contains_point(pt):
        return False
    if X.dim <= 1:
        return _curve_fibre_count(X, f, pt) != 1
    if local_dimension_at_origin(translate_to_origin(closure.closure, pt)) <= 0:
        return True
    return None


@dataclass
class AuditCheck:
    relation: str
    holds: bool
    strict: bool | None
    witnesses: list = field(default_factory=list)


@dataclass
class AuditReport:
    checks: list
    pointwise: list
    sets: dict

    @property
    def status(self) -> str:
        return "pass" if all(c.holds for c in self.checks) else "fail"

    def check(self, relation) -> AuditCheck:
        for c in self.checks:
            if c.relation == relation:
                return c
        raise KeyError(relation)


_POINT_CHAIN = ("reg", "alg", "nash", "cnr", "Cbar", "strat")


def containment_audit(X: Variety, f: Poly, strat: Stratification | None = None,
                      points: Sequence = (), avatars: Sequence | None = None) -> AuditReport:
    """Check the inclusion chain of critical loci, set-wise and on sample points.

    ``avatars`` restricts the audit to a subset of
    ``reg, alg, nash, cnr, Cbar, strat, rdf`` (default: all computable).
    """
    want = set(avatars) if avatars is not None else {"reg", "alg", "nash", "cnr", "rdf", "Cbar", "strat"}
    if strat is None:
        want -= {"Cbar", "strat"}
    if not (X.is_hypersurface() or X.is_ambient()):
        want.discard("nash")
    builders = {"reg": lambda: sigma_reg(X, f), "cnr": lambda: sigma_cnr(X, f),
                "rdf": lambda: sigma_rdf(X, f), "Cbar": lambda: sigma_C(strat, f),
                "strat": lambda: sigma_stratified(strat, f)}
    sets = {k: b() for k, b in builders.items() if k in want}

    rows = []
    for x in points:
        pt = _point(x, X.ring)
        row = {"point": pt}
        for k, S in sets.items():
            row[k] = S.contains_point(pt)
        if "alg" in want:
            row["alg"] = sigma_alg_membership(X, f, pt)
        if "nash" in want:
            row["nash"] = sigma_nash_membership(X, f, pt)
        if "Cbar" in want:
            row["C"] = sigma_C_membership(strat, f, pt, sets["Cbar"])
        rows.append(row)

    checks = []

    def set_check(a, b):
        if a not in sets or b not in sets:
            return
        A, B = sets[a], sets[b]
        Ac = LocallyClosedSet.closed(A.zariski_closure())
        holds = set_subset(Ac, B)
        strict = (not set_equal(Ac, B)) if holds else None
        wit = [r["point"] for r in rows if r.get(b) and not _in_closure(A, r["point"])]
        checks.append(AuditCheck(f"closure({a}) <= {b}", holds, strict, wit))

    set_check("reg", "cnr")
    set_check("reg", "rdf")
    set_check("cnr", "Cbar")
    set_check("Cbar", "strat")
    set_check("Cbar", "rdf")

    chain = [a for a in _POINT_CHAIN if a in want]
    for a, b in zip(chain, chain[1:]):
        bad = [r["point"] for r in rows if r[a] and not r[b]]
        wit = [r["point"] for r in rows if r[b] and not r[a]]
        checks.append(AuditCheck(f"{a} <= {b} at points", not bad,
                                 (bool(wit) if rows else None) if not bad else None,
                                 wit if not bad else bad))
    if "Cbar" in want and rows:
        bad = [r["point"] for r in rows if r["C"] is True and not r["Cbar"]]
        checks.append(AuditCheck("C <= Cbar at points", not bad, None, bad))
    return AuditReport(checks, rows, sets)


def _in_closure(A: LocallyClosedSet, pt) -> bool:
    return vanishes_at(A.zariski_closure(), pt)

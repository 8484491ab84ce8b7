"""Relative polar curves, polar differences and Milnor-fibre Betti numbers.

A linear form ``L`` is drawn from a seeded generator and kept only when a
list of checkable genericity tests passes on every relevant stratum; the
list of passed tests travels with the line so downstream numbers can be
audited.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .conormal import check_not_vanishing, critical_ideal
from .critical import sigma_C
from .geometry import (
    Stratification,
    Stratum,
    Variety,
    all_minors,
    jacobian_matrix,
    tilde_betti_weight,
)
from .ideal import (
    INFINITE,
    IdealHandle,
    ideal_sum,
    local_dimension_at_origin,
    local_multiplicity_at_origin,
    saturation,
    tangent_cone,
)
from .poly import Poly, rat

__all__ = [
    "GenericityExhausted",
    "NotIsolatedCritical",
    "GenericLine",
    "PolarCurve",
    "BettiReport",
    "CHECKS",
    "linear_form",
    "pick_generic_line",
    "relative_polar_curve",
    "polar_difference",
    "certify_line",
    "milnor_algebra_mu",
    "betti_isolated",
    "icis_betti",
    "icis_betti_numbers",
]

CHECKS = ("polar-dim", "proper-f", "proper-L", "transverse-L", "no-boundary-component",
          "nonnegative-difference")


class GenericityExhausted(RuntimeError):
    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = dict(failures or {})


class NotIsolatedCritical(ValueError):
    """The topological critical locus is not isolated at the origin."""


@dataclass(frozen=True)
class GenericLine:
    coefficients: tuple
    seed: int | None = None
    certificate: tuple = ()
    retries: int = 0

    def __post_init__(self):
        coeffs = tuple(rat(c) for c in self.coefficients)
        if not any(coeffs):
            raise ValueError("a generic line must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    def form(self, ring) -> Poly:
        return linear_form(ring, self.coefficients)


def linear_form(ring, coefficients) -> Poly:
    ring = tuple(ring)
    if len(coefficients) != len(ring):
        raise ValueError("coefficient count differs from ring arity")
    return Poly(ring, {tuple(int(i == j) for j in range(len(ring))): rat(c)
                       for i, c in enumerate(coefficients) if rat(c)})


@dataclass
class PolarCurve:
    stratum: str
    ideal: IdealHandle
    line: tuple


@dataclass
class BettiReport:
    k: int
    value: int
    contributions: list = field(default_factory=list)

    def __post_init__(self):
        total = sum(w * m for _, w, m in self.contributions)
        if total != self.value:
            raise ValueError("Betti value differs from its contributions")


def _coeffs(L) -> tuple:
    return L.coefficients if isinstance(L, GenericLine) else tuple(rat(c) for c in L)


def relative_polar_curve(S: Stratum, f: Poly, L, check=True) -> PolarCurve:
    """Closure of the critical locus of ``(f, L)`` on ``S`` away from that of ``f``."""
    if check:
        check_not_vanishing(S.closure, f, S.name)
    ring = S.ring
    Lp = linear_form(ring, _coeffs(L))
    gens = list(S.closure.generators)
    c = S.codim
    if S.dim <= 1:
        G = S.closure
    else:
        M = (jacobian_matrix(gens) if c else []) + [f.gradient(), Lp.gradient()]
        G = IdealHandle(ring, gens + all_minors(M, c + 2))
    if not S.boundary.is_unit():
        G = saturation(G, S.boundary)
    if S.dim > 1:
        G = saturation(G, critical_ideal(S.closure, c, f))
    return PolarCurve(S.name, G.gb_ideal(), _coeffs(L))


def _intersections(G: IdealHandle, f: Poly, Lp: Poly):
    a = local_multiplicity_at_origin(ideal_sum(G, IdealHandle(G.ring, [f])))
    b = local_multiplicity_at_origin(ideal_sum(G, IdealHandle(G.ring, [Lp])))
    return a, b


def _require_isolated_crit(S: Stratum, f: Poly):
    if S.dim == 0:
        return
    crit = critical_ideal(S.closure, S.codim, f)
    if not S.boundary.is_unit():
        crit = saturation(crit, S.boundary)
    if local_dimension_at_origin(crit) > 0:
        raise NotIsolatedCritical(
            f"critical locus of f on stratum {S.name} is positive dimensional at 0")


def polar_difference(S: Stratum, f: Poly, L) -> int:
    """``(Γ·V(f))_0 - (Γ·V(L))_0`` for the relative polar curve Γ of ``S``."""
    _require_isolated_crit(S, f)
    P = relative_polar_curve(S, f, L)
    a, b = _intersections(P.ideal, f, linear_form(S.ring, P.line))
    if a == INFINITE or b == INFINITE:
        raise ValueError(f"non-proper intersection with the polar curve of {S.name}")
    return int(a - b)


def _relevant(strata, f):
    out = []
    for S in strata:
        if S.dim < 1:
            continue
        if S.link_betti is not None and not S.visible:
            continue
        if any(g.constant_term() != 0 for g in S.closure.generators):
            continue
        out.append(S)
    return out


def certify_line(strata: Sequence[Stratum], fs: Sequence[Poly], coeffs) -> tuple:
    """Run the genericity checks; return ``(passed, first failure or None)``."""
    for f in fs:
        for S in strata:
            P = relative_polar_curve(S, f, coeffs, check=False)
            G = P.ideal
            if local_dimension_at_origin(G) > 1:
                return False, "polar-dim"
            a, b = _intersections(G, f, linear_form(S.ring, coeffs))
            if a == INFINITE:
                return False, "proper-f"
            if b == INFINITE:
                return False, "proper-L"
            # V(L) may meet the tangent cone of the polar curve only at 0,
            # otherwise (Γ . V(L)) exceeds the multiplicity of Γ
            Lp = linear_form(S.ring, coeffs)
            if local_dimension_at_origin(ideal_sum(tangent_cone(G), IdealHandle(S.ring, [Lp]))) > 0:
                return False, "transverse-L"
            if not S.boundary.is_unit() and saturation(G, S.boundary) != G:
                return False, "no-boundary-component"
            if a - b < 0:
                return False, "nonnegative-difference"
    return True, None


def pick_generic_line(strata: Sequence[Stratum], f, seed: int = 0, max_retries: int = 20,
                      height: int = 5) -> GenericLine:
    """Draw ``L = sum a_i z_i`` with small nonzero integer ``a_i`` until certified.

    ``f`` may be a single function or a list (all must pass with one line).
    """
    fs = [f] if isinstance(f, Poly) else list(f)
    if not fs:
        raise ValueError("need at least one function")
    strata = list(strata)
    if not strata:
        raise ValueError("need at least one stratum")
    ring = strata[0].ring
    for g in fs:
        for S in strata:
            if S.dim >= 1:
                check_not_vanishing(S.closure, g, S.name)
    rel = _relevant(strata, fs)
    for g in fs:
        for S in rel:
            _require_isolated_crit(S, g)
    rng = random.Random(seed)
    failures = Counter()
    for attempt in range(max_retries + 1):
        coeffs = tuple(rng.choice([c for c in range(-height, height + 1) if c])
                       for _ in ring)
        ok, why = certify_line(rel, fs, coeffs)
        if ok:
            return GenericLine(coeffs, seed, CHECKS, attempt)
        failures[why] += 1
    worst = failures.most_common(1)[0][0]
    raise GenericityExhausted(
        f"no certified line after {max_retries + 1} draws; most frequent failure: {worst}",
        failures)


def milnor_algebra_mu(f: Poly):
    """Local colength of the gradient ideal at 0 (``INFINITE`` if non-isolated)."""
    return local_multiplicity_at_origin(IdealHandle(f.ring, f.gradient()))


def _origin_stratum(strat: Stratification):
    for S in strat:
        if S.dim == 0 and all(g.constant_term() == 0 for g in S.closure.generators):
            return S
    return None


def betti_isolated(strat: Stratification, f: Poly, k: int, L=None, seed: int = 0,
                   check_isolated: bool = True) -> BettiReport:
    """Reduced Betti number ``b~_k`` of the Milnor fibre of ``f`` at 0.

    Each visible stratum through 0 contributes its link weight times its
    polar difference; the point stratum contributes its weight times 1.
    Degrees outside ``[-1, dim X - 1]`` are 0 without computation.
    """
    if f.constant_term() != 0:
        raise ValueError("f must vanish at the origin")
    if not -1 <= k <= strat.dim - 1:
        return BettiReport(k, 0, [])
    if check_isolated:
        C = sigma_C(strat, f)
        if local_dimension_at_origin(C.closure) > 0:
            raise NotIsolatedCritical("closure of the topological critical locus is not isolated at 0")
    for S in strat:
        S.require_link()
    contributions = []
    through = [S for S in strat.visible_strata()
               if all(g.constant_term() == 0 for g in S.closure.generators)]
    if L is None and any(S.dim >= 1 for S in through):
        L = pick_generic_line(strat.strata, f, seed=seed)
    for S in through:
        w = tilde_betti_weight(S, k)
        if S.dim == 0:
            m = 1
        else:
            m = polar_difference(S, f, L)
        contributions.append((S.name, w, m))
    value = sum(w * m for _, w, m in contributions)
    return BettiReport(k, value, contributions)


def _icis_stratification(X: Variety, link_b: int):
    from .geometry import default_stratification

    strat = default_stratification(X, {X.dim - 1: link_b})
    return strat


def icis_betti(X: Variety, link_b: int, f: Poly, L=None, seed: int = 0) -> int:
    """``b~_{d-1}`` of the Milnor fibre on an isolated complete-intersection singularity."""
    return icis_betti_numbers(X, link_b, f, L, seed)[X.dim - 1]


def icis_betti_numbers(X: Variety, link_b: int, f: Poly, L=None, seed: int = 0) -> dict:
    """All reduced Betti numbers; only degree ``dim X - 1`` can be nonzero."""
    if link_b < 0:
        raise ValueError("link Betti number must be non-negative")
    d = X.dim
    strat = _icis_stratification(X, link_b)
    reg = strat.strata[0]
    if f.constant_term() != 0:
        raise ValueError("f must vanish at the origin")
    C = sigma_C(strat, f)
    if local_dimension_at_origin(C.closure) > 0:
        raise NotIsolatedCritical("0 is not isolated in the topological critical locus")
    if L is None:
        L = pick_generic_line([reg], f, seed=seed)
    value = link_b + polar_difference(reg, f, L)
    return {k: (value if k == d - 1 else 0) for k in range(-1, d)}

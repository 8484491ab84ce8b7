"""One-parameter families ``f_t`` on ``D x W`` and the Thom ``a_f`` verdict.

Constancy in ``t`` is checked on a finite list of exact rational samples
(always including 0); every verdict carries the sample list it relied on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .conormal import conormal_ideal
from .critical import conormal_substitution_locus, sigma_C, sigma_nash_membership, sigma_reg
from .geometry import Stratification, Variety
from .ideal import (
    IdealHandle,
    local_dimension_at_origin,
    locally_contained_at_origin,
)
from .poly import Poly, format_rat, rat
from .polar import (
    GenericLine,
    NotIsolatedCritical,
    betti_isolated,
    pick_generic_line,
    polar_difference,
)

__all__ = [
    "DEFAULT_SAMPLES",
    "FamilyConsistencyError",
    "FamilyProblem",
    "FamilyVerdict",
    "slice_at",
    "per_sample_differences",
    "shared_line",
    "constancy_report",
    "assemble_conclusion",
    "af_verdict",
]

DEFAULT_SAMPLES = ("0", "1", "-1", "1/2", "-1/3")
AF_CLAIM = "a_f holds for (Y_reg, D x {0}) at 0"
NO_CONCLUSION = "no conclusion"


class FamilyConsistencyError(RuntimeError):
    """A sanity property of the family failed (genericity or isolatedness problem)."""


@dataclass
class FamilyProblem:
    """``f`` lives in ``(param, z...)``; ``W`` is stratified in the ``z`` ring."""

    param: str
    f: Poly
    W: Stratification
    component: Sequence = ()
    samples: Sequence = DEFAULT_SAMPLES

    def __post_init__(self):
        self.samples = tuple(rat(a) for a in self.samples)
        if rat(0) not in self.samples:
            raise ValueError("samples must include 0")
        if len(set(self.samples)) != len(self.samples):
            raise ValueError("samples must be distinct")
        if self.param not in self.f.ring:
            raise ValueError(f"parameter {self.param!r} is not a ring variable")
        if self.zring != self.W.ring:
            raise ValueError("stratification ring must be the family ring without the parameter")
        axis = self.f.subs({v: 0 for v in self.zring})
        if not axis.is_zero():
            raise ValueError("f must vanish along the parameter axis")
        self.component = IdealHandle(self.f.ring, list(
            self.component.generators if isinstance(self.component, IdealHandle) else self.component))

    @property
    def ring(self):
        return self.f.ring

    @property
    def zring(self):
        return tuple(v for v in self.f.ring if v != self.param)


def slice_at(P: FamilyProblem, a) -> Poly:
    """``f_a`` as a polynomial in the ``z`` ring."""
    return P.f.subs({P.param: rat(a)}).change_ring(P.zring)


def _check_isolated(P: FamilyProblem, a, fa):
    C = sigma_C(P.W, fa)
    if local_dimension_at_origin(C.closure) > 0:
        raise NotIsolatedCritical(
            f"sample t={format_rat(a)}: critical locus not isolated at 0")


def _polar_strata(P: FamilyProblem):
    return [S for S in P.W.visible_strata()
            if S.dim >= 1 and all(g.constant_term() == 0 for g in S.closure.generators)]


def shared_line(P: FamilyProblem, seed: int = 0, max_retries: int = 20) -> GenericLine:
    """One linear form certified on every sample slice."""
    return pick_generic_line(P.W.strata, [slice_at(P, a) for a in P.samples], seed=seed,
                             max_retries=max_retries)


def per_sample_differences(P: FamilyProblem, a, L) -> dict:
    """Polar differences of ``f_a`` on every visible stratum of positive dimension."""
    fa = slice_at(P, a)
    _check_isolated(P, a, fa)
    return {S.name: polar_difference(S, fa, L) for S in _polar_strata(P)}


@dataclass
class FamilyVerdict:
    samples: tuple
    differences: dict
    constant: bool
    reconstructed: dict = field(default_factory=dict)
    case: str = "none"
    conclusion: str = NO_CONCLUSION
    witnesses: dict = field(default_factory=dict)
    notices: list = field(default_factory=list)
    line: GenericLine | None = None

    @property
    def af_holds(self) -> bool:
        return self.conclusion == AF_CLAIM


def constancy_report(P: FamilyProblem, L=None, seed: int = 0) -> FamilyVerdict:
    """Per-sample differences, their constancy, and reconstructed ``b~_{d-1}``."""
    if L is None:
        L = shared_line(P, seed)
    diffs = {}
    recon = {}
    d = P.W.dim
    for a in P.samples:
        diffs[a] = per_sample_differences(P, a, L)
        rep = betti_isolated(P.W, slice_at(P, a), d - 1, L, check_isolated=False)
        recon[a] = rep.value
    vectors = list(diffs.values())
    constant = all(v == vectors[0] for v in vectors)
    zero = recon[rat(0)]
    bad = [a for a in P.samples if recon[a] > zero]
    if bad:
        raise FamilyConsistencyError(
            "reconstructed Betti number exceeds its value at t=0 at samples "
            + ", ".join(format_rat(a) for a in bad))
    return FamilyVerdict(P.samples, diffs, constant, recon, line=L)


def assemble_conclusion(constant: bool, case_a: bool, case_b: bool) -> tuple:
    """``(case, conclusion)``: an ``a_f`` claim needs constancy and one of the cases."""
    case = "a" if case_a else ("b" if case_b else "none")
    if constant and case != "none":
        return case, AF_CLAIM
    return case, NO_CONCLUSION


def af_verdict(P: FamilyProblem, L=None, seed: int = 0) -> FamilyVerdict:
    """Constancy plus the Nash / conormal case test on the component ``Y``."""
    V = constancy_report(P, L, seed)
    ring = P.ring
    origin = tuple(0 for _ in ring)
    Y = P.component
    if Y.generators:
        Yv = Variety(Y)
    else:
        Yv = Variety(Y, dim=len(ring))
    case_a = False
    if Yv.is_hypersurface() or Yv.is_ambient():
        case_a = sigma_nash_membership(Yv, P.f, origin)
    else:
        V.notices.append("component is not a hypersurface: only the conormal case was tested")
    C = conormal_ideal(Y, Yv.codim, "Y")
    cnr = conormal_substitution_locus(C, P.f)
    case_b = not all(g.constant_term() == 0 for g in cnr.generators)
    V.witnesses["nash_at_origin"] = case_a
    V.witnesses["origin_in_cnr"] = not case_b
    V.case, V.conclusion = assemble_conclusion(V.constant, case_a, case_b)
    if V.conclusion == AF_CLAIM and V.case == "a":
        axis = IdealHandle(ring, [Poly.var(ring, v) for v in P.zring])
        reg = sigma_reg(Yv, P.f)
        V.witnesses["crit_in_axis"] = locally_contained_at_origin(reg.zariski_closure(), axis)
        V.witnesses["betti_nonzero"] = V.reconstructed[rat(0)] != 0
    return V

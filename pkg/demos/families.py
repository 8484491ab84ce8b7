"""Sampled constancy and the a_f verdict for three one-parameter families."""

from stratcrit.family import FamilyProblem, af_verdict
from stratcrit.geometry import Stratification, Stratum, Variety
from stratcrit.ideal import IdealHandle
from stratcrit.poly import parse_poly

W = ("x", "y")
F = ("t", "x", "y")
plane = Stratification(
    [Stratum("plane", IdealHandle(W, []), IdealHandle.unit(W), 2, {-1: 1})],
    Variety(IdealHandle(W, []), dim=2),
)

for src in ("y^2 - x^3 - t*x^2", "x^3 + t*x^2*y + y^3"):
    V = af_verdict(FamilyProblem("t", parse_poly(src, F), plane, (), ("0", "1", "-1")))
    print(f"{src:<22} constant={V.constant} values={sorted(set(V.reconstructed.values()))} "
          f"case={V.case} -> {V.conclusion}")

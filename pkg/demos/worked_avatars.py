"""Critical loci of a linear function on the coordinate cross V(xy).

Run: python demos/worked_avatars.py
"""

from stratcrit.critical import containment_audit, sigma_C, sigma_cnr, sigma_reg
from stratcrit.geometry import Stratification, Stratum, Variety
from stratcrit.ideal import IdealHandle
from stratcrit.poly import parse_poly

R = ("x", "y")


def ideal(*gens):
    return IdealHandle(R, [parse_poly(g, R) for g in gens])


X = Variety(ideal("x*y"))
cross = Stratification([
    Stratum("bx", ideal("y"), ideal("x", "y"), 1, {-1: 1}),
    Stratum("by", ideal("x"), ideal("x", "y"), 1, {-1: 1}),
    Stratum("0", ideal("x", "y"), IdealHandle.unit(R), 0, {0: 1}),
], X)

for src in ("y", "x + y", "(x + y)^2"):
    f = parse_poly(src, R)
    print(f"f = {src}")
    print("  reg :", sigma_reg(X, f))
    print("  cnr :", sigma_cnr(X, f))
    print("  Cbar:", sigma_C(cross, f))
    audit = containment_audit(X, f, cross, [(0, 0), (1, 0)])
    for c in audit.checks:
        print(f"    {c.relation:<22} holds={c.holds} strict={c.strict}")

"""Polar differences two ways, and the Betti numbers they feed.

The polar route intersects a relative polar curve with V(f); the cotangent
route intersects the conormal of a stratum with the graph of df.
"""

from stratcrit.conormal import conormal_ideal, cotangent_multiplicity
from stratcrit.geometry import Stratification, Stratum, Variety
from stratcrit.ideal import IdealHandle
from stratcrit.polar import betti_isolated, milnor_algebra_mu, pick_generic_line, polar_difference
from stratcrit.poly import parse_poly

R = ("x", "y")


def ideal(*gens):
    return IdealHandle(R, [parse_poly(g, R) for g in gens])


cusp = Variety(ideal("y^2 - x^3"))
strat = Stratification([
    Stratum("reg", ideal("y^2 - x^3"), ideal("x", "y"), 1, {-1: 1}),
    Stratum("0", ideal("x", "y"), IdealHandle.unit(R), 0, {0: 1}),
], cusp)

for src in ("x", "y"):
    f = parse_poly(src, R)
    L = pick_generic_line(strat.strata, f, seed=0)
    S = strat["reg"]
    a = polar_difference(S, f, L)
    b = cotangent_multiplicity(conormal_ideal(S.closure, S.codim, S.name), f, (0, 0))
    print(f"f = {src}: line {L.form(R)}, polar {a}, cotangent {b}")
    print("   b~_0 =", betti_isolated(strat, f, 0).value)

plane = Stratification(
    [Stratum("plane", IdealHandle(R, []), IdealHandle.unit(R), 2, {-1: 1})],
    Variety(IdealHandle(R, []), dim=2),
)
f = parse_poly("x^4 + y^5", R)
print("x^4 + y^5: mu =", milnor_algebra_mu(f), " b~_1 =", betti_isolated(plane, f, 1).value)

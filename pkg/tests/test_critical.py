import pytest

from stratcrit.critical import (
    AvatarResult,
    PointNotOnVariety,
    containment_audit,
    sigma_alg_membership,
    sigma_C,
    sigma_C_membership,
    sigma_cnr,
    sigma_nash_membership,
    sigma_rdf,
    sigma_reg,
    sigma_stratified,
)
from stratcrit.geometry import Stratification, Stratum, Variety
from stratcrit.ideal import IdealHandle, LocallyClosedSet, set_equal
from stratcrit.poly import parse_poly

R2 = ("x", "y")
R3 = ("x", "y", "z")


def I(gens, ring=R2):
    return IdealHandle(ring, [parse_poly(g, ring) for g in gens])


def P(s, ring=R2):
    return parse_poly(s, ring)


def closed(gens, ring=R2):
    return LocallyClosedSet.closed(I(gens, ring))


def node():
    X = Variety(I(["x*y"]))
    strata = [
        Stratum("bx", I(["y"]), I(["x", "y"]), 1, {-1: 1}),
        Stratum("by", I(["x"]), I(["x", "y"]), 1, {-1: 1}),
        Stratum("0", I(["x", "y"]), IdealHandle.unit(R2), 0, {0: 1}),
    ]
    return X, Stratification(strata, X)


def Z():
    return Variety(I(["(y - z*x)*(y^2 - x^3)"], R3))


def cusp_cylinder():
    Y = Variety(I(["y^2 - x^3"], R3))
    strata = [
        Stratum("top", I(["y^2 - x^3"], R3), I(["x", "y"], R3), 2, {-1: 1}),
        Stratum("axis", I(["x", "y"], R3), IdealHandle.unit(R3), 1, {0: 1}),
    ]
    return Y, Stratification(strata, Y)


def test_algebraic_membership_on_node():
    X, _ = node()
    f = P("y")
    assert sigma_alg_membership(X, f, (1, 0))
    assert not sigma_alg_membership(X, f, (0, 0))
    assert not sigma_alg_membership(X, f, (0, 1))
    with pytest.raises(PointNotOnVariety):
        sigma_alg_membership(X, f, (1, 1))


def test_regular_loci_on_node():
    X, _ = node()
    reg = sigma_reg(X, P("y"))
    assert set_equal(reg, LocallyClosedSet(I(["y"]), I(["x", "y"])))
    assert reg.zariski_closure() == I(["y"])
    assert sigma_reg(X, P("(x + y)^2")).zariski_closure().is_unit()
    assert set_equal(sigma_rdf(X, P("y")), closed(["y"]))


def test_conormal_loci():
    X, _ = node()
    assert set_equal(sigma_cnr(X, P("y")), closed(["y"]))
    assert sigma_cnr(X, P("x + y")).closure.is_unit()
    cnr = sigma_cnr(Z(), P("y", R3))
    assert set_equal(cnr, closed(["x", "y"], R3))


def test_nash_membership():
    f = P("y", R3)
    assert sigma_nash_membership(Z(), f, (0, 0, 0))
    assert not sigma_nash_membership(Z(), f, (0, 0, 1))
    assert not sigma_alg_membership(Z(), f, (0, 0, 0))
    X, _ = node()
    assert sigma_nash_membership(X, P("y"), (1, 0))
    assert not sigma_nash_membership(X, P("y"), (0, 1))
    with pytest.raises(ValueError):
        sigma_nash_membership(Variety(I(["x", "y"], R3)), f, (0, 0, 0))


def test_topological_loci_on_node():
    _, S = node()
    h = P("x + y")
    C = sigma_C(S, h)
    assert set_equal(C, closed(["x", "y"]))
    assert sigma_C_membership(S, h, (0, 0)) is True
    assert sigma_C_membership(S, h, (1, 0)) is False
    f = P("y")
    assert set_equal(sigma_C(S, f), closed(["y"]))
    assert sigma_C_membership(S, f, (1, 0)) is True
    assert sigma_C_membership(S, f, (0, 0)) is False
    assert sigma_C_membership(S, f, (0, 1)) is False


def test_stratified_loci():
    Y, S = cusp_cylinder()
    pi = P("z", R3)
    assert sigma_stratified(S, pi).closure.is_unit()
    assert set_equal(sigma_rdf(Y, pi), closed(["x", "y"], R3))
    _, N = node()
    assert set_equal(sigma_stratified(N, P("y")), closed(["y"]))


def test_avatar_result_guards():
    with pytest.raises(ValueError):
        AvatarResult("bogus")
    with pytest.raises(ValueError):
        AvatarResult("cnr", LocallyClosedSet(I(["y"]), I(["x", "y"])))


def test_audit_on_node_with_h():
    X, S = node()
    rep = containment_audit(X, P("x + y"), S, points=[(0, 0), (1, 0)])
    assert rep.status == "pass"
    check = rep.check("closure(cnr) <= Cbar")
    assert check.holds and check.strict
    assert rep.check("C <= Cbar at points").holds


def test_audit_on_node_with_y():
    X, S = node()
    rep = containment_audit(X, P("y"), S, points=[(0, 0), (1, 0), (0, 1)])
    assert rep.status == "pass"
    assert rep.check("closure(cnr) <= Cbar").strict is False


def test_audit_on_threefold():
    rep = containment_audit(Z(), P("y", R3), points=[(0, 0, 0), (0, 0, 1)],
                            avatars=["alg", "nash", "cnr"])
    assert rep.status == "pass"
    a = rep.check("alg <= nash at points")
    b = rep.check("nash <= cnr at points")
    assert a.strict and a.witnesses == [(0, 0, 0)]
    assert b.strict and b.witnesses == [(0, 0, 1)]

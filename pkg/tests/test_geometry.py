import pytest
from hypothesis import given, strategies as st

from stratcrit.geometry import (
    CycleTable,
    MissingLinkData,
    Stratification,
    Stratum,
    Variety,
    all_minors,
    default_stratification,
    jacobian_matrix,
    minors_ideal,
    perverse_cycle,
    singular_locus,
    tilde_betti_weight,
)
from stratcrit.ideal import IdealHandle, LocallyClosedSet, set_equal
from stratcrit.poly import parse_poly

R2 = ("x", "y")
R3 = ("x", "y", "z")


def I(gens, ring=R2):
    return IdealHandle(ring, [parse_poly(g, ring) for g in gens])


def P(s, ring=R2):
    return parse_poly(s, ring)


def same_zero_set(A, B):
    return set_equal(LocallyClosedSet.closed(A), LocallyClosedSet.closed(B))


def test_jacobians():
    assert jacobian_matrix([P("x*y")]) == [[P("y"), P("x")]]
    assert jacobian_matrix([P("y^2 - x^3")]) == [[P("-3*x^2"), P("2*y")]]
    J = jacobian_matrix([P("y - z*x", R3), P("y^2 - x^3", R3)])
    assert len(J) == 2 and len(J[0]) == 3


def test_minors():
    assert minors_ideal([[P("y"), P("x")]], 1) == I(["x", "y"])
    assert minors_ideal([[P("x"), P("0")], [P("0"), P("y")]], 2) == I(["x*y"])
    ring = ("x", "z", "w1", "w2", "w3")
    M = [[P(s, ring) for s in ("-z", "1", "-x")], [P(s, ring) for s in ("w1", "w2", "w3")]]
    got = set(all_minors(M, 2))
    want = {P(s, ring) for s in ("-z*w2 - w1", "-z*w3 + x*w1", "w3 + x*w2")}
    assert {g.monic() for g in got} == {g.monic() for g in want}
    with pytest.raises(ValueError):
        minors_ideal([[P("x")]], 2)


def test_singular_loci():
    assert same_zero_set(singular_locus(Variety(I(["x*y"]))), I(["x", "y"]))
    assert same_zero_set(singular_locus(Variety(I(["y^2 - x^3"]))), I(["x", "y"]))
    assert same_zero_set(singular_locus(Variety(I(["y^2 - x^3"], R3))), I(["x", "y"], R3))
    assert singular_locus(Variety(IdealHandle(R3, []), dim=3)).is_unit()


def test_variety_dimensions():
    Z = Variety(I(["(y - z*x)*(y^2 - x^3)"], R3))
    assert (Z.dim, Z.codim) == (2, 1)
    assert Z.is_hypersurface()
    with pytest.raises(ValueError):
        Variety(I(["1"]))


def test_link_weights():
    top = Stratum("top", IdealHandle(R2, []), IdealHandle.unit(R2), 2, {-1: 1})
    assert tilde_betti_weight(top, 1) == 1
    assert tilde_betti_weight(top, 0) == 0
    node_pt = Stratum("0", I(["x", "y"]), IdealHandle.unit(R2), 0, {0: 1})
    assert tilde_betti_weight(node_pt, 0) == 1
    bare = Stratum("bare", I(["x", "y"]), IdealHandle.unit(R2), 0)
    with pytest.raises(MissingLinkData):
        tilde_betti_weight(bare, 0)
    with pytest.raises(ValueError):
        Stratum("bad", I(["x"]), IdealHandle.unit(R2), 1, {-2: 1})


@given(st.integers(0, 6), st.integers(-2, 8))
def test_maximal_weight_is_an_indicator(d, k):
    ring = tuple(f"z{i}" for i in range(max(d, 1)))
    S = Stratum("top", IdealHandle(ring, []), IdealHandle.unit(ring), d, {-1: 1})
    assert tilde_betti_weight(S, k) == (1 if k == d - 1 else 0)


def node_strata():
    X = Variety(I(["x*y"]))
    strata = [
        Stratum("bx", I(["y"]), I(["x", "y"]), 1, {-1: 1}),
        Stratum("by", I(["x"]), I(["x", "y"]), 1, {-1: 1}),
        Stratum("0", I(["x", "y"]), IdealHandle.unit(R2), 0, {0: 1}),
    ]
    return Stratification(strata, X)


def test_stratification_lint_and_visibility():
    S = node_strata()
    assert S.lint() == []
    assert [s.name for s in S.visible_strata()] == ["bx", "by", "0"]
    assert S.dim == 1
    bad = Stratification([Stratum("bx", I(["y"]), IdealHandle.unit(R2), 1, {-1: 1})], Variety(I(["x*y"])))
    assert "strata closures do not cover the ambient variety" in bad.lint()


def test_missing_top_link_defaults_to_empty_link():
    X = Variety(IdealHandle(R2, []), dim=2)
    S = Stratification([Stratum("plane", IdealHandle(R2, []), IdealHandle.unit(R2), 2)], X)
    assert S["plane"].link_betti == {-1: 1}


def test_default_stratification():
    smooth = default_stratification(Variety(IdealHandle(R2, []), dim=2))
    assert [s.name for s in smooth] == ["reg"]
    node = default_stratification(Variety(I(["y^2 - x^3 - x^2"])), {0: 1})
    assert [s.name for s in node] == ["reg", "origin"]
    assert node["origin"].visible


def test_cycle_tables():
    assert CycleTable({"a": 2, "b": 0, "c": 1}).is_perverse_admissible()
    assert not CycleTable({"a": 2, "c": -1}).is_perverse_admissible()
    assert CycleTable({"a": 0}).is_perverse_admissible()
    cyc = perverse_cycle(node_strata(), 0)
    assert cyc.entries == {"bx": -1, "by": -1, "0": -1}
    assert cyc.is_perverse_admissible()

import pytest

from stratcrit.conormal import (
    CotangentRing,
    FunctionVanishesOnComponent,
    NotIsolated,
    conormal_ideal,
    cotangent_multiplicity,
    exceptional_fibre,
    image_ddf_ideal,
    is_w_homogeneous,
    relative_conormal_ideal,
)
from stratcrit.critical import conormal_substitution_locus
from stratcrit.ideal import IdealHandle, LocallyClosedSet, dimension, intersect, set_equal
from stratcrit.polar import milnor_algebra_mu
from stratcrit.poly import parse_poly

R2 = ("x", "y")
T2 = ("x", "y", "w_x", "w_y")


def I(gens, ring=R2):
    return IdealHandle(ring, [parse_poly(g, ring) for g in gens])


def P(s, ring=R2):
    return parse_poly(s, ring)


def test_cotangent_ring_names():
    cot = CotangentRing(R2)
    assert cot.ring == T2
    clash = CotangentRing(("x", "w_x"))
    assert len(set(clash.ring)) == 4


@pytest.mark.parametrize("gens,codim,want", [
    (["y"], 1, ["y", "w_x"]),
    (["x", "y"], 2, ["x", "y"]),
    ([], 0, ["w_x", "w_y"]),
])
def test_simple_conormals(gens, codim, want):
    C = conormal_ideal(I(gens), codim)
    assert C.ideal == I(want, T2)
    assert is_w_homogeneous(C.ideal, C.cot)
    assert dimension(C.ideal) == 2


def test_node_conormal_is_union_of_branch_conormals():
    C = conormal_ideal(I(["x*y"]), 1)
    assert C.ideal == intersect(I(["y", "w_x"], T2), I(["x", "w_y"], T2))
    assert is_w_homogeneous(C.ideal, C.cot)


def test_relative_conormals():
    rc = relative_conormal_ideal(IdealHandle(R2, []), 0, P("x^2 + y^2"))
    assert rc.ideal == I(["y*w_x - x*w_y"], T2)
    assert relative_conormal_ideal(I(["y"]), 1, P("x")).ideal == I(["y"], T2)
    line = relative_conormal_ideal(IdealHandle(("x",), []), 0, parse_poly("x^2", ("x",)))
    assert line.ideal.is_zero()
    with pytest.raises(FunctionVanishesOnComponent):
        relative_conormal_ideal(I(["x*y"]), 1, P("y"))


def test_graph_of_df():
    assert image_ddf_ideal(P("y")) == I(["w_x", "w_y - 1"], T2)
    assert image_ddf_ideal(P("x^3 + y^2")) == I(["w_x - 3*x^2", "w_y - 2*y"], T2)


@pytest.mark.parametrize("f", ["x^3 + y^2", "x^2 + y^2", "x^4 + y^5", "x^3 + y^3", "x^2*y + y^4"])
def test_zero_section_multiplicity_is_milnor_number(f):
    C = conormal_ideal(IdealHandle(R2, []), 0)
    assert cotangent_multiplicity(C, P(f), (0, 0)) == milnor_algebra_mu(P(f))


def test_point_conormal_always_counts_one():
    C = conormal_ideal(I(["x", "y"]), 2)
    for f in ["x^3 + y^2", "x + 2*y", "x*y"]:
        assert cotangent_multiplicity(C, P(f), (0, 0)) == 1


def test_off_conormal_counts_zero():
    C = conormal_ideal(I(["x*y"]), 1)
    assert cotangent_multiplicity(C, P("x + y"), (0, 0)) == 0


def test_non_isolated_is_reported():
    C = conormal_ideal(I(["x*y"]), 1)
    with pytest.raises(NotIsolated):
        cotangent_multiplicity(C, P("y"), (0, 0))


def test_exceptional_fibres():
    amb = conormal_ideal(IdealHandle(R2, []), 0)
    assert exceptional_fibre(amb, P("x^2 + y^2"), (0, 0)).is_full
    cusp = exceptional_fibre(amb, P("x^3 + y^2"), (0, 0))
    assert cusp.is_full and cusp.projective_dimension == 1
    assert exceptional_fibre(amb, P("x + y"), (0, 0)).is_empty


def test_fibre_does_not_depend_on_extension():
    C = conormal_ideal(I(["x*y"]), 1)
    fibres = [exceptional_fibre(C, P(f), (0, 0)).ideal for f in ["y", "y + x*(x*y)", "y + x^2*y"]]
    assert fibres[0] == I(["u_x"], ("u_x", "u_y"))
    assert fibres[0] == fibres[1] == fibres[2]
    loci = [LocallyClosedSet.closed(conormal_substitution_locus(C, P(f))) for f in ["y", "y + x*(x*y)"]]
    assert set_equal(*loci)

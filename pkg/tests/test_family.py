import pytest
from hypothesis import given, strategies as st

from stratcrit.family import (
    AF_CLAIM,
    NO_CONCLUSION,
    FamilyConsistencyError,
    FamilyProblem,
    af_verdict,
    assemble_conclusion,
    constancy_report,
    per_sample_differences,
    shared_line,
    slice_at,
)
from stratcrit.geometry import Stratification, Stratum, Variety
from stratcrit.ideal import IdealHandle
from stratcrit.poly import parse_poly, rat

Z2 = ("x", "y")
F3 = ("t", "x", "y")


def I(gens, ring=Z2):
    return IdealHandle(ring, [parse_poly(g, ring) for g in gens])


def plane():
    X = Variety(IdealHandle(Z2, []), dim=2)
    return Stratification([Stratum("plane", IdealHandle(Z2, []), IdealHandle.unit(Z2), 2, {-1: 1})], X)


def crossing():
    X = Variety(I(["x*y"]))
    return Stratification([
        Stratum("bx", I(["y"]), I(["x", "y"]), 1, {-1: 1}),
        Stratum("by", I(["x"]), I(["x", "y"]), 1, {-1: 1}),
        Stratum("0", I(["x", "y"]), IdealHandle.unit(Z2), 0, {0: 1}),
    ], X)


def family(f, W, component=(), samples=("0", "1", "-1")):
    return FamilyProblem("t", parse_poly(f, F3), W,
                         [parse_poly(g, F3) for g in component], samples)


def test_problem_validation():
    with pytest.raises(ValueError):
        family("x^2 + y^2", plane(), samples=("1", "2"))
    with pytest.raises(ValueError):
        family("x^2 + y^2", plane(), samples=("0", "0"))
    with pytest.raises(ValueError):
        family("t + x^2", plane())


def test_slices():
    P = family("y^2 - x^3 - t*x^2", plane())
    assert slice_at(P, "1/2") == parse_poly("y^2 - x^3 - 1/2*x^2", Z2)


def test_differences_per_sample():
    P = family("x + y + t*x^2", crossing())
    L = shared_line(P)
    for a in ("0", "1"):
        assert per_sample_differences(P, a, L) == {"bx": 0, "by": 0}
    Q = family("y^2 - x^3 - t*x^2", plane(), samples=("0", "1"))
    L = shared_line(Q)
    assert per_sample_differences(Q, "0", L) == {"plane": 2}
    assert per_sample_differences(Q, "1", L) == {"plane": 1}


def test_jump_is_flagged_as_inconsistent():
    # mu drops from 2 at t=0 to 1 elsewhere, which the upper semicontinuity
    # check accepts; the reverse order (mu rising away from 0) is refused.
    P = family("y^2 - x^3 - t*x^2", plane(), samples=("0", "1", "1/2"))
    V = constancy_report(P)
    assert not V.constant
    assert V.reconstructed == {rat(0): 2, rat(1): 1, rat("1/2"): 1}
    Q = family("y^2 - t*x^2 - x^3 + x^2", plane(), samples=("0", "1"))
    with pytest.raises(FamilyConsistencyError):
        constancy_report(Q)


def test_cusp_to_node_has_no_verdict():
    V = af_verdict(family("y^2 - x^3 - t*x^2", plane(), samples=("0", "1", "1/2")))
    assert not V.constant
    assert V.conclusion == NO_CONCLUSION
    assert not V.af_holds


def test_constant_family_case_a():
    V = af_verdict(family("x^3 + t*x^2*y + y^3", plane()))
    assert V.constant
    assert set(V.reconstructed.values()) == {4}
    assert V.case == "a"
    assert V.conclusion == AF_CLAIM
    assert V.witnesses["crit_in_axis"] is True
    assert V.witnesses["betti_nonzero"] is True


def test_crossing_family_case_b():
    V = af_verdict(family("x + y + t*x^2", crossing(), component=["y"]))
    assert V.constant
    assert set(V.reconstructed.values()) == {1}
    assert V.case == "b"
    assert V.af_holds
    assert V.witnesses["origin_in_cnr"] is False


@given(st.booleans(), st.booleans(), st.booleans())
def test_claim_needs_constancy_and_a_case(constant, case_a, case_b):
    case, conclusion = assemble_conclusion(constant, case_a, case_b)
    if conclusion == AF_CLAIM:
        assert constant and (case_a or case_b)
    else:
        assert not constant or not (case_a or case_b)
    assert case == ("a" if case_a else "b" if case_b else "none")

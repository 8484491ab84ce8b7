"""Exact critical loci, polar multiplicities and Milnor-fibre Betti numbers on singular spaces."""

from .poly import GREVLEX, LEX, LOCAL, MonomialOrder, ParseError, Poly, format_poly, parse_poly, rat
from .ideal import (
    INFINITE,
    NEG_INF,
    IdealHandle,
    Limits,
    LocallyClosedSet,
    ResourceLimitError,
    dimension,
    groebner_basis,
    local_multiplicity_at_origin,
    saturation,
    set_equal,
    set_subset,
    standard_basis,
)
from .geometry import Stratification, Stratum, Variety, default_stratification, singular_locus
from .conormal import conormal_ideal, cotangent_multiplicity, exceptional_fibre
from .critical import (
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
from .polar import betti_isolated, icis_betti, milnor_algebra_mu, pick_generic_line, polar_difference
from .family import FamilyProblem, af_verdict, constancy_report

__version__ = "0.1.0"

"""Exact minimal denominators and their laws over F_q[x]."""

__version__ = "0.1.0"

from .denomset import AllMonic, DegreeFiltered, DenomSet, ExplicitList, Irreducibles, Powers, set_parse
from .dist import (
    Distribution,
    VerifyReport,
    continuous_dist,
    discrete_dist,
    expectation,
    verify_farey_regime,
    verify_formulas,
    verify_lacunary,
    verify_qmin_equals,
    verify_same_dist,
)
from .farey import FareyFraction, ball_counts, farey_count, farey_enumerate, separated_ball_count
from .ff import Field, FieldElement, field_from_q, field_make
from .formulas import formula_degdist_monic, formula_lacunary, formula_qmin_monic
from .laurent import TruncTail, TruncVec, expand_fraction, parse_tailvec
from .minden import MinDenResult, deg_min, discrete_minden, q_min
from .polyring import NEG_INF, Poly, format_poly, parse_poly, poly_gcd

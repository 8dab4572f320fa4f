import json
from fractions import Fraction

import pytest

from ffminden.denomset import AllMonic, set_parse
from ffminden.dist import (
    Distribution,
    continuous_dist,
    default_N_list,
    discrete_dist,
    expectation,
    verify_farey_regime,
    verify_formulas,
    verify_lacunary,
    verify_qmin_equals,
    verify_same_dist,
)
from ffminden.errors import BudgetExceeded, ValidationError, WrongStatistic
from ffminden.ff import field_from_q
from ffminden.polyring import enumerate_polys, format_poly, parse_poly


def qmin_table(d):
    return {d.outcome_text(qc): c for qc, c in d.counts.items()}


def test_continuous_examples(F2):
    s = AllMonic(F2)
    assert continuous_dist(F2, 1, 2, s).counts == {0: 1, 1: 2, 2: 1}
    assert continuous_dist(F2, 1, 1, s).counts == {0: 1, 1: 1}
    d = continuous_dist(F2, 1, 2, s, "qmin")
    assert qmin_table(d) == {"1": 1, "x": 1, "x+1": 1, "x^2": 1}
    assert d.total == 4


def test_discrete_examples(F2):
    s = AllMonic(F2)
    assert discrete_dist(F2, 1, parse_poly(F2, "x^2"), s).counts == {0: 1, 1: 2, 2: 1}
    assert discrete_dist(F2, 1, parse_poly(F2, "x^2+x"), s).counts == {0: 1, 1: 2, 2: 1}
    assert discrete_dist(F2, 2, parse_poly(F2, "x^2"), s).total == 16


def test_expectation_examples(F2):
    s = AllMonic(F2)
    assert expectation(continuous_dist(F2, 1, 2, s)) == 1
    assert expectation(continuous_dist(F2, 1, 1, s)) == Fraction(1, 2)
    point = Distribution(F2, 1, 1, "all-monic", "deg", {0: 2}, 1)
    assert expectation(point) == 0
    with pytest.raises(WrongStatistic):
        expectation(continuous_dist(F2, 1, 1, s, "qmin"))


def test_budget_and_validation(F2):
    with pytest.raises(BudgetExceeded):
        continuous_dist(F2, 1, 10, AllMonic(F2), budget=100)
    with pytest.raises(ValidationError):
        continuous_dist(F2, 1, 2, AllMonic(F2), "mean")


def test_default_N_list(F2, F3):
    assert [format_poly(N) for N in default_N_list(F2, 1)] == ["x", "x+1"]
    Ns = default_N_list(F3, 3)
    assert len(Ns) == len(set(Ns)) >= 3 and all(N.deg == 3 for N in Ns)
    assert default_N_list(F3, 3) == Ns


@pytest.mark.parametrize("q,m,n", [(2, 1, 3), (3, 1, 2), (2, 2, 2), (4, 1, 2)])
@pytest.mark.parametrize("spec", ["all-monic", "powers:x+1", "irreducible", "degrees:even"])
def test_laws_sum_and_marginalize(q, m, n, spec):
    F = field_from_q(q)
    s = set_parse(F, spec)
    deg = continuous_dist(F, m, n, s, "deg")
    qmin = continuous_dist(F, m, n, s, "qmin")
    assert sum(deg.counts.values()) == sum(qmin.counts.values()) == q ** (m * n)
    assert qmin.by_degree() == deg.counts
    assert all(c > 0 for c in deg.counts.values())
    if s.contains_one:
        assert max(deg.counts) <= deg.m_S and deg.beyond_bound == 0
    else:
        # only the zero class is pushed past m_S(n)
        assert deg.beyond_bound == 1


def test_parallel_equals_serial(F3):
    s = set_parse(F3, "powers:x+1")
    for stat in ("deg", "qmin"):
        a = continuous_dist(F3, 2, 2, s, stat, workers=1)
        b = continuous_dist(F3, 2, 2, s, stat, workers=3)
        assert a == b
        N = parse_poly(F3, "x^2+2")
        assert discrete_dist(F3, 2, N, s, stat, workers=1) == discrete_dist(F3, 2, N, s, stat, workers=2)


def test_verify_same_dist_examples(F2):
    s = AllMonic(F2)
    Ns = list(enumerate_polys(F2, 2, "deg="))
    r = verify_same_dist(F2, 1, 2, s, Ns)
    assert r.ok and r.verdict == "exact-match"
    assert r.outcomes[0] == {"outcome": 0, "continuous": 1, "discrete": [1, 1, 1, 1]}
    r = verify_same_dist(F2, 1, 3, set_parse(F2, "powers:x"), [parse_poly(F2, "x^3")])
    assert r.ok
    with pytest.raises(ValidationError):
        verify_same_dist(F2, 1, 2, s, [parse_poly(F2, "x^3")])


def test_verify_qmin_equals_reports_ties(F2):
    r = verify_qmin_equals(F2, 1, 2, AllMonic(F2), [parse_poly(F2, "x^2")])
    assert r.flags["discrete_vs_continuous"] == "exact-match"
    assert r.flags["ambiguous_classes"] == 1
    rows = {o["outcome"]: o for o in r.outcomes}
    assert rows["x"] == {"outcome": "x", "continuous": 1, "discrete": [1], "separated": 1}
    # the tail (0,1) has four minimal denominators, so no fraction of x^2 is separated
    assert rows["x^2"]["continuous"] == 1 and rows["x^2"]["separated"] == 0
    assert r.verdict == "mismatch"


def test_verify_qmin_equals_powers(F2):
    r = verify_qmin_equals(F2, 1, 3, set_parse(F2, "powers:x"), [parse_poly(F2, "x^3")])
    assert r.ok
    assert {o["outcome"]: o["continuous"] for o in r.outcomes} == {"1": 1, "x": 1, "x^2": 2, "x^3": 4}


@pytest.mark.parametrize("q,m,n,P", [(2, 1, 3, "x"), (2, 1, 3, "x^2+x+1"), (3, 2, 2, "x"), (2, 2, 3, "x+1")])
def test_verify_lacunary(q, m, n, P):
    F = field_from_q(q)
    r = verify_lacunary(F, m, n, parse_poly(F, P))
    assert r.ok, r.mismatches
    assert r.flags["membership_violations"] == 0


def test_verify_farey_regime(F2):
    r = verify_farey_regime(F2, 1, 2, AllMonic(F2))
    assert r.ok
    assert r.outcomes[1]["continuous"] == 2 and r.outcomes[1]["farey"] == 3
    r = verify_farey_regime(F2, 2, 2, AllMonic(F2))
    assert r.outcomes[1]["continuous"] == 6 and r.outcomes[1]["farey_diff"] == 6
    r = verify_farey_regime(F2, 1, 3, set_parse(F2, "irreducible"))
    assert not r.ok
    assert [m["check"] for m in r.mismatches] == ["f(m_S(n)) = q^(mn)"]


def test_verify_formulas(F3):
    r = verify_formulas(F3, 3)
    assert r.ok
    assert r.flags["degree_formula_mass"] != "1"
    flagged = r.flags["unrequired_discrepancies"]
    assert any(f["law"] == "degree" for f in flagged)
    assert any(f["law"] == "qmin" and f["outcome"] == "1" for f in flagged)


def test_report_json_is_deterministic(F2):
    s = AllMonic(F2)
    a = verify_same_dist(F2, 2, 2, s).to_json(timing=False)
    b = verify_same_dist(F2, 2, 2, s, workers=2).to_json(timing=False)
    assert a == b
    assert json.loads(a)["elapsed_ms"] is None

import itertools

import pytest

from ffminden.denomset import AllMonic, set_parse
from ffminden.errors import BudgetExceeded
from ffminden.farey import (
    FareyFraction,
    ball_count_f,
    ball_counts,
    code_rows,
    farey_count,
    farey_enumerate,
    is_separated,
    separated_ball_count,
    separated_counts,
    tail_code,
)
from ffminden.ff import field_from_q
from ffminden.laurent import ball_key, raw_truncations
from ffminden.polyring import Poly, is_primitive, parse_poly


def test_enumerate_examples(F2, F3):
    assert [str(f) for f in farey_enumerate(F2, 1, 1, AllMonic(F2))] == ["0/1", "1/x", "1/x+1"]
    assert farey_count(F2, 2, 1, AllMonic(F2)) == 7
    assert [str(f) for f in farey_enumerate(F3, 1, 0, AllMonic(F3))] == ["0/1"]
    assert farey_count(F2, 1, -1, AllMonic(F2)) == 0


def test_zero_fraction_needs_one(F2):
    assert farey_count(F2, 1, 0, set_parse(F2, "irreducible")) == 0
    assert farey_count(F2, 1, 1, set_parse(F2, "irreducible")) == 2


@pytest.mark.parametrize("spec", ["all-monic", "powers:x+1", "irreducible", "degrees:even"])
@pytest.mark.parametrize("m", [1, 2])
def test_type_invariants_and_count(F2, spec, m):
    s = set_parse(F2, spec)
    frs = farey_enumerate(F2, m, 3, s)
    assert len(frs) == farey_count(F2, m, 3, s)
    assert len({(f.P, f.Q) for f in frs}) == len(frs)
    for f in frs:
        assert f.Q.is_monic and s.contains(f.Q)
        assert is_primitive(f.P, f.Q)
        assert all(p.is_zero or p.deg < f.Q.deg for p in f.P)


def test_ball_count_examples(F2):
    s = AllMonic(F2)
    assert ball_count_f(F2, 1, 2, s, 1) == 3
    assert ball_count_f(F2, 1, 2, s, 2) == 4
    assert ball_count_f(F2, 1, 2, s, 0) == 1


def test_budget(F2):
    with pytest.raises(BudgetExceeded):
        ball_counts(F2, 1, 12, AllMonic(F2), 12, budget=1000)


def test_separated_examples(F2):
    s = AllMonic(F2)
    x, x1 = parse_poly(F2, "x"), parse_poly(F2, "x+1")
    one = Poly.one(F2)
    assert is_separated(FareyFraction((one,), x), s, 2)
    assert is_separated(FareyFraction((Poly.zero(F2),), one), s, 1)
    assert not is_separated(FareyFraction((one,), x), s, 1)
    assert not is_separated(FareyFraction((one,), x1), s, 1)
    assert separated_ball_count(F2, 1, 2, s, x) == 1
    assert separated_ball_count(F2, 1, 2, s, one) == 1
    assert separated_ball_count(F2, 1, 1, s, x) == 0


def test_codes_match_truncation_order(F3):
    for m, n in [(1, 3), (2, 2)]:
        for code, rows in enumerate(raw_truncations(3, m, n)):
            assert tail_code(3, rows) == code
            assert code_rows(3, m, n, code) == rows


def _brute_keys(F, m, n, s, k):
    return {ball_key(fr.expand(n), n) for fr in farey_enumerate(F, m, k, s)}


@pytest.mark.parametrize("q,m,n", [(2, 1, 4), (3, 1, 3), (2, 2, 2), (4, 1, 2)])
@pytest.mark.parametrize("spec", ["all-monic", "powers:x", "irreducible", "degrees:even"])
def test_ball_counts_against_brute_force(q, m, n, spec):
    F = field_from_q(q)
    s = set_parse(F, spec)
    kmax = s.m_S(n)
    f = ball_counts(F, m, n, s, kmax)
    for k in range(kmax + 1):
        assert f[k] == len(_brute_keys(F, m, n, s, k))
    assert f == sorted(f)
    for k in range(n // 2 + 1):
        assert f[k] == farey_count(F, m, k, s)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2)])
def test_separated_counts_against_predicate(q, n):
    F = field_from_q(q)
    s = AllMonic(F)
    bound = s.m_S(n)
    fast = separated_counts(F, 1, n, s, bound)
    for d in range(bound + 1):
        for Q in s.members(d):
            keys = {fr.code(n) for fr in farey_enumerate(F, 1, d, s) if fr.Q == Q and is_separated(fr, s, n)}
            assert fast[Q.coeffs] == len(keys) == separated_ball_count(F, 1, n, s, Q)


def test_monotone_in_set(F2):
    big, small = AllMonic(F2), set_parse(F2, "powers:x")
    for n in range(1, 5):
        fb = ball_counts(F2, 1, n, big, n)
        fs = ball_counts(F2, 1, n, small, n)
        assert all(b >= a for a, b in zip(fs, fb))
        assert fb[-1] == fs[-1] == 2**n


def test_separated_total_at_most_space(F2):
    for spec in ["all-monic", "powers:x+1", "degrees:even"]:
        s = set_parse(F2, spec)
        for n in range(1, 5):
            sep = separated_counts(F2, 1, n, s, s.m_S(n))
            assert sum(sep.values()) <= 2**n

"""Acceptance criteria, one test each, every comparison an exact integer one.

Each test records a ``PASS``/``FAIL`` line that is echoed in the pytest
terminal summary.  Run the file directly to get only those lines.
"""

from __future__ import annotations

import io
import itertools
import random
import sys
from functools import lru_cache

import pytest

from ffminden.cli import run
from ffminden.denomset import AllMonic, set_parse
from ffminden.dist import (
    continuous_dist,
    default_N_list,
    verify_farey_regime,
    verify_formulas,
    verify_lacunary,
    verify_qmin_equals,
    verify_same_dist,
)
from ffminden.ff import field_from_q
from ffminden.formulas import formula_degdist_monic, formula_lacunary
from ffminden.laurent import ball_key, enumerate_truncations, expand_fraction
from ffminden.minden import deg_min, q_min
from ffminden.polyring import Poly, enumerate_polys, format_poly, is_irreducible, is_primitive, mobius, monic_divisors, poly_gcd

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

BUDGET = 10**9

MATRIX = (
    [(q, 1, n) for q in (2, 3, 4, 5) for n in range(1, 6)]
    + [(2, 2, n) for n in range(1, 5)]
    + [(3, 2, n) for n in range(1, 4)]
    + [(2, 3, n) for n in range(1, 4)]
)


@lru_cache(maxsize=None)
def quadratic(q: int) -> str:
    """First monic irreducible quadratic in canonical order."""
    F = field_from_q(q)
    return format_poly(next(P for P in enumerate_polys(F, 2, "monic=") if is_irreducible(P)))


def set_specs(q: int) -> list[str]:
    return ["all-monic", "powers:x", "powers:x+1", f"powers:{quadratic(q)}", "irreducible", "degrees:even"]


def configs():
    for q, m, n in MATRIX:
        for spec in set_specs(q):
            yield q, m, n, spec


def record(number: int, ok: bool, detail: str) -> str:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


@lru_cache(maxsize=None)
def same_dist_report(q, m, n, spec):
    F = field_from_q(q)
    return verify_same_dist(F, m, n, set_parse(F, spec), default_N_list(F, n), budget=BUDGET)


# 1 --------------------------------------------------------------------------


def criterion_1():
    bad, thin = [], []
    for q, m, n, spec in configs():
        r = same_dist_report(q, m, n, spec)
        Ns = r.context["N_list"]
        if len(set(Ns)) < min(3, (q - 1) * q**n):
            thin.append((q, m, n))
        if not r.ok:
            bad.append((q, m, n, spec))
    ok = not bad and not thin
    detail = (
        f"discrete = continuous degree law on {len(MATRIX) * 6} configs ({len(bad)} mismatches); "
        f">=3 distinct N each, except q=2, n=1 where R_=n has only 2 elements and both are used"
    )
    return ok, detail


# 2 --------------------------------------------------------------------------


def criterion_2():
    bad, two_way_bad, ambiguous = [], [], 0
    for q, m, n, spec in configs():
        F = field_from_q(q)
        r = verify_qmin_equals(F, m, n, set_parse(F, spec), default_N_list(F, n), budget=BUDGET)
        if not r.ok:
            bad.append((q, m, n, spec))
        if r.flags["discrete_vs_continuous"] != "exact-match":
            two_way_bad.append((q, m, n, spec))
        ambiguous += r.flags["ambiguous_classes"] > 0
    ok = not bad
    detail = (
        f"three-way per-Q equality failed on {len(bad)}/{len(MATRIX) * 6} configs "
        f"(discrete = continuous held on {len(MATRIX) * 6 - len(two_way_bad)}; "
        f"{ambiguous} configs have classes with several minimal denominators)"
    )
    return ok, detail


# 3 --------------------------------------------------------------------------


def criterion_3():
    bad, count = [], 0
    for q in (2, 3):
        F = field_from_q(q)
        for base in ("x", "x+1", quadratic(q)):
            P = Poly.x(F) if base == "x" else set_parse(F, f"powers:{base}").base
            for m in (1, 2):
                for n in range(1, 6):
                    count += 1
                    r = verify_lacunary(F, m, n, P, budget=BUDGET)
                    if not r.ok or formula_lacunary(q, m, n, P).mass != 1:
                        bad.append((q, base, m, n))
    return not bad, f"lacunary law = continuous = discrete on {count} configs, masses sum to 1 ({len(bad)} failures)"


# 4 --------------------------------------------------------------------------


def criterion_4():
    bad = []
    for q in (2, 3, 4, 5):
        F = field_from_q(q)
        law = formula_degdist_monic(q, 1)
        oracle = continuous_dist(F, 1, 1, AllMonic(F))
        if {k: v.count for k, v in law.masses.items()} != oracle.counts or oracle.counts != {0: 1, 1: q - 1}:
            bad.append(q)
    return not bad, f"n = 1 law {{1/q, (q-1)/q}} reproduced for q in 2..5 ({len(bad)} failures)"


# 5 --------------------------------------------------------------------------


def criterion_5():
    regime_bad, full_bad = [], []
    for q, m, n, spec in configs():
        F = field_from_q(q)
        r = verify_farey_regime(F, m, n, set_parse(F, spec), budget=BUDGET)
        for mm in r.mismatches:
            if mm["check"] == "f(m_S(n)) = q^(mn)":
                full_bad.append((q, m, n, spec))
            else:
                regime_bad.append((q, m, n, spec, mm["check"]))
    ok = not regime_bad and not full_bad
    kinds = sorted({c[3] for c in full_bad})
    detail = (
        f"count(k) = #F_k - #F_(k-1) and f(k) = #F_k for 2k <= n: {len(regime_bad)} failures; "
        f"f(m_S(n)) = q^(mn): {len(full_bad)} failures (sets: {', '.join(kinds) or 'none'})"
    )
    return ok, detail


# 6 --------------------------------------------------------------------------


def criterion_6():
    bad, flagged = [], 0
    for q in (2, 3):
        F = field_from_q(q)
        for n in range(1, 5):
            r = verify_formulas(F, n, budget=BUDGET)
            if not r.ok:
                bad.append((q, n))
            flagged += len(r.flags["unrequired_discrepancies"])
    return not bad, f"formula reports ran on q in {{2,3}}, n <= 4; required agreement held ({len(bad)} failures), {flagged} other discrepancies flagged"


# 7 --------------------------------------------------------------------------


def criterion_7():
    bad = []
    for q, m, n, spec in configs():
        f = same_dist_report(q, m, n, spec).flags
        if any(e != f["expectation_continuous"] for e in f["expectation_discrete"]):
            bad.append((q, m, n, spec))
    return not bad, f"E[d_N] = continuous expectation on every matrix config ({len(bad)} failures)"


# 8 --------------------------------------------------------------------------


def _cli(argv):
    out = io.StringIO()
    code = run(argv, stdout=out, stderr=io.StringIO())
    return code, out.getvalue()


def criterion_8():
    rng = random.Random(20240601)
    picks = rng.sample(list(configs()), 10)
    bad = []
    for q, m, n, spec in picks:
        base = ["verify", "same-dist", "-q", str(q), "-m", str(m), "-n", str(n), "--set", spec, "--budget", str(BUDGET)]
        serial = _cli(base)
        parallel = _cli(base + ["--workers", "2"])
        d_base = ["dist", "continuous", "-q", str(q), "-m", str(m), "-n", str(n), "--set", spec, "--stat", "qmin", "--budget", str(BUDGET)]
        if serial != parallel or _cli(d_base) != _cli(d_base + ["--workers", "3"]):
            bad.append((q, m, n, spec))
    return not bad, f"JSON byte-identical serial vs parallel on 10 random configs ({len(bad)} differ)"


# 9 --------------------------------------------------------------------------


def _ultrametric_and_balls() -> list[str]:
    errs = []
    F = field_from_q(2)
    for m, n in [(1, 3), (2, 3)]:
        vecs = list(enumerate_truncations(F, m, n))
        for u, v in itertools.product(vecs, repeat=2):
            d = (u - v).norm_exp
            if (u + v).norm_exp > max(u.norm_exp, v.norm_exp):
                errs.append("ultrametric")
            if u.norm_exp != v.norm_exp and (u + v).norm_exp != max(u.norm_exp, v.norm_exp):
                errs.append("ultrametric equality")
            for j in range(n + 1):
                if (ball_key(u, j) == ball_key(v, j)) != (d <= -(j + 1)):
                    errs.append("ball dichotomy")
    return errs


def _gcd_mobius() -> list[str]:
    errs = []
    for q in (2, 3):
        F = field_from_q(q)
        for d in range(5):
            for Q in enumerate_polys(F, d, "monic="):
                divs, _ = monic_divisors(Q)
                if sum(mobius(M) for M in divs) != (1 if d == 0 else 0):
                    errs.append(f"mobius sum {Q}")
        polys = list(enumerate_polys(F, 3, "deg<"))
        for a, b in itertools.product(polys, repeat=2):
            if a.is_zero and b.is_zero:
                continue
            g = poly_gcd([a, b])
            if not (g.is_monic and g.divides(a) and g.divides(b)):
                errs.append(f"gcd {a},{b}")
    return errs


def _witness_and_monotonicity() -> list[str]:
    errs = []
    for q, m, n in [(2, 1, 4), (3, 1, 3), (2, 2, 2)]:
        F = field_from_q(q)
        for spec in set_specs(q):
            s = set_parse(F, spec)
            for alpha in enumerate_truncations(F, m, n):
                r = q_min(alpha, n, s)
                if not (
                    s.contains(r.Q)
                    and is_primitive(r.P, r.Q)
                    and all(p.is_zero or p.deg < r.Q.deg for p in r.P)
                    and expand_fraction(r.P, r.Q, n).raw == alpha.raw
                ):
                    errs.append(f"witness {spec} {alpha}")
                if m == 1 and q == 2:
                    degs = [deg_min(alpha.truncate(k), k, s).degree for k in range(1, n + 1)]
                    if degs != sorted(degs):
                        errs.append(f"monotone in n {spec} {alpha}")
            if spec == "powers:x":
                big = AllMonic(F)
                for alpha in enumerate_truncations(F, m, n):
                    if deg_min(alpha, n, big).degree > deg_min(alpha, n, s).degree:
                        errs.append(f"monotone in S {alpha}")
    return errs


def _translation_invariance() -> list[str]:
    from ffminden.laurent import split_integer_fractional

    errs = []
    F = field_from_q(3)
    s = AllMonic(F)
    shift = Poly(F, [1, 0, 2, 1])
    for g in enumerate_polys(F, 2, "monic="):
        for f in enumerate_polys(F, 3, "deg<"):
            _, t1 = split_integer_fractional(f, g, 3)
            _, t2 = split_integer_fractional(f + shift * g, g, 3)
            if t1 != t2:
                errs.append(f"tail of {f}/{g}")
    return errs


def criterion_9():
    suites = {
        "ultrametric/ball dichotomy": _ultrametric_and_balls(),
        "gcd/Mobius": _gcd_mobius(),
        "witness validity + monotonicity in n and S": _witness_and_monotonicity(),
        "translation invariance": _translation_invariance(),
    }
    bad = [k for k, v in suites.items() if v]
    return not bad, f"property suites: {len(suites) - len(bad)}/{len(suites)} pass" + (f" (failing: {', '.join(bad)})" if bad else "")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    record(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for i, crit in enumerate(CRITERIA, start=1):
        ok, detail = crit()
        record(i, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)

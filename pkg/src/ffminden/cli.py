"""``ffminden`` command line.

Exit codes: 0 success or exact match, 1 verification mismatch, 2 usage or
validation error.  Every output ends with a reproducibility stanza.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence

from . import __version__
from .denomset import DEFAULT_CAP, Powers, set_parse
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
from .errors import FFMindenError, ParseError, ValidationError
from .farey import ball_counts, farey_count, farey_enumerate, separated_counts
from .ff import Field, field_from_q, field_make, is_prime, prime_power
from .laurent import DEFAULT_BUDGET, parse_tailvec
from .minden import MinDenResult, deg_min, discrete_minden, q_min
from .polyring import Poly, _split_list, format_poly, parse_poly

GRAMMAR = """\
polynomial: terms like 3*x^2, x, 2, joined by + (extension coefficients in t, e.g. (t+1)*x^2),
            or a coefficient list [a0,a1,...]
set:        all-monic | powers:<poly> | irreducible | degrees:<even|odd|d1,d2,...|a..b>
            | list:<poly>;<poly>;...
tail:       [a1,...,an] or [..];[..] for m > 1
field:      -q <prime power>, or -q <p> --ext <e>[:<modulus in t>]"""

ORDERING = (
    "polynomials ordered by degree then coefficients from the top down; "
    "tails and numerators ordered with the first coordinate most significant"
)


class UsageError(ValidationError):
    pass


# argument plumbing ------------------------------------------------------------


def _common(sub: argparse.ArgumentParser, *, need_n: bool = True) -> None:
    g = sub.add_argument_group("configuration")
    g.add_argument("-q", type=int, required=True, help="field size (or characteristic with --ext)")
    g.add_argument("--ext", help="extension degree, optionally with modulus: e[:poly in t]")
    g.add_argument("-m", type=int, default=1, help="dimension (default 1)")
    g.add_argument("-n", type=int, required=need_n, help="precision / degree of N")
    g.add_argument("--set", default="all-monic", help="denominator set (default all-monic)")
    g.add_argument("--N", action="append", default=None, help="N polynomial; repeat for lists")
    g.add_argument("--stat", choices=("deg", "qmin"), default="deg")
    g.add_argument("--out", choices=("json", "csv", "pretty"), default="json")
    g.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest degree scanned")
    g.add_argument("--timing", action="store_true", help="report elapsed_ms (breaks byte-identity)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ffminden",
        description="Minimal denominators over F_q[x] with restricted denominator sets.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("--version", action="version", version=f"ffminden {__version__}")
    subs = ap.add_subparsers(dest="cmd", required=True)

    p = subs.add_parser("dist", help="continuous or discrete law")
    p.add_argument("kind", choices=("continuous", "discrete"))
    _common(p, need_n=False)

    p = subs.add_parser("verify", help="exhaustive theorem checks")
    p.add_argument("check", choices=("same-dist", "qmin-equals", "lacunary", "farey-regime", "formulas"))
    _common(p)
    p.add_argument("--qmin-formula", choices=("printed", "corrected"), default="printed", help="D term of the Q_min formula: as printed (N) or corrected (M)")

    p = subs.add_parser("farey", help="Farey sets and ball counts")
    p.add_argument("what", choices=("list", "count", "balls", "separated"))
    _common(p, need_n=False)
    p.add_argument("-k", type=int, help="denominator degree bound (list, count)")

    p = subs.add_parser("minden", help="minimal denominator of one point")
    _common(p, need_n=False)
    p.add_argument("--tail", help="truncated tail, e.g. [0,1]")
    p.add_argument("--a", help="numerator vector a, comma separated (with --N)")

    p = subs.add_parser("expect", help="exact expectation of the minimal degree")
    _common(p, need_n=False)
    return ap


def _field(args) -> Field:
    if args.ext is None:
        return field_from_q(args.q)
    e_text, _, mod_text = args.ext.partition(":")
    try:
        e = int(e_text)
    except ValueError:
        raise UsageError(f"bad --ext value {args.ext!r}; expected e or e:<poly in t>") from None
    p = args.q
    if p > 1 and not is_prime(p):
        # accept -q 4 --ext 2 as well as -q 2 --ext 2
        p, e0 = prime_power(p)
        if e0 != e:
            raise UsageError(f"-q {args.q} is not compatible with --ext {e}")
    if mod_text:
        fp = field_make(p)
        mod = parse_poly(fp, mod_text.replace("t", "x")).coeffs
        return field_make(p, e, mod)
    return field_make(p, e)


def _validate(args) -> None:
    if args.m < 1:
        raise UsageError("-m must be >= 1")
    if args.n is not None and args.n < 1:
        raise UsageError("-n must be >= 1")
    if args.budget < 1:
        raise UsageError("--budget must be >= 1")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")


def _Ns(field: Field, args, n: int | None) -> list[Poly] | None:
    if not args.N:
        return None
    out = [parse_poly(field, t) for t in args.N]
    if n is not None:
        for N in out:
            if N.deg != n:
                raise UsageError(f"--N {format_poly(N)} has degree {N.deg}, expected n = {n}")
    return out


def _n_from(args, Ns: list[Poly] | None) -> int:
    if args.n is not None:
        return args.n
    if Ns:
        return Ns[0].deg
    raise UsageError("-n is required (or give --N)")


def _stanza(args, field: Field) -> dict:
    cfg: dict[str, Any] = {"command": args.cmd}
    for key in ("kind", "check", "what"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    cfg.update({"q": field.q, "p": field.p, "e": field.e})
    if field.modulus is not None:
        cfg["modulus"] = format_poly(Poly._raw(field_make(field.p), tuple(field.modulus))).replace("x", "t")
    for key in ("m", "n", "set", "N", "stat", "budget", "cap", "tail", "a", "k", "qmin_formula"):
        if hasattr(args, key) and getattr(args, key) is not None:
            cfg[key] = getattr(args, key)
    # workers are deliberately not echoed: output must not depend on them
    return {"version": f"ffminden {__version__}", "config": cfg, "ordering": ORDERING}


# rendering ----------------------------------------------------------------------


def _emit(args, payload: dict, rows: list[dict], field: Field, title: str) -> str:
    stanza = _stanza(args, field)
    if args.out == "json":
        payload = dict(payload)
        payload["reproducibility"] = stanza
        return json.dumps(payload, indent=2) + "\n"
    if args.out == "csv":
        buf = io.StringIO()
        cols: list[str] = []
        for r in rows:
            for c in r:
                if c not in cols:
                    cols.append(c)
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: _cell(r.get(c)) for c in cols})
        buf.write(_stanza_lines(stanza))
        return buf.getvalue()
    lines = [title]
    if rows:
        cols = list(dict.fromkeys(c for r in rows for c in r))
        table = [[str(c) for c in cols]] + [[_cell(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
        for row in table:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    for key in ("verdict", "expectation", "result"):
        if key in payload:
            lines.append(f"{key}: {_cell(payload[key])}")
    return "\n".join(lines) + "\n" + _stanza_lines(stanza)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _stanza_lines(stanza: dict) -> str:
    cfg = " ".join(f"{k}={_cell(v)}" for k, v in stanza["config"].items())
    return f"# {stanza['version']}\n# config: {cfg}\n# ordering: {stanza['ordering']}\n"


def _dist_rows(d: Distribution) -> list[dict]:
    return d.to_dict()["outcomes"]


def _report_rows(r: VerifyReport) -> list[dict]:
    return [dict(o) for o in r.outcomes]


def _minden_dict(res: MinDenResult) -> dict:
    out = {
        "degree": res.degree,
        "Q": format_poly(res.Q),
        "P": [format_poly(p) for p in res.P],
        "m_S": res.m_S,
        "exceeds_bound": res.exceeds_bound,
    }
    if res.audited:
        out["unique"] = res.unique
        out["candidates"] = [format_poly(c) for c in res.candidates]
    return out


# commands -----------------------------------------------------------------------


def _cmd_dist(args, field: Field) -> tuple[str, int]:
    s = set_parse(field, args.set)
    Ns = _Ns(field, args, args.n)
    if args.kind == "continuous":
        d = continuous_dist(field, args.m, _n_from(args, None), s, args.stat, args.workers, args.budget, args.cap)
    else:
        if not Ns:
            if args.n is None:
                raise UsageError("discrete law needs --N or -n")
            Ns = [Poly.x(field, args.n)]
        d = discrete_dist(field, args.m, Ns[0], s, args.stat, args.workers, args.budget, args.cap)
    payload = d.to_dict()
    return _emit(args, payload, _dist_rows(d), field, f"{args.kind} law of {args.stat} over {d.total} classes"), 0


def _cmd_expect(args, field: Field) -> tuple[str, int]:
    s = set_parse(field, args.set)
    Ns = _Ns(field, args, args.n)
    n = _n_from(args, Ns)
    if Ns:
        d = discrete_dist(field, args.m, Ns[0], s, "deg", args.workers, args.budget, args.cap)
    else:
        d = continuous_dist(field, args.m, n, s, "deg", args.workers, args.budget, args.cap)
    e = expectation(d)
    payload = {"context": d.context(), "expectation": str(e), "numerator": sum(k * c for k, c in d.counts.items()), "total": d.total}
    return _emit(args, payload, [], field, "expected minimal degree"), 0


def _cmd_verify(args, field: Field) -> tuple[str, int]:
    n = args.n
    Ns = _Ns(field, args, n)
    w, b, cap = args.workers, args.budget, args.cap
    if args.check == "same-dist":
        r = verify_same_dist(field, args.m, n, set_parse(field, args.set), Ns, w, b, cap)
    elif args.check == "qmin-equals":
        r = verify_qmin_equals(field, args.m, n, set_parse(field, args.set), Ns, w, b, cap)
    elif args.check == "lacunary":
        s = set_parse(field, args.set)
        if not isinstance(s, Powers):
            raise UsageError(f"lacunary check needs --set powers:<poly>, got {args.set!r}")
        r = verify_lacunary(field, args.m, n, s.base, w, b)
    elif args.check == "farey-regime":
        r = verify_farey_regime(field, args.m, n, set_parse(field, args.set), w, b, cap)
    else:
        if args.m != 1:
            raise UsageError("formula reports are for m = 1")
        r = verify_formulas(field, n, w, b)
        r.flags["selected_qmin_variant"] = args.qmin_formula
    payload = r.to_dict(timing=args.timing)
    text = _emit(args, payload, _report_rows(r), field, f"verify {args.check}")
    return text, 0 if r.ok else 1


def _cmd_farey(args, field: Field) -> tuple[str, int]:
    s = set_parse(field, args.set)
    ctx = {"q": field.q, "m": args.m, "set": s.spec()}
    if args.what in ("list", "count"):
        k = args.k if args.k is not None else args.n
        if k is None:
            raise UsageError("farey list/count needs -k")
        ctx["k"] = k
        if args.what == "count":
            c = farey_count(field, args.m, k, s, args.budget)
            return _emit(args, {"context": ctx, "result": c}, [{"k": k, "count": c}], field, "Farey count"), 0
        frs = farey_enumerate(field, args.m, k, s, args.budget)
        rows = [{"fraction": str(fr), "Q": format_poly(fr.Q), "deg_Q": fr.Q.deg} for fr in frs]
        return _emit(args, {"context": ctx, "fractions": [r["fraction"] for r in rows]}, rows, field, "Farey fractions"), 0
    n = _n_from(args, None)
    ctx["n"] = n
    bound = s.m_S(n, args.cap)
    budget = max(args.budget, field.q ** ((args.m + 1) * bound)) if bound <= 2 * n else args.budget
    if args.what == "balls":
        f = ball_counts(field, args.m, n, s, bound, budget)
        rows = [{"k": k, "f": v, "total": field.q ** (args.m * n)} for k, v in enumerate(f)]
        return _emit(args, {"context": ctx, "m_S": bound, "f": f}, rows, field, "ball counts f(k)"), 0
    sep = separated_counts(field, args.m, n, s, bound, budget)
    rows = [{"Q": format_poly(Poly._raw(field, qc)), "f_Q": v} for qc, v in sep.items()]
    return _emit(args, {"context": ctx, "m_S": bound, "separated": {r["Q"]: r["f_Q"] for r in rows}}, rows, field, "separated ball counts f_Q"), 0


def _cmd_minden(args, field: Field) -> tuple[str, int]:
    s = set_parse(field, args.set)
    if args.tail is not None:
        alpha = parse_tailvec(field, args.tail)
        n = args.n if args.n is not None else alpha.n
        res = (q_min if args.stat == "qmin" else deg_min)(alpha, n, s, args.cap)
    elif args.a is not None:
        Ns = _Ns(field, args, None)
        if not Ns:
            raise UsageError("--a needs --N")
        a = [parse_poly(field, t) for t in _split_list(args.a.replace(" ", ""))]
        res = discrete_minden(a, Ns[0], s, args.stat, args.cap)
        n = Ns[0].deg
    else:
        raise UsageError("minden needs --tail or --a with --N")
    ctx = {"q": field.q, "m": len(res.P), "n": n, "set": s.spec()}
    payload = {"context": ctx, "result": _minden_dict(res)}
    rows = [{k: v for k, v in _minden_dict(res).items()}]
    return _emit(args, payload, rows, field, "minimal denominator"), 0


COMMANDS = {"dist": _cmd_dist, "verify": _cmd_verify, "farey": _cmd_farey, "minden": _cmd_minden, "expect": _cmd_expect}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        field = _field(args)
        text, code = COMMANDS[args.cmd](args, field)
    except ParseError as exc:
        print(f"ffminden: error: {exc}\n{GRAMMAR}", file=stderr)
        return 2
    except (FFMindenError, ValueError) as exc:
        print(f"ffminden: error: {exc}", file=stderr)
        return 2
    stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

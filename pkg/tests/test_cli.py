import io
import json
import subprocess
import sys

import pytest

from ffminden.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_verify_same_dist_json():
    code, out, _ = call("verify", "same-dist", "-q", "2", "-m", "1", "-n", "2", "--set", "all-monic")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "exact-match"
    assert list(doc)[-1] == "reproducibility"
    assert doc["reproducibility"]["config"]["set"] == "all-monic"


def test_dist_table():
    code, out, _ = call("dist", "continuous", "-q", "2", "-m", "1", "-n", "3", "--set", "powers:x", "--stat", "qmin")
    assert code == 0
    rows = {o["outcome"]: o["probability"] for o in json.loads(out)["outcomes"]}
    assert rows == {"1": "1/8", "x": "1/8", "x^2": "2/8", "x^3": "4/8"}


def test_minden_tail():
    code, out, _ = call("minden", "--tail", "[0,1]", "-q", "2", "-n", "2", "--set", "all-monic")
    assert code == 0
    res = json.loads(out)["result"]
    assert (res["degree"], res["Q"], res["P"]) == (2, "x^2", ["1"])


def test_minden_discrete_csv():
    code, out, _ = call("minden", "--a", "x", "--N", "x^2", "-q", "2", "--out", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("degree,Q,P")
    assert lines[1].startswith("1,x,")
    assert lines[-1].startswith("# ordering:")


def test_pretty_ends_with_stanza():
    code, out, _ = call("expect", "-q", "2", "-n", "2", "--out", "pretty")
    assert code == 0
    assert "expectation: 1" in out
    assert out.splitlines()[-3].startswith("# ffminden ")


def test_mismatch_exit_code():
    code, out, _ = call("verify", "qmin-equals", "-q", "2", "-n", "2")
    assert code == 1
    assert json.loads(out)["verdict"] == "mismatch"


def test_usage_errors():
    code, _, err = call("dist", "continuous", "-q", "2", "-n", "2", "--set", "primes")
    assert code == 2 and "primes" in err and "all-monic |" in err
    code, _, err = call("minden", "--tail", "[0,1]", "-q", "6", "-n", "2")
    assert code == 2
    code, _, _ = call("dist", "sideways", "-q", "2")
    assert code == 2
    code, _, err = call("dist", "continuous", "-q", "2", "-n", "30")
    assert code == 2 and "--budget" in err
    code, _, err = call("verify", "lacunary", "-q", "2", "-n", "2", "--set", "all-monic")
    assert code == 2 and "powers" in err


def test_budget_override():
    code, _, _ = call("dist", "continuous", "-q", "2", "-n", "12", "--budget", "100000", "--out", "csv")
    assert code == 0


def test_extension_field_spellings():
    a = call("expect", "-q", "4", "-n", "2")[1]
    b = call("expect", "-q", "2", "--ext", "2", "-n", "2")[1]
    c = call("expect", "-q", "2", "--ext", "2:t^2+t+1", "-n", "2")[1]
    strip = lambda s: json.loads(s)["expectation"]
    assert strip(a) == strip(b) == strip(c) == "9/8"
    code, _, err = call("expect", "-q", "2", "--ext", "2:t^2+1", "-n", "2")
    assert code == 2 and "reducible" in err


def test_farey_subcommands():
    code, out, _ = call("farey", "list", "-q", "2", "-k", "1")
    assert json.loads(out)["fractions"] == ["0/1", "1/x", "1/x+1"]
    assert json.loads(call("farey", "count", "-q", "2", "-m", "2", "-k", "1")[1])["result"] == 7
    assert json.loads(call("farey", "balls", "-q", "2", "-n", "2")[1])["f"] == [1, 3, 4]
    sep = json.loads(call("farey", "separated", "-q", "2", "-n", "1")[1])["separated"]
    assert sep == {"1": 1, "x": 0, "x+1": 0}


def test_workers_do_not_change_output():
    base = ["verify", "same-dist", "-q", "3", "-m", "2", "-n", "2", "--set", "powers:x+1"]
    assert call(*base)[1] == call(*base, "--workers", "2")[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ffminden", "verify", "farey-regime", "-q", "2", "-n", "2", "--out", "pretty"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "verdict: exact-match" in proc.stdout

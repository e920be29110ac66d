"""The command-line surface: exit codes, output formats, determinism."""

import json

import pytest
from mpmath import mpf

from talex import cli
from talex.errors import InexactDivision, NonConvergence
from talex.pretzel import RootRecord
from talex.scalars import Scalar


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- usage errors (exit 64) -------------------------------------------------


@pytest.mark.parametrize("argv", (
    ("bogus",),
    ("roots", "--n", "0", "--m", "1.2,0.4"),
    ("roots", "--n", "2", "--m", "0,0"),
    ("roots", "--n", "2", "--m", "notanumber"),
    ("roots", "--n", "2"),
    ("delta", "--n", "2", "--m", "1.2,0.4", "--precision-bits", "16"),
    ("verify", "--n-range", "5..2"),
))
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == cli.EXIT_USAGE


def test_root_index_out_of_range(capsys):
    code, _, err = run(capsys, "delta", "--n", "2", "--m", "1.2,0.4",
                       "--root-index", "999")
    assert code == cli.EXIT_USAGE
    assert "out of range" in err


# -- roots ------------------------------------------------------------------


def test_roots_text_and_csv(capsys):
    code, out, _ = run(capsys, "roots", "--n", "2", "--m", "1.2,0.4")
    assert code == 0
    assert "s_one" in out and "residual" in out
    code, out, _ = run(capsys, "roots", "--n", "2", "--m", "1.2,0.4",
                       "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "index,re,im,residual,flags"


def test_roots_json_schema(capsys):
    code, out, _ = run(capsys, "roots", "--n", "1", "--m", "0.9,-0.2",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 1 and data["m"] == ["0.9", "-0.2"]
    assert {"index", "s", "residual", "flags"} <= set(data["roots"][0])


# -- delta ------------------------------------------------------------------


def test_delta_json_schema_and_determinism(capsys):
    argv = ("delta", "--n", "2", "--m", "1.2,0.4", "--method", "theorem",
            "--format", "json")
    code, out1, _ = run(capsys, *argv)
    assert code == 0
    data = json.loads(out1)
    assert set(data) >= {"n", "m", "s", "flags", "method", "unit",
                         "coefficients", "root_index"}
    assert data["unit"] == {"sign": 1, "shift": 0}
    assert data["coefficients"][0] == {
        "exp": 0, "re": data["coefficients"][0]["re"],
        "im": data["coefficients"][0]["im"]}
    exps = [c["exp"] for c in data["coefficients"]]
    assert exps[0] == 0 and exps[-1] == 14
    code, out2, _ = run(capsys, *argv)
    assert out1 == out2  # byte-identical across runs


def test_delta_all_methods_agree(capsys):
    code, out, _ = run(capsys, "delta", "--n", "1", "--m", "1.2,0.4",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert set(data["methods"]) == {"fox", "theorem", "prop32"}
    assert mpf(data["max_pairwise_deviation"]) < mpf("1e-40")
    assert data["fibered_consistent"] is True
    assert data["genus"] == 3


def test_delta_degenerate_root_index(capsys):
    code, out, err = run(capsys, "roots", "--n", "2", "--m", "1.2,0.4",
                         "--format", "json")
    flagged = next(r["index"] for r in json.loads(out)["roots"] if r["flags"])
    code, _, err = run(capsys, "delta", "--n", "2", "--m", "1.2,0.4",
                       "--root-index", str(flagged))
    assert code == cli.EXIT_DEGENERATE
    assert "degenerate" in err


def test_precision_env_var(capsys, monkeypatch):
    monkeypatch.setenv(cli.ENV_PRECISION, "128")
    parser = cli.build_parser()
    args = parser.parse_args(["delta", "--n", "2", "--m", "1.2,0.4"])
    assert args.precision_bits == 128


def test_delta_csv(capsys):
    code, out, _ = run(capsys, "delta", "--n", "1", "--m", "1.2,0.4",
                       "--method", "theorem", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "exp,re,im"


# -- injected failure paths (exit 2, 3, 5) ----------------------------------


def all_flagged_roots(n, m, prec=256, **kw):
    rec = RootRecord(Scalar(1, prec), mpf(0), frozenset({"s_one"}))
    return [rec, rec]


def test_no_nondegenerate_root(capsys, monkeypatch):
    monkeypatch.setattr(cli, "solve_s_roots", all_flagged_roots)
    code, _, err = run(capsys, "delta", "--n", "2", "--m", "1.2,0.4")
    assert code == cli.EXIT_NO_ROOT
    assert "no nondegenerate root" in err


def test_nonconvergence_exit(capsys, monkeypatch):
    def explode(*a, **kw):
        raise NonConvergence("did not settle")
    monkeypatch.setattr(cli, "solve_s_roots", explode)
    code, _, err = run(capsys, "roots", "--n", "2", "--m", "1.2,0.4")
    assert code == cli.EXIT_NONCONVERGENCE
    assert "non-convergence" in err


def test_inexact_division_exit(capsys, monkeypatch):
    def explode(*a, **kw):
        raise InexactDivision("remainder too large")
    monkeypatch.setattr(cli, "wada_polynomial", explode)
    code, _, err = run(capsys, "delta", "--n", "2", "--m", "1.2,0.4",
                       "--method", "fox")
    assert code == cli.EXIT_INEXACT
    assert "inexact division" in err


# -- verify -----------------------------------------------------------------


def test_verify_small_range_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n-range", "2..2",
                       "--m", "1.2,0.4")
    assert code == 0
    assert "all passed" in out
    assert "FAIL" not in out


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--n-range", "2..2",
                       "--m", "1.2,0.4", "--inject-perturbation", "1e-3")
    assert code == cli.EXIT_VERIFY_FAILED
    assert "FAILURES present" in out
    assert "failing:" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--n-range", "1..1",
                       "--m", "0.9,-0.2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["all_passed"] is True
    entry = data["entries"][0]
    assert {"n", "m", "root_index", "s", "flags", "residual", "checks",
            "passed"} <= set(entry)
    assert all(c["passed"] for c in entry["checks"])

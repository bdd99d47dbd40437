from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from tvlab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, parse_poly
from tvlab.intpoly import IntPolynomial

DATA = Path(__file__).resolve().parent.parent / "data"
LINE = str(DATA / "line.json")
T = IntPolynomial.T()


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_parse_poly():
    assert parse_poly("T^2 - T - 1") == T ** 2 - T - 1
    assert parse_poly("(T-1)^3") == (T - 1) ** 3
    with pytest.raises(Exception):
        parse_poly("T/2")


def test_scan_csv_and_sidecar(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    rc, stdout, _ = run(capsys, "scan", "--variety", LINE, "--prime", "7", "--max-order", "12",
                        "--max-p-level", "1", "--precision", "12", "--out", str(out))
    assert rc == EXIT_OK
    rows = out.read_text().strip().split("\n")
    summary = json.loads(out.with_suffix(".json").read_text())
    assert len(rows) - 1 == summary["scanned"]
    assert summary["members"] == ["1/6,5/6", "5/6,1/6"]
    assert json.loads(stdout)["scanned"] == summary["scanned"]


def test_scan_json(capsys):
    rc, stdout, _ = run(capsys, "scan", "--variety", LINE, "--prime", "5", "--max-order", "8",
                        "--format", "json", "--workers", "2")
    assert rc == EXIT_OK and json.loads(stdout)["prime"] == 5


def test_distance(capsys):
    rc, stdout, _ = run(capsys, "distance", "--variety", LINE, "--point", "2/3,2/3", "--prime", "7")
    d = json.loads(stdout)
    assert rc == EXIT_OK and d["kind"] == "val" and d["value"] == "1"
    rc, _, err = run(capsys, "distance", "--variety", LINE, "--point", "1/3", "--prime", "7")
    assert rc == EXIT_USAGE and "coordinates" in err


def test_mattuck(capsys):
    rc, stdout, _ = run(capsys, "mattuck", "--prime", "5", "--max-order", "30")
    assert rc == EXIT_OK and json.loads(stdout)["gap"] == "1/4"


def test_boxall(capsys):
    rc, stdout, _ = run(capsys, "boxall", "--module", "9", "--action", "[[[4]]]", "--point", "1", "--oracle")
    d = json.loads(stdout)
    assert rc == EXIT_OK and d["construction"]["x"] == [3]
    rc, _, _ = run(capsys, "boxall", "--module", "9", "--action", "[[[2]]]", "--point", "1")
    assert rc == EXIT_USAGE
    rc, _, _ = run(capsys, "boxall", "--module", "9", "--action", str(DATA / "empty_generators.json"), "--point", "1")
    assert rc == EXIT_USAGE


def test_zcore(capsys):
    rc, stdout, _ = run(capsys, "zcore", "--subscheme", str(DATA / "mu3.json"), "--poly", "T^2 - T - 1")
    d = json.loads(stdout)
    assert rc == EXIT_OK and d["ambient"] == 2 and d["component_count"] == 9
    rc, _, _ = run(capsys, "zcore", "--subscheme", str(DATA / "mu3.json"), "--poly", "T^2 - T")
    assert rc == EXIT_USAGE


def test_polyid(capsys):
    rc, stdout, _ = run(capsys, "polyid", "--target", "T - 1", "--gen", "(T - 1)^3", "--gen", "T^3 - 1")
    assert rc == EXIT_OK and json.loads(stdout)["multiplier"]["c"] == 3
    rc, stdout, _ = run(capsys, "polyid", "--tame", "4", "--congruence", "4")
    d = json.loads(stdout)
    assert d["tame"]["claimed"] == 16 and d["tame"]["minimal"] == 8
    assert d["congruence"]["quotient"] == str(T + 3)
    rc, _, _ = run(capsys, "polyid")
    assert rc == EXIT_USAGE


def test_frobcheck(capsys):
    rc, stdout, _ = run(capsys, "frobcheck", "--field", "p=5", "--curve", "a4=1,a6=0", "--degree", "3")
    d = json.loads(stdout)
    assert rc == EXIT_OK and d["count"] == 4
    rc, stdout, _ = run(capsys, "frobcheck", "--field", "p=3,f=2", "--degree", "2")
    assert rc == EXIT_OK and all(r["ok"] for r in json.loads(stdout)["gm"])
    rc, _, _ = run(capsys, "frobcheck", "--field", "p=5", "--curve", "a4=0,a6=0")
    assert rc == EXIT_USAGE


def test_habegger(capsys):
    rc, stdout, _ = run(capsys, "habegger", "--prime", "3", "--n-max", "4")
    assert rc == EXIT_OK and stdout.splitlines()[0] == "n,exponent,v_exact,v_tower,digits_agree"
    rc, _, _ = run(capsys, "habegger", "--prime", "2")
    assert rc == EXIT_USAGE


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "scan", "--prime", "7")[0] == EXIT_USAGE
    assert run(capsys, "scan", "--variety", "{not json", "--prime", "7", "--max-order", "5")[0] == EXIT_USAGE


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tvlab", "mattuck", "--prime", "3", "--max-order", "9"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == EXIT_OK and json.loads(r.stdout)["gap"] == "1/2"


@pytest.mark.slow
def test_verify_all_quick(capsys, tmp_path):
    out = tmp_path / "summary.json"
    rc, _, err = run(capsys, "verify-all", "--quick", "--out", str(out))
    summary = json.loads(out.read_text())
    assert rc == EXIT_OK and summary["passed"]
    assert len(summary["criteria"]) == 8 and err.count("[PASS]") == 8

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from thetadesigns.cli import main, parse_norms

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def validator(name: str):
    docs = [json.loads(path.read_text()) for path in SCHEMAS.glob("*.json")]
    registry = Registry().with_resources((d["$id"], Resource.from_contents(d)) for d in docs)
    schema = json.loads((SCHEMAS / name).read_text())
    return Draft202012Validator(schema, registry=registry).validate


def test_parse_norms():
    grid = [1, 2, 3, 4, 5, 6]
    assert parse_norms(["2..4"], grid) == [2, 3, 4]
    assert parse_norms(["1..6", "mod:1,2"], grid) == [1, 3, 5]
    assert parse_norms(["7/4", "15/4"], None) == [pytest.approx(1.75), pytest.approx(3.75)]


def test_strength_example(capsys):
    code, out, _ = run(capsys, "strength", "--family", "cubic", "--n", "7", "--norms", "1..48")
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()[2:]]
    fives = [int(r[0]) for r in rows if r[2] == "5"]
    assert fives == [3, 11, 12, 19, 27, 35, 43, 44, 48]
    assert {r[2] for r in rows if int(r[0]) not in fives} == {"3"}


def test_scan_example(capsys):
    code, out, _ = run(capsys, "scan", "--form", "Th3^7*De8", "--max", "1200", "--expect", "4^a(8b+3)")
    assert code == 0 and out.rstrip().endswith("PASS")


def test_verify_design_example(capsys):
    code, out, _ = run(capsys, "verify-design", "--lattice", "Z:4", "--norm", "2", "--max-degree", "8")
    assert code == 0
    assert "strength 5 (exact)" in out and "failing degrees: 6" in out


def test_scan_failure_exits_one(capsys):
    code, _, _ = run(capsys, "scan", "--form", "Th3^7*De8", "--max", "100", "--expect", "4^a(8b+5)")
    assert code == 1


def test_domain_error_exits_one(capsys):
    code, _, err = run(capsys, "verify-design", "--lattice", "Z:0", "--norm", "2")
    assert code == 1 and err.startswith("error:")


@pytest.mark.parametrize("argv", [["bogus"], ["strength", "--no-such-flag"], ["scan"]])
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("theorem", ["cubic", "witt", "even", "long_shadow", "odd24"])
def test_theorem_scripts_exit_zero(theorem, capsys):
    code, out, _ = run(capsys, "--cutoff", "200", "strength", "--theorem", theorem, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    validator("report.schema.json")(doc)
    validator("theorem.schema.json")(doc["body"])
    assert doc["cutoff"] == 200 and doc["body"]["pass"]


def test_json_schemas(capsys):
    _, out, _ = run(capsys, "--format", "json", "scan", "--form", "Th3^7*De8", "--max", "300",
                    "--expect", "4^a(8b+3)")
    doc = json.loads(out)
    validator("report.schema.json")(doc)
    validator("scan.schema.json")(doc["body"])
    assert doc["cutoff"] == 300 == doc["body"]["cutoff"]

    _, out, _ = run(capsys, "--format", "json", "strength", "--family", "cubic", "--n", "7", "--shadow",
                    "--norms", "7/4..39/4")
    doc = json.loads(out)
    validator("strength.schema.json")(doc["body"])
    assert [s["norm"] for s in doc["body"]["shells"]] == ["7/4", "15/4", "23/4", "31/4", "39/4"]

    _, out, _ = run(capsys, "--format", "json", "verify-design", "--lattice", "E8", "--norm", "2")
    doc = json.loads(out)
    validator("verify-design.schema.json")(doc["body"])
    assert doc["body"]["verdict"]["strength"] == "7.5"


COMMANDS = [
    ["theta", "--form", "Sh(Th3^5)", "--cutoff", "20"],
    ["shells", "--lattice", "Witt:12", "--norms", "1..6"],
    ["strength", "--family", "odd24", "--h", "22", "--case", "se", "--norms", "1..10"],
    ["tau", "--max", "30", "--inject", "5=0"],
    ["root-systems", "--classify", "6"],
    ["certify-growth", "--family", "cubic", "--n", "100", "--target", "90"],
    ["catalog", "--section", "long_shadow"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_json_is_byte_identical_across_runs(argv):
    cmd = [sys.executable, "-m", "thetadesigns", "--format", "json", *argv]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    validator("report.schema.json")(json.loads(first.stdout))


def test_growth_figures(capsys):
    code, out, _ = run(capsys, "certify-growth", "--family", "cubic", "--n", "408", "--target", "1200")
    assert code == 0 and "certified" in out
    code, out, _ = run(capsys, "certify-growth", "--family", "shadow", "--n", "426", "--target", "600")
    assert code == 0 and "certified" in out


def test_triple_command(capsys):
    assert run(capsys, "root-systems", "--triple", "O24", "24A1", "O24")[0] == 0
    assert run(capsys, "root-systems", "--triple", "O24", "24A1", "24A1")[0] == 1

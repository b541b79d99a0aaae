from __future__ import annotations

import json
from pathlib import Path

import pytest

from cicalc import cli
from cicalc.errors import (
    GenericityFailure,
    InconclusiveCohomology,
    InconclusiveFit,
    TheoremViolation,
    WindowTooSmall,
)


def run(tmp_path, *argv, sub="out"):
    out = tmp_path / sub
    code = cli.main(list(argv) + ["--out", str(out)])
    return code, out


def report(out: Path, command: str) -> dict:
    return json.loads((out / f"{command}.json").read_text())


def test_psi_on_m1(tmp_path, capsys):
    code, out = run(tmp_path, "psi", "--fixture", "a1-m1-m")
    assert code == 0
    res = report(out, "psi")["result"]
    assert res["r"] == 0 and res["r0"] == 0 and res["r1"] == 0
    csv = (out / "ext_table.csv").read_bytes()
    assert b"\r" not in csv and csv.startswith(b"i\\n,1,2")
    assert json.loads(capsys.readouterr().out)["result"]["r"] == 0


def test_equivalences_all_true(tmp_path):
    code, out = run(tmp_path, "equivalences", "--fixture", "a1-m1-x")
    assert code == 0
    res = report(out, "equivalences")["result"]
    assert res["agree"] and set(res["conditions"].values()) == {True}


def test_sweep_on_free_module(tmp_path):
    code, out = run(tmp_path, "reg-sweep", "--fixture", "a1-free-m")
    assert code == 0
    regs = report(out, "reg-sweep")["result"]["reg"]
    assert len(regs) == 7 and set(regs[1:]) == {"-inf"}


@pytest.mark.parametrize(
    "command, name",
    [
        ("resolve", "a2-k-m"),
        ("ext-table", "a1-m1-mx"),
        ("variety", "a2-m2-m"),
        ("artin-rees", "a1-m1-m"),
        ("approx", "a2-m2-m"),
        ("reduce-cx", "a2-k-m"),
        ("regularity", "a2-m2-m"),
        ("ratliff-rush", "a2-m2-m"),
        ("superficial", "a2-m2-m"),
        ("h0-bound", "a3-free-m"),
    ],
)
def test_commands_succeed(tmp_path, command, name):
    code, out = run(tmp_path, command, "--fixture", name, "--imax", "5", "--nmax", "5")
    assert code == 0
    rep = report(out, command)
    assert rep["provenance"]["command"] == command and rep["provenance"]["p"] == 101
    assert "violation" not in rep["result"]


def test_input_file(tmp_path):
    src = Path(__file__).resolve().parents[1] / "fixtures" / "a1-m1-x.cic"
    code, out = run(tmp_path, "psi", "--input", str(src))
    assert code == 0 and report(out, "psi")["result"]["r"] == "-inf"


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.cic"
    bad.write_text("[ring]\nvars = x, z\nrelations = z^^2\n")
    code, _ = run(tmp_path, "psi", "--input", str(bad))
    assert code == 2
    assert "line 3, column 15" in capsys.readouterr().err


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as info:
        cli.main(["psi", "--fixture", "nope"])
    assert info.value.code == 2
    code, _ = run(tmp_path, "psi", "--input", str(tmp_path / "missing.cic"))
    assert code == 2


def test_low_complexity_is_an_error(tmp_path):
    code, _ = run(tmp_path, "reduce-cx", "--fixture", "a1-m1-m")
    assert code == 1


@pytest.mark.parametrize(
    "exc, code",
    [
        (InconclusiveFit("short"), 3),
        (GenericityFailure("unlucky", seeds=[0]), 4),
        (TheoremViolation("bad"), 5),
        (InconclusiveCohomology("no limit"), 6),
        (WindowTooSmall("small"), 7),
    ],
)
def test_exit_codes(tmp_path, monkeypatch, exc, code):
    def boom(ctx):
        raise exc

    monkeypatch.setitem(cli.HANDLERS, "psi", boom)
    assert run(tmp_path, "psi", "--fixture", "a1-m1-m")[0] == code


def test_violation_is_written_then_reported(tmp_path, monkeypatch):
    monkeypatch.setitem(cli.HANDLERS, "psi", lambda ctx: {"violation": "forced"})
    code, out = run(tmp_path, "psi", "--fixture", "a1-m1-m")
    assert code == 5
    assert report(out, "psi")["result"]["violation"] == "forced"


def test_seed_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("CICALC_SEED", "7")
    _, out = run(tmp_path, "superficial", "--fixture", "a2-m2-m", sub="a")
    assert report(out, "superficial")["provenance"]["seed"] == 7
    _, out = run(tmp_path, "superficial", "--fixture", "a2-m2-m", "--seed", "3", sub="b")
    assert report(out, "superficial")["provenance"]["seed"] == 3


def test_outputs_are_byte_identical(tmp_path):
    _, a = run(tmp_path, "artin-rees", "--fixture", "a2-m2-m", "--nmax", "5", sub="a")
    _, b = run(tmp_path, "artin-rees", "--fixture", "a2-m2-m", "--nmax", "5", sub="b")
    assert (a / "artin-rees.json").read_bytes() == (b / "artin-rees.json").read_bytes()


def test_fixture_listing(capsys):
    assert cli.main(["fixture"]) == 0
    names = capsys.readouterr().out.split()
    assert "a1-m1-m" in names and len(names) == 15
    assert cli.main(["fixture", "a1-m1-m"]) == 0
    assert capsys.readouterr().out.startswith("[ring]\n")

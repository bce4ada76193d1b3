import csv
import io
import json

import pytest
from fractions import Fraction

from hopflap.verify import MCKEAN_ROW

from hopflap.cli import main
from hopflap.green import GreenVariant, green_apply
from hopflap.spectrum import Section, random_section


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = text.split("\r\n")
    assert lines[0].startswith("# toolkit=hopflap ")
    return list(csv.DictReader(io.StringIO("\r\n".join(lines[1:]))))


def test_spectrum_rows(capsys):
    code, out, _ = run(capsys, "spectrum", "--k", "1", "--max-m", "2")
    assert code == 0
    rows = csv_rows(out)
    got = [(r["M"], r["l"], r["N"], r["eigenvalue"], r["multiplicity"]) for r in rows]
    assert got == [("0", "1/2", "2", "2", "2"), ("1", "3/2", "4", "14", "4"), ("2", "5/2", "6", "34", "6")]


def test_trace_mckean_block(capsys):
    code, out, _ = run(capsys, "trace", "--k", "0", "--t", "0.1", "--order", "5", "--format", "json")
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert "header" in lines[0]
    coeffs = [(r["numerator"], r["denominator"]) for r in lines[1:] if r["section"] == "coefficient"]
    assert [Fraction(n, d) for n, d in coeffs] == list(MCKEAN_ROW)


def test_ck_json(capsys):
    code, out, _ = run(capsys, "ck", "--k-max", "4", "--format", "json")
    rows = [json.loads(x) for x in out.splitlines()[1:]]
    assert code == 0 and [r["k"] for r in rows] == [1, 2, 3, 4]
    assert all(r["bounds_ok"] for r in rows)
    assert rows[3]["closed"] == pytest.approx(0.22741127776, abs=1e-10)


def test_green_eval_singular_point_is_an_error_row(capsys):
    code, out, _ = run(capsys, "green-eval", "--k", "1", "--point", "0,0,0", "--point", "0,0,1.5")
    rows = csv_rows(out)
    assert code == 0
    assert rows[0]["error"] and not rows[0]["re"]
    assert float(rows[1]["abs"]) == pytest.approx(0.31916074191, abs=1e-10)


def test_green_apply(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(random_section(2, 3, 5).to_json())
    code, out, _ = run(capsys, "green-apply", str(path), "--variant", "massless", "--format", "json")
    assert code == 0
    back = Section.from_json(out)
    assert back.allclose(green_apply(GreenVariant.MASSLESS, random_section(2, 3, 5)))


def test_usage_errors(capsys):
    assert run(capsys, "spectrum", "--max-m", "-1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "green-eval", "--k", "0", "--point", "0,0,1")[0] == 2
    assert run(capsys, "spectrum", "--grid", "4x4")[0] == 2


def test_io_errors(tmp_path, capsys):
    assert run(capsys, "spectrum", "--out", str(tmp_path / "missing" / "x.csv"))[0] == 3
    assert run(capsys, "green-apply", str(tmp_path / "nope.json"))[0] == 3


def test_output_is_bit_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(capsys, "trace", "--k", "2", "--t", "0.05", "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_header_digest_tracks_config(capsys):
    h1 = run(capsys, "spectrum", "--k", "1")[1].split("\r\n")[0]
    h2 = run(capsys, "spectrum", "--k", "2")[1].split("\r\n")[0]
    assert h1.split()[3] != h2.split()[3]


def test_audit_command(capsys):
    code, out, _ = run(capsys, "audit", "--ks", "1", "--sections", "3", "--max-m", "6", "--format", "json")
    rows = [json.loads(x) for x in out.splitlines()[1:]]
    assert code == 0 and rows and all(r["slack"] >= 0 for r in rows)


def test_verify_wigner(capsys):
    code, out, _ = run(capsys, "verify", "wigner")
    rows = [json.loads(x) for x in out.splitlines()[1:]]
    assert code == 0 and rows and all(r["pass"] for r in rows)

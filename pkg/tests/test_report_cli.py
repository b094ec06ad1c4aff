from __future__ import annotations

import csv
import io
import json
import random

import pytest

from homolog import checks
from homolog.asymptotics import AsymptoticsReport, Complexity, Curvature
from homolog.checks import CheckResult, EvidenceRow, Workspace
from homolog.cli import main
from homolog.corpus import parse_corpus
from homolog.report import emit_report, exit_code, render, report_dict

from .test_checks import SMALL

GOOD = SMALL.split('[ring]\nname = "broken"')[0]


def result(check, instance, status, rows=()):
    return CheckResult(check, instance, 6, status, tuple(rows), 12.5, ())


PASS_ROW = EvidenceRow(0, 1, 2, True, "s")
FAIL_ROW = EvidenceRow(3, 9, 2, False, "s")
OPEN_ROW = EvidenceRow(None, "?", "1", None, "s")


@pytest.mark.parametrize(
    "statuses, code",
    [
        (["pass", "pass"], 0),
        (["pass", "fail"], 1),
        (["inconclusive", "pass"], 2),
        (["inconclusive", "fail"], 1),
        ([], 0),
    ],
)
def test_exit_codes(statuses, code):
    assert exit_code([result("C", f"i{j}", s) for j, s in enumerate(statuses)]) == code


def test_json_layout_and_counts():
    rs = [result("B", "r2", "pass", [PASS_ROW]), result("A", "r2", "fail", [PASS_ROW, FAIL_ROW]), result("Z", "r1", "inconclusive", [OPEN_ROW])]
    d = report_dict(rs, "c.toml", 6)
    assert list(d)[:4] == ["version", "corpus", "depth", "counts"]
    assert d["counts"] == {"pass": 1, "fail": 1, "inconclusive": 1}
    assert [(r["instance"], r["check"]) for r in d["results"]] == [("r1", "Z"), ("r2", "A"), ("r2", "B")]
    failing = d["results"][1]
    assert failing["first_violation"] == {"n": 3, "lhs": 9, "rhs": 2, "relation": "<=", "holds": False, "subject": "s"}
    assert set(failing["evidence"][0]) >= {"n", "lhs", "rhs"}
    assert failing["ms"] == 12.5


def test_ordering_is_input_independent():
    rs = [result(c, i, "pass", [PASS_ROW]) for c in "ABC" for i in ("x", "y")]
    shuffled = rs[:]
    random.Random(1).shuffle(shuffled)
    for fmt in ("json", "csv", "text"):
        assert render(rs, fmt, timing=False) == render(shuffled, fmt, timing=False)


def test_csv_and_text():
    rs = [result("A", "r", "fail", [PASS_ROW, FAIL_ROW]), result("B", "r", "pass")]
    rows = list(csv.DictReader(io.StringIO(render(rs, "csv"))))
    assert [r["n"] for r in rows] == ["0", "3", ""]
    assert rows[1]["holds"] == "False"
    text = render(rs, "text", corpus="c", depth=6)
    assert "first violation n=3 s: 9 <= 2" in text
    assert text.rstrip().endswith("pass=1 fail=1 inconclusive=0")
    with pytest.raises(ValueError):
        render(rs, "xml")


def test_emit_to_path(tmp_path):
    out = tmp_path / "r.json"
    assert emit_report([result("A", "r", "pass")], "json", str(out), corpus="c", depth=6, timing=False) == 0
    assert json.loads(out.read_text())["results"][0]["ms"] == 0


# ---------------------------------------------------------------- command line


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(GOOD, encoding="utf-8")
    return str(path)


def test_check_all_pass_and_byte_identical(corpus_file, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["check", "--corpus", corpus_file, "--catalog", "LEM-5-1,THM-4-3,CHAR-CI", "--depth", "6", "--no-timing"]
    assert main(args + ["--report", str(a)]) == 0
    assert main(args + ["--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    d = json.loads(a.read_text())
    assert d["counts"] == {"pass": 6, "fail": 0, "inconclusive": 0}
    assert "pass=6" in capsys.readouterr().err


def test_check_parallel_matches_serial(corpus_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["check", "--corpus", corpus_file, "--catalog", "THM-4-3,COR-5-4", "--no-timing"]
    assert main(args + ["--report", str(a)]) == 0
    assert main(args + ["--report", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_check_fault_injection_exits_one(corpus_file, tmp_path, monkeypatch):
    original = Workspace.seq

    def corrupted(self, kind, a, b=None, depth=None):
        values = original(self, kind, a, b, depth)
        return values[:2] + (values[2] + 500,) + values[3:] if kind == "betti" and len(values) > 2 else values

    monkeypatch.setattr(Workspace, "seq", corrupted)
    out = tmp_path / "r.json"
    assert main(["check", "--corpus", corpus_file, "--catalog", "LEM-5-1", "--report", str(out)]) == 1
    d = json.loads(out.read_text())
    failing = [r for r in d["results"] if r["status"] == "fail"]
    assert failing and failing[0]["first_violation"]["holds"] is False


def test_check_estimate_only_exits_two(corpus_file, tmp_path, monkeypatch):
    def estimate_only(values):
        return AsymptoticsReport(Complexity("at_least", 2), Curvature("estimate", 1.4, (4, 6)), None, 0, "")

    monkeypatch.setattr(checks, "analyze", estimate_only)
    out = tmp_path / "r.json"
    assert main(["check", "--corpus", corpus_file, "--catalog", "CHAR-CI", "--report", str(out)]) == 2
    d = json.loads(out.read_text())
    assert all("inconclusive: estimator" in r["diagnostics"] for r in d["results"])


def test_check_with_broken_ring_and_overrides(tmp_path, capsys):
    path = tmp_path / "c.toml"
    path.write_text(SMALL, encoding="utf-8")
    code = main(["check", "--corpus", str(path), "--catalog", "THM-4-3", "--depth-for", "THM-4-3=5", "--format", "text", "--no-timing"])
    out = capsys.readouterr().out
    assert code == 2
    assert "INCONCLUSIVE broken" in out


def test_check_instance_filter_and_csv(corpus_file, capsys):
    assert main(["check", "--corpus", corpus_file, "--catalog", "THM-4-3", "--instance", "ci", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert {r["instance"] for r in rows} == {"ci"}


def test_compute_text_and_json(capsys):
    assert main(["compute", "--corpus", "builtin:paper-examples", "--ring", "m2zero-b2", "--module", "E", "--depth", "5"]) == 0
    out = capsys.readouterr().out
    assert "module E: length 3, mu 2, type 1" in out
    assert main(["compute", "--corpus", "builtin:paper-examples", "--ring", "ci-x2-y2", "--module", "k", "--depth", "6", "--betti", "--pairs", "k,Rx", "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["betti"]["values"] == [1, 2, 3, 4, 5, 6, 7]
    assert d["betti"]["asymptotics"]["cx"]["value"] == "2"
    assert "bass" not in d
    assert len(d["pairs"]["tor_len"]["values"]) == 7


def test_compute_unknown_ring():
    with pytest.raises(SystemExit, match="no ring named"):
        main(["compute", "--corpus", "builtin:paper-examples", "--ring", "nope"])


def test_analyze_seq(tmp_path, capsys):
    path = tmp_path / "s.txt"
    path.write_text("\n".join(str(2 ** (n + 1) - 1) for n in range(10)) + "\n")
    assert main(["analyze-seq", str(path)]) == 0
    out = capsys.readouterr().out
    assert "cx inf" in out and "curv 2 (exact)" in out
    assert main(["analyze-seq", str(path), "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["exact"] is True
    path.write_text("1\n2\nthree\n")
    assert main(["analyze-seq", str(path)]) == 1


def test_corpus_builtin_round_trip(tmp_path, capsys):
    assert main(["corpus", "builtin", "paper-examples"]) == 0
    text = capsys.readouterr().out
    assert len(parse_corpus(text)) >= 10
    path = tmp_path / "pe.toml"
    path.write_text(text)
    assert main(["corpus", "list", str(path)]) == 0
    assert "sq-ideal-b2" in capsys.readouterr().out
    assert main(["corpus", "builtin", "nope"]) == 1


def test_bad_corpus_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    path.write_text('[ring]\nname = "R"\nchar = 7\nvars = ["x"]\nideal = ["x^"]\n')
    assert main(["check", "--corpus", str(path)]) == 1
    assert "line 5" in capsys.readouterr().err


def test_catalog_listing(capsys):
    assert main(["catalog"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 26

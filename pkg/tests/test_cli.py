"""CLI surface: commands, exit codes, report files."""

import json

import pytest

from groupoid_workbench.cli import main
from groupoid_workbench.corpus import builtin_corpus


@pytest.fixture
def doc_file(tmp_path):
    doc = builtin_corpus(seed=0)[0]  # pair2-zgraded-counting
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc.raw), encoding="utf-8")
    return path


class TestValidate:
    def test_valid_document(self, doc_file, capsys):
        assert main(["validate", str(doc_file)]) == 0
        out = capsys.readouterr().out
        assert "ok: pair2-zgraded-counting" in out
        assert "arrows: 4" in out

    def test_invalid_document(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        raw = builtin_corpus(seed=0)[0].raw
        raw = dict(raw, haar={"rho": {"1": -1.0, "2": 1.0}})
        bad.write_text(json.dumps(raw), encoding="utf-8")
        assert main(["validate", str(bad)]) == 2
        assert "Nonpositive Haar weight" in capsys.readouterr().out

    def test_missing_file(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "absent.json")]) == 2


class TestNorms:
    def test_norms_output(self, doc_file, capsys):
        assert main(["norms", str(doc_file), "--fn", "point_mass"]) == 0
        out = capsys.readouterr().out
        assert "I-norm" in out and "sandwich" in out and "OK" in out

    def test_unknown_function(self, doc_file, capsys):
        assert main(["norms", str(doc_file), "--fn", "ghost"]) == 2
        assert "unknown function" in capsys.readouterr().out

    def test_worked_example_values(self, tmp_path, capsys):
        # delta at (1,2) with rho = (1,4): I-norm 4, C*-norm 2
        raw = {
            "name": "worked",
            "groupoid": {"builtin": "pair", "params": {"n": 2}},
            "haar": {"rho": {"1": 1.0, "2": 4.0}},
            "group": {"free_abelian": {"rank": 1}},
            "cocycle": {"(1,1)": [0], "(1,2)": [-1], "(2,1)": [1], "(2,2)": [0]},
            "functions": {"d12": {"(1,2)": [1.0, 0.0]}},
        }
        path = tmp_path / "worked.json"
        path.write_text(json.dumps(raw), encoding="utf-8")
        assert main(["norms", str(path), "--fn", "d12"]) == 0
        out = capsys.readouterr().out
        assert "I-norm:            4.0" in out
        assert "C*-norm:           2.0" in out

    def test_zero_function_all_zero(self, tmp_path, capsys):
        raw = dict(builtin_corpus(seed=0)[0].raw)
        raw["functions"] = {"zero": {}}
        path = tmp_path / "z.json"
        path.write_text(json.dumps(raw), encoding="utf-8")
        assert main(["norms", str(path), "--fn", "zero"]) == 0
        out = capsys.readouterr().out
        assert out.count("0.0") >= 5


class TestVerify:
    def test_single_document(self, doc_file, capsys, tmp_path):
        report_path = tmp_path / "report.json"
        code = main(["verify", str(doc_file), "--suite", "haar", "--seed", "3", "--json", str(report_path)])
        assert code == 0
        report = json.loads(report_path.read_text(encoding="utf-8"))
        assert report["summary"]["failed"] == 0
        assert report["seed"] == 3
        assert all(c["property"] for c in report["checks"])

    def test_report_bytes_stable(self, doc_file, tmp_path, capsys):
        p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
        main(["verify", str(doc_file), "--suite", "norms", "--seed", "11", "--json", str(p1)])
        main(["verify", str(doc_file), "--suite", "norms", "--seed", "11", "--json", str(p2)])
        assert p1.read_bytes() == p2.read_bytes()

    def test_requires_exactly_one_source(self, doc_file, capsys):
        assert main(["verify"]) == 2
        assert main(["verify", str(doc_file), "--corpus"]) == 2

    def test_count_override(self, doc_file, capsys):
        assert main(["verify", str(doc_file), "--suite", "algebra", "--count", "3"]) == 0
        out = capsys.readouterr().out
        assert "passed, 0 failed" in out


class TestCorpus:
    def test_corpus_emission(self, tmp_path, capsys):
        out_dir = tmp_path / "corpus"
        assert main(["corpus", "--seed", "0", "--out", str(out_dir)]) == 0
        files = sorted(out_dir.glob("*.json"))
        assert len(files) == 34
        # emitted documents parse and validate
        assert main(["validate", str(files[0])]) == 0

import json

import pytest

from legdet.cli import main
from legdet.records import (
    CSV_HEADER,
    parse_scan_csv,
    parse_scan_jsonl,
    reports_to_csv,
    reports_to_jsonl,
    scan_rows_to_csv,
    scan_rows_to_jsonl,
)
from legdet.verify import ScanRow, scan_conjecture, verify_prime


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestRecords:
    def test_header_is_fixed(self):
        assert CSV_HEADER == "p,residue_class,det_A1,det_A2,j_minus_1,half_sum,c_p,jacobi_p_cp,class_number"
        assert scan_rows_to_csv([]).splitlines() == [CSV_HEADER]

    def test_undefined_fields(self):
        rows = scan_conjecture(3, 13)
        text = scan_rows_to_csv(rows)
        assert text.splitlines()[2] == "5,1,-1,,1,0,1,1,"
        first = json.loads(scan_rows_to_jsonl(rows).splitlines()[0])
        assert "j_minus_1" not in first and "class_number" not in first
        assert first["det_A1"] == 0  # zero is kept, only undefined is dropped

    def test_round_trip(self):
        rows = scan_conjecture(3, 120)
        assert parse_scan_csv(scan_rows_to_csv(rows)) == rows
        assert parse_scan_jsonl(scan_rows_to_jsonl(rows)) == rows

    def test_parse_rejects_bad_header(self):
        with pytest.raises(ValueError):
            parse_scan_csv("p,c_p\n3,1\n")
        with pytest.raises(ValueError):
            parse_scan_jsonl('{"p": 3, "bogus": 1}\n')

    def test_reports(self):
        reports = verify_prime(13)
        lines = reports_to_jsonl(reports).splitlines()
        assert len(lines) == len(reports)
        assert all(json.loads(l)["passed"] for l in lines)
        assert reports_to_csv(reports).splitlines()[0] == "claim_id,p,passed,applicable,parameters,witness"


class TestCp:
    def test_p53(self, capsys):
        code, out, _ = run(capsys, "cp", "--p", "53")
        assert code == 0 and "c_p           4689023" in out
        code, out, _ = run(capsys, "cp", "--p", "53", "--format", "csv")
        assert parse_scan_csv(out)[0].c_p == 4689023

    def test_p3(self, capsys):
        code, out, _ = run(capsys, "cp", "--p", "3", "--format", "jsonl")
        assert code == 0 and json.loads(out)["c_p"] == 1

    def test_class_number_shown(self, capsys):
        _, out, _ = run(capsys, "cp", "--p", "47")
        assert "h(-p)         5" in out

    @pytest.mark.parametrize("p", ["4", "9", "2", "1"])
    def test_invalid(self, capsys, p):
        code, _, err = run(capsys, "cp", "--p", p)
        assert code == 2 and "not an odd prime" in err


class TestDet:
    def test_delta0_vanishes(self, capsys):
        code, out, _ = run(capsys, "det", "--p", "7", "--delta", "0", "--w", "5", "--format", "jsonl")
        assert code == 0 and json.loads(out)["D"] == 0

    def test_p5(self, capsys):
        _, out, _ = run(capsys, "det", "--p", "5", "--delta", "0", "--w", "1", "--format", "jsonl")
        assert json.loads(out)["D"] == -4
        _, out, _ = run(capsys, "det", "--p", "5", "--delta", "0", "--w", "0", "--format", "csv")
        assert out.splitlines() == ["p,delta,w,det_A,det_perturbed,D", "5,0,0,-2,-2,0"]

    def test_bad_delta(self, capsys):
        code, _, _ = run(capsys, "det", "--p", "5", "--delta", "2", "--w", "1")
        assert code == 2


class TestVerify:
    def test_minimal(self, capsys):
        code, out, _ = run(capsys, "verify", "--from", "3", "--to", "3")
        assert code == 0
        assert "0 failed" in out

    def test_jsonl(self, capsys):
        code, out, err = run(capsys, "verify", "--from", "3", "--to", "13", "--format", "jsonl")
        assert code == 0 and len(out.splitlines()) >= 3 and "0 failed" in err

    def test_bad_range(self, capsys):
        code, _, _ = run(capsys, "verify", "--from", "20", "--to", "10")
        assert code == 2

    def test_bad_jobs(self, capsys):
        code, _, _ = run(capsys, "verify", "--from", "3", "--to", "10", "--jobs", "0")
        assert code == 2

    def test_failure_exit(self, capsys, monkeypatch):
        from legdet import cli
        from legdet.verify import VerificationReport

        monkeypatch.setattr(
            cli, "verify_range", lambda *a: [VerificationReport("fake", 3, {}, False, {"lhs": 1, "rhs": 2})]
        )
        code, out, _ = run(capsys, "verify", "--from", "3", "--to", "3")
        assert code == 1 and "[FAIL] fake" in out

    def test_usage_errors_from_argparse(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--from", "3"])
        assert exc.value.code == 2


class TestScan:
    def test_golden(self, capsys):
        code, out, _ = run(capsys, "scan", "--from", "3", "--to", "53", "--format", "csv")
        assert code == 0 and len(parse_scan_csv(out)) == 15

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "scan", "--from", "24", "--to", "28")
        assert code == 0 and out == CSV_HEADER + "\n"

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "scan.jsonl"
        code, out, _ = run(capsys, "scan", "--from", "3", "--to", "30", "--format", "jsonl", "--out", str(path))
        assert code == 0 and out == ""
        data = path.read_bytes()
        assert b"\r" not in data
        assert [r.p for r in parse_scan_jsonl(data.decode("utf-8"))] == [3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_unwritable_out(self, tmp_path, capsys):
        code, _, err = run(capsys, "scan", "--from", "3", "--to", "5", "--out", str(tmp_path / "no" / "x.csv"))
        assert code == 2 and "I/O" in err

    def test_counterexample_exit(self, capsys, monkeypatch):
        from legdet import cli

        fake = [ScanRow(7, 3, 0, 1, None, 1, 1, -1, 1)]
        monkeypatch.setattr(cli, "scan_conjecture", lambda *a: fake)
        code, out, err = run(capsys, "scan", "--from", "7", "--to", "7")
        assert code == 3
        assert "7,3,0,1,,1,1,-1,1" in out and "7,3,0,1,,1,1,-1,1" in err

    def test_theorem_violation_exit(self, capsys, monkeypatch):
        from legdet import cli
        from legdet.families import TheoremViolation

        def boom(*a):
            raise TheoremViolation("expected a perfect square", p=7, value=3)

        monkeypatch.setattr(cli, "compute_cp", boom)
        code, _, err = run(capsys, "cp", "--p", "7")
        assert code == 1 and "value=3" in err

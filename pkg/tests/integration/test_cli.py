"""Integration tests for the facloc command line."""

import io
import json
from fractions import Fraction

import pytest

from facloc._exceptions import BoundViolationError
from facloc._types import Placement, Preference, ViolationReport
from facloc.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main, run
from facloc.instances import parse_instance


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSolve:

    def test_two_facilities(self, capsys, commented_path):
        code, out, _ = _run(capsys, "solve", str(commented_path))
        assert code == EXIT_OK
        assert "OPT placement: (0, 10)" in out
        assert "OPT cost: 2 (2.000000)" in out

    def test_k_median_for_three_facilities(self, capsys, k3_witness_path):
        code, out, _ = _run(capsys, "solve", str(k3_witness_path))
        assert code == EXIT_OK
        assert "placement: (0, 5, 12)" in out


class TestMech:

    def test_candidate_table(self, capsys, commented_path):
        code, out, _ = _run(capsys, "mech", str(commented_path))
        assert code == EXIT_OK
        assert "mechanism: mechanism_one" in out
        assert "candidates: s_l = 0, s_r = 10" in out
        assert " * (0, 1) (0, 10): 2 (2.000000)" in out
        assert "   (1, 0) (10, 0): 22 (22.000000)" in out
        assert out.rstrip().endswith("social cost: 2 (2.000000)")

    def test_generalized(self, capsys, k3_witness_path):
        code, out, _ = _run(capsys, "mech", str(k3_witness_path))
        assert code == EXIT_OK
        assert "mechanism: generalized_mechanism" in out
        assert "placement: (0, 0, 12)" in out

    def test_k_mismatch_is_usage_error(self, capsys, commented_path):
        code, _, err = _run(capsys, "mech", str(commented_path), "--k", "3")
        assert code == EXIT_USAGE
        assert err.startswith("facloc: error:")


class TestAudit:

    def test_strategyproof(self, capsys, commented_path):
        code, out, _ = _run(capsys, "audit", str(commented_path))
        assert code == EXIT_OK
        assert out.strip() == "strategyproof under exhaustive misreports"

    def test_unit_deviator(self, capsys, lower_bound_path):
        code, out, _ = _run(capsys, "audit", "--unit-deviator", str(lower_bound_path))
        assert code == EXIT_OK
        assert out.strip() == "strategyproof under exhaustive misreports"

    def test_three_facilities_prints_witness(self, capsys, k3_witness_path):
        code, out, _ = _run(capsys, "audit", str(k3_witness_path))
        assert code == EXIT_OK
        assert out.splitlines()[0].startswith("agent@7 {F2,F3}→{F2}: cost 5→2")

    def test_violation_of_mechanism_one_fails(self, capsys, monkeypatch, commented_path):
        placement = Placement(locations=(Fraction(0), Fraction(10)))
        fake = ViolationReport(
            agent_index=0,
            location=0,
            weight=1,
            true_preference=Preference.of(1),
            misreport=Preference.of(2),
            cost_truthful=1,
            cost_after_misreport=0,
            placement_truthful=placement,
            placement_after=placement,
        )
        monkeypatch.setattr("facloc.cli.check_strategyproof", lambda *args, **kwargs: [fake])
        code, _, _ = _run(capsys, "audit", str(commented_path))
        assert code == EXIT_FAILURE


class TestDiag:

    def test_lower_bound_file(self, capsys, lower_bound_path):
        code, out, _ = _run(capsys, "diag", str(lower_bound_path))
        assert code == EXIT_OK
        assert "COST: 24 (24.000000)" in out
        assert "OPT: 10 (10.000000)" in out
        assert "ratio: 12/5 (2.400000)" in out
        assert "within 11/4: yes" in out

    def test_three_facilities_rejected(self, capsys, k3_witness_path):
        code, _, _ = _run(capsys, "diag", str(k3_witness_path))
        assert code == EXIT_USAGE


class TestSweep:

    def test_text_report(self, capsys):
        code, out, _ = _run(capsys, "sweep", "--count", "30", "--seed", "3")
        assert code == EXIT_OK
        assert out.startswith("seed: 3\ninstances: 30\n")
        assert "proven bound: 11/4 (2.750000)" in out

    def test_json_report(self, capsys):
        code, out, _ = _run(capsys, "sweep", "--count", "30", "--seed", "3", "--lower-bound-n", "10", "--json")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["schema"] == "facloc.sweep/1"
        assert data["count"] == 30
        assert data["samples"] == 31
        assert data["lower_bound_ns"] == [10]
        assert sum(data["histogram"]["counts"]) == 31
        assert parse_instance(data["argmax"]["instance"]).k == 2

    def test_byte_identical_reruns(self, capsys):
        argv = ("sweep", "--count", "40", "--seed", "11", "--audit", "--json")
        first = _run(capsys, *argv)
        second = _run(capsys, *argv)
        assert first[1] == second[1]

    def test_generator_flags(self, capsys):
        code, out, _ = _run(
            capsys, "sweep", "--count", "20", "--n-max", "4", "--loc-max", "5/2", "--p-f1", "1/2",
            "--p-f2", "1/2", "--p-both", "0", "--json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["config"]["location_max"] == "5/2"

    def test_bound_violation_exits_one(self, capsys, monkeypatch):
        def _fail(*args, **kwargs):
            raise BoundViolationError("Task 0: ratio 3 exceeds 11/4")

        monkeypatch.setattr("facloc.cli.ratio_sweep", _fail)
        code, _, err = _run(capsys, "sweep", "--count", "1")
        assert code == EXIT_FAILURE
        assert "exceeds 11/4" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ("sweep", "--count", "abc"),
            ("sweep", "--p-f1", "x"),
            ("sweep", "--k", "3"),
            ("sweep", "--p-f1", "1/2"),
            ("sweep", "--count", "0"),
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, out, err = _run(capsys, *argv)
        assert code == EXIT_USAGE
        assert out == ""
        assert len(err.strip().splitlines()) == 1


class TestRepro:

    def test_lower_bound_large_n(self, capsys):
        code, out, _ = _run(capsys, "repro", "lower-bound", "--N", "10000")
        assert code == EXIT_OK
        ratio_line = next(line for line in out.splitlines() if line.startswith("ratio: "))
        decimal = float(ratio_line.split("(")[1].rstrip(")"))
        assert abs(decimal - 2.414213) < 1e-3

    def test_lower_bound_series(self, capsys):
        code, out, _ = _run(capsys, "repro", "lower-bound")
        assert code == EXIT_OK
        assert "N = 1: ratio 2 (2.000000)" in out
        assert "N = 10: ratio 12/5 (2.400000)" in out
        assert len([line for line in out.splitlines() if line.startswith("N = ")]) == 5

    def test_lower_bound_guard(self, capsys):
        code, _, _ = _run(capsys, "repro", "lower-bound", "--N", "10", "--W", "5")
        assert code == EXIT_USAGE

    def test_k3(self, capsys):
        code, out, _ = _run(capsys, "repro", "k3")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "k-median centers: (0, 5, 12)"
        assert lines[1] == "agent@7 {F2,F3}→{F2}: cost 5→2"

    def test_k4(self, capsys):
        code, out, _ = _run(capsys, "repro", "k3", "--k", "4")
        assert code == EXIT_OK
        assert "k-median centers: (0, 5, 12, 17)" in out
        assert "agent@7 {F2,F3}→{F2}: cost 5→2" in out

    def test_k3_bad_gaps(self, capsys):
        code, _, err = _run(capsys, "repro", "k3", "--l1", "4", "--l2", "2")
        assert code == EXIT_USAGE
        assert "2*l2 < l1 < 3*l2" in err


class TestGen:

    def test_deterministic_and_parseable(self, capsys):
        first = _run(capsys, "gen", "--seed", "5", "--n-min", "4", "--n-max", "4")
        second = _run(capsys, "gen", "--seed", "5", "--n-min", "4", "--n-max", "4")
        assert first == second
        assert parse_instance(first[1]).n == 4

    def test_three_facilities(self, capsys):
        _, out, _ = _run(capsys, "gen", "--seed", "1", "--k", "3")
        assert out.splitlines()[0].endswith(" 3")


class TestErrors:

    def test_unknown_subcommand(self, capsys):
        code, _, err = _run(capsys)
        assert code == EXIT_USAGE
        code, _, err = _run(capsys, "frobnicate")
        assert code == EXIT_USAGE
        assert err.startswith("facloc: error:")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = _run(capsys, "solve", str(tmp_path / "absent.txt"))
        assert code == EXIT_USAGE
        assert "cannot read" in err

    def test_malformed_file(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2\n0 1 F1\n1 0 F2\n")
        code, _, err = _run(capsys, "solve", str(path))
        assert code == EXIT_USAGE
        assert err.strip() == "facloc: error: line 3: weight must be a positive integer, got '0'"

    def test_non_ascii_header(self, capsys, tmp_path):
        path = tmp_path / "superscript.txt"
        path.write_text("² 2\n0 1 F1\n", encoding="utf-8")
        code, _, err = _run(capsys, "solve", str(path))
        assert code == EXIT_USAGE
        assert err.startswith("facloc: error: line 1: header must be 'n k'")
        assert len(err.strip().splitlines()) == 1

    def test_stdin_not_utf8(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.TextIOWrapper(io.BytesIO(b"\xff\xfe 2\n"), encoding="utf-8"))
        code, _, err = _run(capsys, "solve", "-")
        assert code == EXIT_USAGE
        assert "cannot read -" in err
        assert len(err.strip().splitlines()) == 1

    def test_help(self, capsys):
        code, out, _ = _run(capsys, "--help")
        assert code == EXIT_OK
        assert "repro" in out

    def test_main_uses_argv(self, capsys, commented_path):
        assert main(["solve", str(commented_path)]) == EXIT_OK
        assert "OPT cost" in capsys.readouterr().out

"""Tests for the command-line driver: exit codes, JSON output, determinism."""

import json

import pytest

from umbilic.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestUsageErrors:
    def test_unknown_flag(self, capsys):
        code, _, _ = run(["verify-all", "--bogus"], capsys)
        assert code == 2

    def test_unknown_family(self, capsys):
        code, _, err = run(["analyze", "--family", "nope"], capsys)
        assert code == 2
        assert "unknown family" in err

    def test_bad_parameter_value(self, capsys):
        code, _, err = run(
            ["analyze", "--family", "main1-3", "--param", "r=big"], capsys)
        assert code == 2

    def test_out_of_range_parameter(self, capsys):
        code, _, err = run(
            ["analyze", "--family", "main1-3", "--param", "r=2"], capsys)
        assert code == 2

    def test_samples_floor(self, capsys):
        code, _, err = run(["verify-all", "--samples", "2"], capsys)
        assert code == 2

    def test_nonpositive_tolerance(self, capsys):
        code, _, err = run(["verify-all", "--tol", "0"], capsys)
        assert code == 2

    def test_wrong_point_arity(self, capsys):
        code, _, err = run(
            ["analyze", "--family", "main1-5", "--point", "0"], capsys)
        assert code == 2

    def test_empty_moduli_list(self, capsys):
        code, _, err = run(["moduli", "--a", ""], capsys)
        assert code == 2


class TestVerifyAll:
    def test_default_run_passes(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, out, _ = run(
            ["verify-all", "--samples", "5", "--json", str(out_path)], capsys)
        assert code == 0
        payload = json.loads(out_path.read_text())
        assert len(payload["records"]) >= 30
        statuses = {r["status"] for r in payload["records"]}
        assert statuses <= {"pass", "discrepancy-noted"}
        assert "0 failures" in out

    def test_records_are_sorted(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        run(["verify-all", "--samples", "5", "--json", str(out_path)], capsys)
        records = json.loads(out_path.read_text())["records"]
        keys = [(r["family"], json.dumps(r["params"], sort_keys=True))
                for r in records]
        assert keys == sorted(keys)

    def test_deterministic_json(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(["verify-all", "--samples", "5", "--json", str(a)], capsys)
        run(["verify-all", "--samples", "5", "--json", str(b)], capsys)
        assert a.read_bytes() == b.read_bytes()

    def test_overtight_zero_tolerance_fails(self, capsys):
        code, out, _ = run(
            ["verify-all", "--samples", "5", "--tol-zero", "1e-15"], capsys)
        assert code == 1
        assert "failure" in out

    def test_unwritable_output_path(self, capsys):
        code, _, err = run(
            ["verify-all", "--samples", "5",
             "--json", "/nonexistent-dir/x.json"], capsys)
        assert code == 2


class TestAnalyze:
    def test_json_schema(self, capsys, tmp_path):
        out_path = tmp_path / "a.json"
        code, _, _ = run(
            ["analyze", "--family", "main1-5", "--point", "0", "0",
             "--json", str(out_path)], capsys)
        assert code == 0
        report = json.loads(out_path.read_text())
        assert report["family"] == "main1-5"
        assert report["params"] == {"m": 2, "s": 0}
        (point,) = report["points"]
        assert point["u"] == [0.0, 0.0]
        assert point["signature"] == [0, 2, 0]
        assert point["radical_rank"] == 0
        assert point["H_rel"] == pytest.approx([1, 0, 0, 0, 1], abs=1e-9)
        assert point["flags"]["totally_umbilical"] is True
        assert point["flags"]["totally_geodesic"] is False
        assert point["flags"]["marginally_trapped"] is True
        assert report["reduction"]["translation_class"] == "v_L"
        assert report["full"] is True

    def test_degenerate_family_reports_rank(self, capsys, tmp_path):
        out_path = tmp_path / "a.json"
        run(["analyze", "--family", "light1-6", "--json", str(out_path)],
            capsys)
        report = json.loads(out_path.read_text())
        assert all(p["radical_rank"] == 2 for p in report["points"])
        assert all(p["H_rel"] is None for p in report["points"])

    def test_discrepancy_note_for_s_example(self, capsys, tmp_path):
        out_path = tmp_path / "a.json"
        run(["analyze", "--family", "S-example", "--json", str(out_path)],
            capsys)
        report = json.loads(out_path.read_text())
        assert any("allowed discrepancy" in n for n in report["notes"])

    def test_table_output(self, capsys):
        code, out, _ = run(["analyze", "--family", "main1-3",
                            "--param", "r=0.5", "--point", "0", "0"], capsys)
        assert code == 0
        assert "H_norm = 3.000000" in out
        assert "translation v_S" in out

    def test_domain_error_exit(self, capsys):
        # a point far outside the sphere chart's disc
        code, _, err = run(
            ["analyze", "--family", "main1-3", "--param", "r=0.5",
             "--point", "2", "2"], capsys)
        assert code == 1
        assert "coordinate" in err


class TestModuli:
    def test_table_and_verdict(self, capsys):
        code, out, _ = run(["moduli", "--a", "0,0.001,0.1,1"], capsys)
        assert code == 0
        assert "closure(u)" in out

    def test_json_rows(self, capsys, tmp_path):
        out_path = tmp_path / "m.json"
        run(["moduli", "--a", "0,1", "--json", str(out_path)], capsys)
        rows = json.loads(out_path.read_text())["rows"]
        assert [r["class"] for r in rows] == ["g", "u"]
        assert rows[1]["distance"] == pytest.approx(2 ** 0.5, abs=1e-12)


class TestCatalogList:
    def test_lists_every_family(self, capsys):
        code, out, _ = run(["catalog", "list"], capsys)
        assert code == 0
        for fid in ("main1-7", "light2-6", "psi-a", "cv-parallel"):
            assert fid in out


class TestSeedHandling:
    def test_env_seed_used_as_default(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("UMBILIC_SEED", "7")
        a = tmp_path / "a.json"
        run(["verify-all", "--samples", "5", "--json", str(a)], capsys)
        assert json.loads(a.read_text())["seed"] == 7

    def test_explicit_seed_wins(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("UMBILIC_SEED", "7")
        a = tmp_path / "a.json"
        run(["verify-all", "--samples", "5", "--seed", "3",
             "--json", str(a)], capsys)
        assert json.loads(a.read_text())["seed"] == 3

import json

import pytest

from rigidview.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestGenRig:
    def test_deterministic_output(self, capsys):
        code1, doc1 = run_cli(capsys, "--seed", "7", "gen-rig", "--n", "3")
        code2, doc2 = run_cli(capsys, "--seed", "7", "gen-rig", "--n", "3")
        assert code1 == code2 == 0
        assert doc1 == doc2
        assert len(doc1["cameras"]) == 3
        assert all(len(flat) == 12 for flat in doc1["cameras"])

    def test_json_out_file(self, tmp_path, capsys):
        path = tmp_path / "rig.json"
        code = main(["--seed", "1", "--json-out", str(path), "gen-rig", "--n", "2"])
        assert code == 0
        doc = json.loads(path.read_text())
        assert len(doc["cameras"]) == 2


class TestProjectTriangulate:
    @pytest.fixture
    def rig_file(self, tmp_path, capsys):
        path = tmp_path / "rig.json"
        main(["--seed", "3", "--json-out", str(path), "gen-rig", "--n", "2"])
        capsys.readouterr()
        return str(path)

    def test_project_then_triangulate_round_trip(self, rig_file, capsys):
        code, doc = run_cli(capsys, "project", "--rig", rig_file,
                            "--point", "[2, -1, 3, 1]")
        assert code == 0
        images = doc["images"]
        code, sol = run_cli(capsys, "triangulate", "--rig", rig_file,
                            "--tuple", json.dumps(images))
        assert code == 0
        got = [str(c) for c in sol["point"]]
        # up to scale: cross-check one ratio
        from fractions import Fraction
        vals = [Fraction(c) for c in got]
        assert vals[0] * 1 == vals[3] * 2 and vals[1] == -vals[3]

    def test_triangulate_nonmember_exits_nonzero(self, rig_file, capsys):
        code, doc = run_cli(capsys, "triangulate", "--rig", rig_file,
                            "--tuple", "[[1,2,3],[9,1,4]]")
        assert code == 1
        assert "error" in doc


class TestCheck:
    @pytest.fixture
    def setup(self, tmp_path, capsys):
        rig_path = tmp_path / "rig.json"
        main(["--seed", "5", "--json-out", str(rig_path), "gen-rig", "--n", "2"])
        capsys.readouterr()
        code, u = run_cli(capsys, "project", "--rig", str(rig_path), "--point", "[0,0,0,1]")
        code, v1 = run_cli(capsys, "project", "--rig", str(rig_path), "--point", "[1,0,0,1]")
        code, v2 = run_cli(capsys, "project", "--rig", str(rig_path), "--point", "[2,0,0,1]")
        return str(rig_path), u["images"], v1["images"], v2["images"]

    def test_member_exits_zero(self, setup, capsys):
        rig, u, v1, _ = setup
        for family in ("full", "nine", "oracle"):
            code, doc = run_cli(capsys, "check", "--rig", rig, "--u", json.dumps(u),
                                "--v", json.dumps(v1), "--family", family)
            assert code == 0
            assert doc["member"] is True

    def test_nonmember_exits_one(self, setup, capsys):
        rig, u, _, v2 = setup
        for family in ("full", "nine", "oracle"):
            code, doc = run_cli(capsys, "check", "--rig", rig, "--u", json.dumps(u),
                                "--v", json.dumps(v2), "--family", family)
            assert code == 1
            assert doc["member"] is False


class TestCounts:
    def test_totals(self, capsys):
        code, doc = run_cli(capsys, "counts", "--n", "5")
        assert code == 0
        assert doc["total"] == 4940
        code, doc = run_cli(capsys, "counts", "--n", "2")
        assert doc["total"] == 11


class TestDimension:
    def test_rigid_pair(self, capsys):
        code, doc = run_cli(capsys, "--seed", "2", "dimension", "--scenario", "rigid-pair")
        assert code == 0
        assert doc["dimension"] == 5

    def test_pairwise_degenerate(self, capsys):
        code, doc = run_cli(capsys, "--seed", "2", "dimension", "--scenario", "pairwise3",
                            "--d12", "1", "--d13", "1", "--d23", "2")
        assert code == 0
        assert doc["dimension"] == 5


class TestVerify:
    def test_passing_experiment_exits_zero(self, capsys):
        code, doc = run_cli(capsys, "--seed", "1", "verify", "--experiment", "SEPARATE",
                            "--samples", "3")
        assert code == 0
        assert doc["passed"] is True
        assert doc["samples"] == 3

    def test_thm_equiv_smoke(self, capsys):
        code, doc = run_cli(capsys, "--seed", "1", "verify", "--experiment", "THM32_EQUIV",
                            "--n", "2", "--samples", "6")
        assert code == 0
        assert doc["passed"] is True

    def test_unknown_experiment_errors(self, capsys):
        code = main(["verify", "--experiment", "BOGUS"])
        assert code == 2


class TestRefine:
    def test_refine_noiseless(self, tmp_path, capsys):
        rig_path = tmp_path / "rig.json"
        main(["--seed", "9", "--json-out", str(rig_path), "gen-rig", "--n", "3"])
        capsys.readouterr()
        code, u = run_cli(capsys, "project", "--rig", str(rig_path), "--point", "[0,0,0,1]")
        code, v = run_cli(capsys, "project", "--rig", str(rig_path), "--point", "[1,0,0,1]")
        code, doc = run_cli(capsys, "refine", "--rig", str(rig_path),
                            "--u", json.dumps(u["images"]), "--v", json.dumps(v["images"]))
        assert code == 0
        assert doc["residual"] <= doc["initial_residual"]
        assert doc["residual"] < 1e-10


class TestSpanDim:
    def test_span_dim_reports_facts(self, capsys):
        code, doc = run_cli(capsys, "--seed", "3", "span-dim")
        assert code == 0
        assert doc["span"] == 126
        assert doc["quotient"] == 9
        assert doc["octics"] == 441

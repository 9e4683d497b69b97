import json

import numpy as np
import pytest

from pexider_kit.scripts.seed_configs import build_configs


def seeded(write_config, name):
    config = build_configs()[name]
    return write_config(config.model_dump(mode="json", exclude_none=True), f"{name}.json")


def test_version(invoke):
    result = invoke("--version")
    assert result.exit_code == 0
    assert "pexider-kit" in result.output


class TestBuild:
    def test_example(self, invoke, tmp_path):
        path = tmp_path / "example.artifact.json"
        result = invoke("build", "--family", "paper-example", "--out", path, "--n", 50)
        assert result.exit_code == 0, result.output
        assert "Built paper-example tuple (PartiallyAffine)" in result.output
        assert "[ok]" in result.output
        artifact = json.loads(path.read_text())
        assert artifact["family"] == "paper-example"
        assert set(artifact["functions"]) == {"F", "f1", "f2", "g1", "g2", "G"}
        assert artifact["residual"]["max_abs"] < 1e-12

    def test_constraint_violation_names_the_identity(self, invoke, write_config, tmp_path):
        config = seeded(write_config, "partial_B2_violation")
        result = invoke("build", "--config", config, "--out", tmp_path / "b2.json")
        assert result.exit_code == 2
        assert "C⁻ + A/2 ≠ B·D⁻" in result.output
        assert not (tmp_path / "b2.json").exists()

    @pytest.mark.parametrize("case", ["linear", "trig"])
    def test_profiles(self, invoke, tmp_path, case):
        result = invoke("build", "--family", "profiles", "--case", case, "--n", 30, "--out", tmp_path / f"{case}.json")
        assert result.exit_code == 0, result.output
        assert "NowhereAffine" in result.output

    def test_artifacts_are_byte_identical(self, invoke, tmp_path):
        path = tmp_path / "affine.json"
        contents = []
        for _ in range(2):
            assert invoke("build", "--family", "affine", "--out", path, "--n", 20).exit_code == 0
            contents.append(path.read_bytes())
        assert contents[0] == contents[1]

    def test_missing_config(self, invoke, tmp_path):
        result = invoke("build", "--config", tmp_path / "absent.json")
        assert result.exit_code == 4
        assert "Error:" in result.output

    def test_invalid_config(self, invoke, write_config):
        result = invoke("build", "--config", write_config({"build": {"family": "affine", "I": [0, 1]}}))
        assert result.exit_code == 4

    def test_no_family(self, invoke):
        assert invoke("build").exit_code == 4

    def test_unwritable_output(self, invoke, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        result = invoke("build", "--family", "paper-example", "--n", 10, "--out", blocker / "artifact.json")
        assert result.exit_code == 5


class TestVerify:
    def test_example_passes(self, invoke, example_artifact):
        result = invoke("verify", "--artifact", example_artifact, "--n", 60)
        assert result.exit_code == 0, result.output
        assert "Verdict: pass" in result.output
        report = json.loads(example_artifact.with_name("example.artifact.verify.json").read_text())
        assert report["type"] == "verify"
        assert report["data"]["passed"] is True

    def test_grid_size_does_not_change_the_verdict(self, invoke, example_artifact, tmp_path):
        verdicts = []
        for n in (10, 500):
            result = invoke("verify", "--artifact", example_artifact, "--n", n, "--out", tmp_path / f"v{n}.json")
            verdicts.append(result.exit_code)
        assert verdicts == [0, 0]

    def test_corrupted_G_fails(self, invoke, example_artifact):
        data = json.loads(example_artifact.read_text())
        data["functions"]["G"]["value"] = [v + 0.01 for v in data["functions"]["G"]["value"]]
        example_artifact.write_text(json.dumps(data))
        result = invoke("verify", "--artifact", example_artifact, "--n", 40)
        assert result.exit_code == 1
        assert "Verdict: FAIL" in result.output

    def test_truncated_artifact(self, invoke, example_artifact):
        example_artifact.write_text(example_artifact.read_text()[:200])
        assert invoke("verify", "--artifact", example_artifact).exit_code == 4

    def test_missing_function(self, invoke, example_artifact):
        data = json.loads(example_artifact.read_text())
        del data["functions"]["f2"]
        example_artifact.write_text(json.dumps(data))
        assert invoke("verify", "--artifact", example_artifact).exit_code == 4

    def test_profiles_artifact_checks_the_system(self, invoke, tmp_path):
        path = tmp_path / "linear.json"
        assert invoke("build", "--family", "profiles", "--case", "linear", "--n", 30, "--out", path).exit_code == 0
        result = invoke("verify", "--artifact", path, "--n", 30)
        assert result.exit_code == 0, result.output
        report = json.loads(path.with_name("linear.verify.json").read_text())
        assert len(report["data"]["residuals"]) > 1


class TestClassify:
    def test_example_is_partially_affine(self, invoke, example_artifact):
        result = invoke("classify", "--artifact", example_artifact)
        assert result.exit_code == 10
        assert "Verdict: PartiallyAffine" in result.output
        report = json.loads(example_artifact.with_name("example.artifact.classify.json").read_text())
        (piece,) = report["data"]["intervals"]
        assert piece["slope"] == pytest.approx(4.0, abs=1e-6)

    def test_affine_family_exits_zero(self, invoke, tmp_path):
        path = tmp_path / "affine.json"
        assert invoke("build", "--family", "affine", "--n", 20, "--out", path).exit_code == 0
        assert invoke("classify", "--artifact", path, "--n", 512).exit_code == 0

    def test_profiles_are_nowhere_affine(self, invoke, tmp_path):
        path = tmp_path / "linear.json"
        assert invoke("build", "--family", "profiles", "--case", "linear", "--n", 30, "--out", path).exit_code == 0
        result = invoke("classify", "--artifact", path, "--n", 1024)
        assert result.exit_code == 20
        assert "Verdict: NowhereAffine" in result.output


class TestExport:
    def test_rows_and_sumset_table(self, invoke, example_artifact, tmp_path):
        table = tmp_path / "example.csv"
        result = invoke("export", "--artifact", example_artifact, "--out", table, "--n", 5, "--margin", 0)
        assert result.exit_code == 0, result.output
        lines = table.read_text().splitlines()
        assert lines[0] == "x,F,f1,f2,g1,g2"
        rows = np.loadtxt(table, delimiter=",", skiprows=1)
        assert rows.shape == (5, 6)
        np.testing.assert_allclose(rows[:, 0], [0.0, 1.0, 2.0, 3.0, 4.0])
        assert rows[2, 1] == pytest.approx(8.0, abs=1e-12)
        G = np.loadtxt(tmp_path / "example_G.csv", delimiter=",", skiprows=1)
        assert G.shape == (5, 2)
        assert (G[0, 0], G[-1, 0]) == (0.0, 10.0)

    def test_default_row_count(self, invoke, example_artifact):
        assert invoke("export", "--artifact", example_artifact).exit_code == 0
        rows = np.loadtxt(example_artifact.with_name("example.artifact.csv"), delimiter=",", skiprows=1)
        assert rows.shape == (201, 6)


class TestGeometry:
    def test_example_geometry(self, invoke, write_config, tmp_path):
        out = tmp_path / "geometry.json"
        result = invoke("geometry", "--config", seeded(write_config, "geometry_example"), "--out", out)
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())["data"]
        assert data["ref"] == {"lo": 0.0, "hi": 4.0}
        assert "H_1(3)" in data["restricted"]

    def test_needs_a_geometry_section(self, invoke, write_config):
        assert invoke("geometry", "--config", write_config({"seed": 1})).exit_code == 4


def test_selftest(invoke, tmp_path):
    out = tmp_path / "selftest.json"
    result = invoke("selftest", "--n", 20, "--instances", 3, "--seed", 7, "--out", out)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["data"]["passed"] is True
    assert report["provenance"]["seed"] == 7

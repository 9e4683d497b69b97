import json
import logging

import pytest
from pydantic import ValidationError

from pexider_kit.cli.build import select_build_spec
from pexider_kit.cli.common import ExitCode, exit_code_for, sibling_path, with_overrides
from pexider_kit.config import Settings
from pexider_kit.core.exceptions import (
    ArtifactError,
    ConfigError,
    ConstraintError,
    DomainError,
    OutputError,
    RangeError,
)
from pexider_kit.middleware.run_logger import RunLoggerContext
from pexider_kit.schemas.config import RunConfig
from pexider_kit.scripts.seed_configs import build_configs, seed_configs


class TestSettings:
    @pytest.mark.parametrize(
        "value, level",
        [("info", logging.INFO), ("DEBUG", logging.DEBUG), ("off", logging.CRITICAL + 1), ("loud", logging.CRITICAL + 1)],
    )
    def test_log_level(self, value, level):
        assert Settings(LOG=value).log_level == level

    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("PEXIDER_RESIDUAL_N", "17")
        assert Settings().RESIDUAL_N == 17


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.build is None
        assert config.output.export_n == 201
        assert config.selftest.instances == 100

    def test_unknown_keys_are_rejected(self):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"grid": {"n": 10, "size": 3}})
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"extra": 1})

    def test_family_discriminator(self):
        config = RunConfig.model_validate({"build": {"family": "paper-example"}})
        assert config.build.family == "paper-example"
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"build": {"family": "quadratic"}})

    def test_empty_interval_is_rejected(self):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({
                "build": {"family": "affine", "I": [1.0, 1.0], "A": 1.0, "B": 1.0,
                          "g1": {"kind": "affine", "slope": 1.0}, "g2": {"kind": "affine", "slope": 1.0}},
            })

    def test_piecewise_functions_must_tile(self):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({
                "geometry": {
                    "I": [0.0, 2.0], "H": [0.5, 1.0],
                    "g1": {"kind": "piecewise", "pieces": [
                        {"lo": 0.0, "hi": 1.0, "fn": {"kind": "affine", "slope": 1.0}},
                        {"lo": 1.5, "hi": 2.0, "fn": {"kind": "affine", "slope": 1.0}},
                    ]},
                    "g2": {"kind": "affine", "slope": 1.0},
                },
            })


class TestOverrides:
    def test_values_land_in_their_sections(self):
        config = with_overrides(RunConfig(), seed=5, grid={"n": 12, "margin": None}, output={"path": "x.json"})
        assert (config.seed, config.grid.n, config.grid.margin, config.output.path) == (5, 12, None, "x.json")

    def test_overrides_are_validated(self):
        with pytest.raises(ValidationError):
            with_overrides(RunConfig(), grid={"n": 1})

    def test_select_build_spec(self):
        with pytest.raises(ConfigError):
            select_build_spec(RunConfig(), None, None)
        assert select_build_spec(RunConfig(), "affine", None).family == "affine"
        spec = select_build_spec(RunConfig(), "profiles", "hyperbolic")
        assert spec.case == "hyperbolic"

    def test_config_build_section_wins_for_its_family(self):
        config = build_configs()["partial_B2_violation"]
        assert select_build_spec(config, None, None).B == 2.0
        assert select_build_spec(config, "partial", None).B == 2.0


def test_exit_codes():
    assert exit_code_for(OutputError("x")) == ExitCode.WRITE
    assert exit_code_for(ArtifactError("x")) == ExitCode.INPUT
    assert exit_code_for(FileNotFoundError()) == ExitCode.INPUT
    assert exit_code_for(ConstraintError("x")) == ExitCode.CONSTRAINT
    assert exit_code_for(RangeError("x")) == ExitCode.NUMERIC
    assert exit_code_for(DomainError("x")) == ExitCode.NUMERIC
    assert exit_code_for(ZeroDivisionError()) == ExitCode.NUMERIC
    assert exit_code_for(KeyError("x")) is None


def test_sibling_path():
    assert sibling_path("out/example.artifact.json", ".verify.json") == "out/example.artifact.verify.json"


def test_run_logger_reports_exit_code(caplog):
    with caplog.at_level(logging.INFO, logger="pexider_kit.middleware.run_logger"):
        with RunLoggerContext("verify", "c.json") as run_ctx:
            run_ctx.set_exit_code(1)
            run_ctx.set_detail("max residual 1e-3")
    assert "verify finished with exit code 1" in caplog.text
    assert "config=c.json" in caplog.text


def test_run_logger_marks_escaping_errors():
    with pytest.raises(KeyError):
        with RunLoggerContext("build") as run_ctx:
            raise KeyError("x")
    assert run_ctx.exit_code == 3


def test_seed_configs_validate(tmp_path):
    seed_configs(tmp_path)
    files = sorted(p.stem for p in tmp_path.glob("*.json"))
    assert "paper_example" in files and "profiles_trig_zero" in files
    for path in tmp_path.glob("*.json"):
        RunConfig.model_validate(json.loads(path.read_text()))

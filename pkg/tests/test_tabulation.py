import numpy as np
import pytest

from pexider_kit.config import get_settings
from pexider_kit.core.engine import BuildEngine, default_build_spec
from pexider_kit.core.exceptions import ArtifactError
from pexider_kit.core.provenance import create_provenance
from pexider_kit.core.solution_families import build_from_profiles
from pexider_kit.core.tabulation import from_artifact, from_tabulated, tabulate, to_artifact
from pexider_kit.core.verification import residual_main
from pexider_kit.schemas.artifact import SampledFunction, SolutionArtifact

settings = get_settings()


def round_trip(s, bound):
    artifact = to_artifact(s, create_provenance("build", {}, s.family), bound)
    restored = SolutionArtifact.model_validate(artifact.model_dump(mode="json"))
    return from_artifact(restored)


def test_breakpoints_are_nodes(example):
    sample = tabulate(example.F, n=9)
    assert 1.0 in sample.x and 3.0 in sample.x
    assert sample.domain == (0.0, 4.0)
    assert len(sample.x) == len(sample.value) == len(sample.slope)


def test_example_survives_the_round_trip(example):
    s = round_trip(example, 1e-12)
    assert s.regime == "PartiallyAffine"
    assert s.I == example.I
    report = residual_main(s, n=80)
    assert report.max_abs < 1e-12 + settings.INTERPOLATION_TOL
    x = np.linspace(0.1, 3.9, 25)
    np.testing.assert_allclose(s.F.eval(x), example.F.eval(x), atol=1e-12)


def test_reconstructed_tuple_survives_the_round_trip():
    engine = BuildEngine()
    s = build_from_profiles(engine.profiles(default_build_spec("profiles", "linear")))
    restored = round_trip(s, 1e-7)
    assert residual_main(restored, n=40).max_abs < 1e-7 + settings.INTERPOLATION_TOL


def test_nodes_must_increase():
    sample = SampledFunction(name="g", domain=(0.0, 1.0), x=[0.0, 0.5, 0.4, 1.0], value=[0.0] * 4, slope=[1.0] * 4)
    with pytest.raises(ArtifactError, match="strictly increasing"):
        from_tabulated(sample)


def test_nodes_must_cover_the_domain():
    sample = SampledFunction(name="g", domain=(0.0, 1.0), x=[0.2, 0.5, 1.0], value=[0.0] * 3, slope=[1.0] * 3)
    with pytest.raises(ArtifactError):
        from_tabulated(sample)


def test_non_finite_samples():
    sample = SampledFunction(name="g", domain=(0.0, 1.0), x=[0.0, 1.0], value=[0.0, float("nan")], slope=[1.0, 1.0])
    with pytest.raises(ArtifactError, match="non-finite"):
        from_tabulated(sample)


def test_artifact_needs_every_function(example):
    data = to_artifact(example, create_provenance("build", {}, "paper-example"), 1e-12).model_dump(mode="json")
    del data["functions"]["G"]
    with pytest.raises(ValueError, match="lacks functions"):
        SolutionArtifact.model_validate(data)


def test_domain_mismatch_is_rejected(example):
    data = to_artifact(example, create_provenance("build", {}, "paper-example"), 1e-12).model_dump(mode="json")
    data["I"] = [0.0, 3.0]
    with pytest.raises(ArtifactError):
        from_artifact(SolutionArtifact.model_validate(data))

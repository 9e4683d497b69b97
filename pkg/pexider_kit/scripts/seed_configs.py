"""
Script to write ready-to-run example configs for every family
Run with: python -m pexider_kit.scripts.seed_configs [target_dir]
"""
from pathlib import Path
from typing import Dict
import json
import sys

from pexider_kit.core.engine import PROFILE_CORPUS, default_build_spec, example_spec, mirrored_example_spec
from pexider_kit.schemas.config import GeometryModel, RunConfig
from pexider_kit.schemas.functions import AffineFn, PiecewiseFn, PieceSpec, PolynomialFn


def example_geometry() -> GeometryModel:
    """The example g's on I = ]0,4[ around H = ]2,4["""
    g = PiecewiseFn(pieces=[
        PieceSpec(lo=0.0, hi=2.0, fn=AffineFn(slope=1.0)),
        PieceSpec(lo=2.0, hi=4.0, fn=PolynomialFn(coefficients=[1.0, 0.0, 0.25])),
    ])
    return GeometryModel(I=(0.0, 4.0), H=(2.0, 4.0), g1=g, g2=g, points=[0.5, 1.0, 3.0])


def build_configs() -> Dict[str, RunConfig]:
    configs = {
        "affine": RunConfig(build=default_build_spec("affine")),
        "paper_example": RunConfig(build=default_build_spec("paper-example")),
        "partial_example": RunConfig(build=example_spec()),
        "partial_mirrored": RunConfig(build=mirrored_example_spec()),
        "partial_B2_violation": RunConfig(build=example_spec().model_copy(update={"B": 2.0})),
        "geometry_example": RunConfig(geometry=example_geometry()),
        "selftest": RunConfig(seed=7),
    }
    for case in PROFILE_CORPUS:
        configs[f"profiles_{case.replace('-', '_')}"] = RunConfig(build=default_build_spec("profiles", case))
    return configs


def seed_configs(target: Path):
    """Write one JSON file per config"""
    print(f"Writing example configs to {target}...")
    target.mkdir(parents=True, exist_ok=True)
    for name, config in build_configs().items():
        path = target / f"{name}.json"
        path.write_text(json.dumps(config.model_dump(mode="json", exclude_none=True), indent=2, ensure_ascii=False) + "\n")
        print(f"  {path}")
    print("Done.")


if __name__ == "__main__":
    seed_configs(Path(sys.argv[1] if len(sys.argv) > 1 else "configs"))

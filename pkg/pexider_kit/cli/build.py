from typing import Optional
import logging

import click

from pexider_kit.cli.common import (
    ExitCode,
    config_option,
    exit_on_error,
    load_config,
    n_option,
    out_option,
    residual_line,
    seed_option,
    tol_option,
    with_overrides,
    write_json,
)
from pexider_kit.core.engine import FAMILIES, PROFILE_CORPUS, BuildEngine, default_build_spec
from pexider_kit.core.exceptions import ConfigError
from pexider_kit.core.provenance import create_provenance
from pexider_kit.core.tabulation import to_artifact
from pexider_kit.core.verification import residual_main
from pexider_kit.middleware.run_logger import RunLoggerContext
from pexider_kit.schemas.config import RunConfig

logger = logging.getLogger(__name__)


def select_build_spec(config: RunConfig, family: Optional[str], case: Optional[str]):
    """The config's build section, or the ready-made set for a family named on the command line"""
    spec = config.build
    if family is None:
        if spec is None:
            raise ConfigError("No build section in the config and no --family given")
        family = spec.family
    if spec is None or spec.family != family:
        return default_build_spec(family, case)
    if case is not None and getattr(spec, "case", case) != case:
        return default_build_spec(family, case)
    return spec


@click.command("build")
@config_option
@out_option
@n_option
@tol_option
@seed_option
@click.option("--family", type=click.Choice(FAMILIES), default=None, help="Family to build")
@click.option("--case", type=click.Choice(sorted(PROFILE_CORPUS)), default=None, help="Profile case")
@click.pass_context
def command(ctx, config_path, out, n, tol, seed, family, case):
    """Build a solution tuple, check its residual and write the artifact"""
    with RunLoggerContext("build", config_path) as run_ctx, exit_on_error(run_ctx):
        config = with_overrides(
            load_config(config_path),
            seed=seed,
            grid={"n": n},
            tolerances={"residual_bound": tol},
            output={"path": out},
        )
        spec = select_build_spec(config, family, case)
        engine = BuildEngine()

        s = engine.build(spec)
        bound = engine.bound(spec, config.tolerances.residual_bound)
        report = residual_main(
            s,
            n=config.grid.n,
            margin=config.grid.margin,
            sampling=config.grid.sampling,
            seed=config.seed,
            bound=bound,
        )

        record = config.model_dump(mode="json")
        record["build"] = spec.model_dump(mode="json")
        artifact = to_artifact(
            s,
            create_provenance("build", record, spec.family, config.seed),
            bound,
            residual=report,
            params=engine.params_record(spec),
            profiles=spec if spec.family == "profiles" else None,
            config=record,
            n=config.output.samples,
        )
        path = write_json(config.output.path or f"{spec.family}.artifact.json", artifact.model_dump(mode="json"))

        click.echo(f"Built {spec.family} tuple ({s.regime}) on I={s.I}, G on {s.G.domain}")
        click.echo(residual_line(report))
        click.echo(f"Artifact: {path}")
        run_ctx.set_detail(f"max residual {report.max_abs:.3e}")
        run_ctx.set_exit_code(ExitCode.OK if report.passed else ExitCode.RESIDUAL)
    ctx.exit(int(run_ctx.exit_code))

import logging

import click

from pexider_kit.cli.common import (
    ExitCode,
    artifact_option,
    config_option,
    exit_on_error,
    load_artifact,
    load_config,
    n_option,
    out_option,
    residual_line,
    seed_option,
    sibling_path,
    tol_option,
    with_overrides,
    write_json,
)
from pexider_kit.config import get_settings
from pexider_kit.core.engine import BuildEngine
from pexider_kit.core.provenance import create_provenance, create_verify_report
from pexider_kit.core.tabulation import from_artifact
from pexider_kit.core.verification import SYSTEM_BOUND, residual_main, residual_system
from pexider_kit.middleware.run_logger import RunLoggerContext

settings = get_settings()
logger = logging.getLogger(__name__)


@click.command("verify")
@config_option
@artifact_option
@out_option
@n_option
@tol_option
@seed_option
@click.pass_context
def command(ctx, config_path, artifact_path, out, n, tol, seed):
    """
    Re-ingest an artifact and check it against the equation

    Steps:
    1. Load the artifact and rebuild Hermite interpolants of its samples
    2. Residual of the main equation, bound = build bound + interpolation tolerance
    3. For profile artifacts, residuals of the auxiliary system from the stored constants
    4. Write the report; exit 0 iff every bound holds
    """
    with RunLoggerContext("verify", config_path) as run_ctx, exit_on_error(run_ctx):
        config = with_overrides(load_config(config_path), seed=seed, grid={"n": n}, tolerances={"residual_bound": tol})
        artifact = load_artifact(artifact_path)
        s = from_artifact(artifact)
        grid = dict(n=config.grid.n, margin=config.grid.margin, sampling=config.grid.sampling, seed=config.seed)

        bound = config.tolerances.residual_bound or artifact.bound + settings.INTERPOLATION_TOL
        reports = [residual_main(s, bound=bound, **grid)]
        if artifact.profiles is not None:
            profiles = BuildEngine().profiles(artifact.profiles)
            reports.extend(residual_system(profiles, bound=SYSTEM_BOUND, **grid))

        passed = all(report.passed for report in reports)
        residuals = {report.label: {**report.model_dump(mode="json"), "passed": report.passed} for report in reports}
        record = {"config": config.model_dump(mode="json"), "artifact": artifact.provenance.config_sha256}
        payload = create_verify_report(
            create_provenance("verify", record, artifact.family, config.seed),
            artifact.family,
            residuals,
            passed,
        )
        path = write_json(out or sibling_path(artifact_path, ".verify.json"), payload)

        for report in reports:
            click.echo(residual_line(report))
        click.echo(f"Verdict: {'pass' if passed else 'FAIL'} ({path})")
        run_ctx.set_exit_code(ExitCode.OK if passed else ExitCode.RESIDUAL)
    ctx.exit(int(run_ctx.exit_code))

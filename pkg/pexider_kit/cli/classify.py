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
    seed_option,
    sibling_path,
    tol_option,
    with_overrides,
    write_json,
)
from pexider_kit.core.provenance import create_classify_report, create_provenance
from pexider_kit.core.tabulation import from_artifact
from pexider_kit.core.verification import classify_affine_intervals
from pexider_kit.middleware.run_logger import RunLoggerContext

logger = logging.getLogger(__name__)

VERDICT_CODES = {
    "GloballyAffine": ExitCode.OK,
    "PartiallyAffine": ExitCode.PARTIAL,
    "NowhereAffine": ExitCode.NOWHERE,
}


@click.command("classify")
@config_option
@artifact_option
@out_option
@n_option
@tol_option
@seed_option
@click.pass_context
def command(ctx, config_path, artifact_path, out, n, tol, seed):
    """Find the intervals on which F is affine; the exit code carries the verdict"""
    with RunLoggerContext("classify", config_path) as run_ctx, exit_on_error(run_ctx):
        config = with_overrides(load_config(config_path), seed=seed, tolerances={"classify_tol": tol, "classify_n": n})
        artifact = load_artifact(artifact_path)
        F = from_artifact(artifact).F
        report = classify_affine_intervals(F, tol=config.tolerances.classify_tol, n=config.tolerances.classify_n)

        record = {"config": config.model_dump(mode="json"), "artifact": artifact.provenance.config_sha256}
        payload = create_classify_report(
            create_provenance("classify", record, artifact.family, config.seed),
            report.model_dump(mode="json"),
        )
        path = write_json(out or sibling_path(artifact_path, ".classify.json"), payload)

        click.echo(f"Verdict: {report.verdict} ({path})")
        for piece in report.intervals:
            click.echo(f"  F = {piece.slope:.12g}·x + {piece.intercept:.12g} on {piece.interval}")
        run_ctx.set_detail(report.verdict)
        run_ctx.set_exit_code(VERDICT_CODES[report.verdict])
    ctx.exit(int(run_ctx.exit_code))

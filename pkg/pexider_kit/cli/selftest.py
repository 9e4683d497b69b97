import logging

import click

from pexider_kit.cli.common import (
    ExitCode,
    config_option,
    exit_on_error,
    load_config,
    n_option,
    out_option,
    seed_option,
    with_overrides,
    write_json,
)
from pexider_kit.core.provenance import create_provenance, create_selftest_report
from pexider_kit.core.selftest import run_selftest
from pexider_kit.middleware.run_logger import RunLoggerContext

logger = logging.getLogger(__name__)


@click.command("selftest")
@config_option
@out_option
@n_option
@seed_option
@click.option("--instances", type=int, default=None, help="Random geometry instances")
@click.pass_context
def command(ctx, config_path, out, n, seed, instances):
    """Run the built-in battery of fidelity, construction and geometry checks"""
    with RunLoggerContext("selftest", config_path) as run_ctx, exit_on_error(run_ctx):
        config = with_overrides(load_config(config_path), seed=seed, selftest={"n": n, "instances": instances})
        report = run_selftest(config.seed, instances=config.selftest.instances, n=config.selftest.n)

        payload = create_selftest_report(
            create_provenance("selftest", config.model_dump(mode="json"), None, config.seed),
            {**report.model_dump(mode="json"), "passed": report.passed},
        )
        path = write_json(out or config.output.path or "selftest.json", payload)

        for check in report.checks:
            click.echo(f"{'ok  ' if check.passed else 'FAIL'} {check.name}")
        failed = sum(not check.passed for check in report.checks)
        click.echo(f"{len(report.checks) - failed} of {len(report.checks)} checks passed ({path})")
        run_ctx.set_detail(f"{failed} failing checks")
        run_ctx.set_exit_code(ExitCode.OK if report.passed else ExitCode.RESIDUAL)
    ctx.exit(int(run_ctx.exit_code))

import logging

import click

from pexider_kit.cli.common import ExitCode, config_option, exit_on_error, load_config, out_option, write_json
from pexider_kit.core.exceptions import ConfigError
from pexider_kit.core.function_factory import build_fn
from pexider_kit.core.interval_geometry import interval_sets
from pexider_kit.core.intervals import OpenInterval
from pexider_kit.core.provenance import create_geometry_report, create_provenance
from pexider_kit.middleware.run_logger import RunLoggerContext

logger = logging.getLogger(__name__)


@click.command("geometry")
@config_option
@out_option
@click.pass_context
def command(ctx, config_path, out):
    """Interval sets (ext, ref, star, sides, H_k(x)) for the config's geometry section"""
    with RunLoggerContext("geometry", config_path) as run_ctx, exit_on_error(run_ctx):
        config = load_config(config_path)
        section = config.geometry
        if section is None:
            raise ConfigError("The geometry command needs a geometry section in the config")
        I, H = OpenInterval(*section.I), OpenInterval(*section.H)
        g1, g2 = build_fn(section.g1, I, "g1"), build_fn(section.g2, I, "g2")
        report = interval_sets(H, g1, g2, I, tuple(section.points))

        payload = create_geometry_report(
            create_provenance("geometry", config.model_dump(mode="json"), None, config.seed),
            report.model_dump(mode="json"),
        )
        path = write_json(out or config.output.path or "geometry.json", payload)

        click.echo(f"H={H} in I={I}: ext={report.ext}, ref={report.ref}, star={report.star}")
        click.echo(f"sides: H-={report.side_minus}, H+={report.side_plus}")
        for label, value in report.restricted.items():
            click.echo(f"  {label} = {value if value is not None else 'empty'}")
        click.echo(f"Report: {path}")
        run_ctx.set_exit_code(ExitCode.OK)
    ctx.exit(int(run_ctx.exit_code))

"""
CSV export of an artifact for external plotting
"""
from pathlib import Path
from typing import Sequence
import logging

import click
import numpy as np

from pexider_kit.cli.common import (
    ExitCode,
    artifact_option,
    config_option,
    exit_on_error,
    load_artifact,
    load_config,
    n_option,
    out_option,
    sibling_path,
    with_overrides,
)
from pexider_kit.core.exceptions import OutputError
from pexider_kit.core.tabulation import from_artifact
from pexider_kit.middleware.run_logger import RunLoggerContext

logger = logging.getLogger(__name__)

COLUMNS = ("F", "f1", "f2", "g1", "g2")


def write_csv(path: str, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
    """Comma-separated rows with a header, every value as %.17g"""
    target = Path(path)
    rows = np.column_stack(columns)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(target, rows, fmt="%.17g", delimiter=",", header=",".join(header), comments="")
    except OSError as exc:
        raise OutputError(f"Cannot write {path}: {exc}") from exc
    logger.info(f"Wrote {len(rows)} rows to {target}")
    return target


def g_path(path: str) -> str:
    return sibling_path(path, "_G.csv")


@click.command("export")
@config_option
@artifact_option
@out_option
@n_option
@click.option("--margin", type=float, default=None, help="Distance kept from the open endpoints (0 = closed)")
@click.pass_context
def command(ctx, config_path, artifact_path, out, n, margin):
    """Write (x, F, f1, f2, g1, g2) on I and (u, G) on the sumset as CSV"""
    with RunLoggerContext("export", config_path) as run_ctx, exit_on_error(run_ctx):
        config = with_overrides(load_config(config_path), output={"export_n": n, "export_margin": margin})
        s = from_artifact(load_artifact(artifact_path))
        n, margin = config.output.export_n, config.output.export_margin

        x = s.I.grid(n, margin)
        u = s.G.domain.grid(n, margin)
        table = write_csv(
            out or sibling_path(artifact_path, ".csv"),
            ("x",) + COLUMNS,
            [x] + [s.functions[name].eval(x, margin=0.0) for name in COLUMNS],
        )
        sumset = write_csv(g_path(str(table)), ("u", "G"), [u, s.G.eval(u, margin=0.0)])

        click.echo(f"Exported {n} rows to {table} and {sumset}")
        run_ctx.set_exit_code(ExitCode.OK)
    ctx.exit(int(run_ctx.exit_code))

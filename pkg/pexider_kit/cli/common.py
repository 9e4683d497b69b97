"""
Plumbing shared by the sub-commands: exit codes, options, config and
artifact loading, report writing and the exception to exit code mapping
"""
from contextlib import contextmanager
from enum import IntEnum
from pathlib import Path
from typing import Any, Dict, Optional
import json
import logging

import click
from pydantic import ValidationError

from pexider_kit.core.exceptions import (
    ArtifactError,
    ConfigError,
    ConstraintError,
    ContinuityError,
    DegeneracyError,
    OutputError,
    PexiderError,
    SpecError,
)
from pexider_kit.middleware.run_logger import RunLoggerContext
from pexider_kit.schemas.artifact import SolutionArtifact
from pexider_kit.schemas.config import RunConfig

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    RESIDUAL = 1
    CONSTRAINT = 2
    NUMERIC = 3
    INPUT = 4
    WRITE = 5
    PARTIAL = 10
    NOWHERE = 20


CONSTRAINT_ERRORS = (ConstraintError, ContinuityError, SpecError, DegeneracyError)
INPUT_ERRORS = (ValidationError, ArtifactError, ConfigError)


# Options shared by every command
config_option = click.option(
    "--config", "config_path", type=click.Path(dir_okay=False), default=None,
    help="JSON run configuration",
)
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file")
n_option = click.option("--n", "n", type=int, default=None, help="Grid size")
tol_option = click.option("--tol", type=float, default=None, help="Tolerance")
seed_option = click.option("--seed", type=int, default=None, help="Seed for randomized grids and suites")
artifact_option = click.option(
    "--artifact", "artifact_path", type=click.Path(dir_okay=False), required=True,
    help="Solution artifact written by build",
)


def exit_code_for(exc: BaseException) -> Optional[ExitCode]:
    """Stable exit code of an exception, None for errors that are bugs"""
    if isinstance(exc, OutputError):
        return ExitCode.WRITE
    if isinstance(exc, INPUT_ERRORS) or isinstance(exc, OSError):
        return ExitCode.INPUT
    if isinstance(exc, CONSTRAINT_ERRORS):
        return ExitCode.CONSTRAINT
    if isinstance(exc, (PexiderError, ArithmeticError, ValueError)):
        return ExitCode.NUMERIC
    return None


def describe(exc: BaseException) -> str:
    """One message per failure, naming failing identities when there are any"""
    if isinstance(exc, ConstraintError) and exc.failures:
        lines = [str(exc)]
        for check in exc.failures:
            relation = check.identity.replace(" = ", " ≠ ", 1)
            lines.append(f"  {relation}: lhs={check.lhs:.12g}, rhs={check.rhs:.12g}")
        return "\n".join(lines)
    if isinstance(exc, ValidationError):
        return f"invalid input: {exc}"
    return str(exc)


@contextmanager
def exit_on_error(run_ctx: RunLoggerContext):
    """Translate a failing command body into its exit code on run_ctx"""
    try:
        yield
    except Exception as exc:
        code = exit_code_for(exc)
        if code is None:
            raise
        logger.error(f"{run_ctx.command} failed with {type(exc).__name__}: {exc}")
        click.echo(f"Error: {describe(exc)}", err=True)
        run_ctx.set_exit_code(int(code))
        run_ctx.set_detail(type(exc).__name__)


def _read_json(path: str, error_cls) -> Dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise error_cls(f"Cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise error_cls(f"{path} is not valid JSON: {exc}") from exc


def load_config(path: Optional[str]) -> RunConfig:
    """Validated run config; an absent path means every default"""
    if path is None:
        return RunConfig()
    config = RunConfig.model_validate(_read_json(path, ConfigError))
    logger.info(f"Loaded config {path}")
    return config


def load_artifact(path: str) -> SolutionArtifact:
    artifact = SolutionArtifact.model_validate(_read_json(path, ArtifactError))
    logger.info(f"Loaded {artifact.family} artifact {path}")
    return artifact


def with_overrides(config: RunConfig, seed: Optional[int] = None, **sections: Dict[str, Any]) -> RunConfig:
    """Config with command-line values written into their sections and re-validated"""
    data = config.model_dump(mode="json")
    for section, values in sections.items():
        data[section].update({key: value for key, value in values.items() if value is not None})
    if seed is not None:
        data["seed"] = seed
    return RunConfig.model_validate(data)


def write_json(path: str, payload: Dict[str, Any]) -> Path:
    """Write payload as sorted, indented JSON"""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot write {path}: {exc}") from exc
    logger.info(f"Wrote {target}")
    return target


def sibling_path(path: str, suffix: str) -> str:
    """report.json next to artifact.json: <stem><suffix>"""
    source = Path(path)
    return str(source.with_name(source.stem + suffix))


def residual_line(report) -> str:
    verdict = "ok" if report.passed else "FAIL"
    bound = f"{report.bound:.1e}" if report.bound is not None else "-"
    x, y = report.worst_point
    return (
        f"{report.label}: max={report.max_abs:.3e} mean={report.mean_abs:.3e} bound={bound} "
        f"worst=({x:.12g}, {y:.12g}) [{verdict}]"
    )

import logging
import sys

import click

from pexider_kit import __version__
from pexider_kit.config import get_settings

settings = get_settings()


def configure_logging():
    """Root logger on stderr at the PEXIDER_LOG level; stdout stays for summaries"""
    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if settings.log_level > logging.CRITICAL:
        logging.disable(logging.CRITICAL)


@click.group()
@click.version_option(__version__, prog_name="pexider-kit")
def main():
    """Build, verify and classify solutions of F((x+y)/2) + f1(x) + f2(y) = G(g1(x) + g2(y))"""
    configure_logging()


# Import and register sub-commands
from pexider_kit.cli import build, classify, export, geometry, selftest, verify  # noqa: E402

main.add_command(build.command)
main.add_command(verify.command)
main.add_command(classify.command)
main.add_command(export.command)
main.add_command(geometry.command)
main.add_command(selftest.command)


if __name__ == "__main__":
    main()

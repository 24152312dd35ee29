import argparse
import logging
import sys

from app.cli import checks, diagrams, relational, structures
from app.cli.common import CommandError
from app.config import settings
from app.services.relational_model import ExpansionAxiomError
from app.services.relations import CarrierMismatchError, EnumerationLimitError
from app.services.semilattice import CrossCheckError, InvalidStructureError, SemilatticeAxiomError
from app.utils.structure_io import StructureParseError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.PROJECT_NAME,
        description="Compatible preorders, congruences and quotients of finite semilattices, posets and structures.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in (structures, checks, relational, diagrams):
        module.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Exit codes: 0 pass, 1 semantic failure or counterexample, 2 parse or usage error."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        return args.handler(args)
    except (StructureParseError, CommandError, EnumerationLimitError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (
        SemilatticeAxiomError,
        InvalidStructureError,
        ExpansionAxiomError,
        CarrierMismatchError,
        CrossCheckError,
        ValueError,
    ) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


def run():
    logging.basicConfig(
        stream=sys.stderr,
        level=settings.LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
    )
    raise SystemExit(main())


if __name__ == "__main__":
    run()

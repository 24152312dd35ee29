from pydantic import BaseModel

from app.services.relations import BinaryRelation
from app.utils.structure_io import StructureFile, StructureKind, parse

SEMILATTICE_KINDS = (StructureKind.SEMILATTICE, StructureKind.SPEC_SEMILATTICE)
POSET_KINDS = (StructureKind.POSET, StructureKind.SPEC_POSET)


class CommandError(Exception):
    """Bad command-line usage; reported with exit code 2."""


def load(path, *kinds: StructureKind) -> StructureFile:
    sf = parse(path)
    if kinds and sf.kind not in kinds:
        expected = " or ".join(k.value for k in kinds)
        raise CommandError(f"{path}: expected a {expected} file, got {sf.kind.value}")
    return sf


def format_pairs(r: BinaryRelation) -> str:
    """Off-diagonal pairs, e.g. {(0,1), (2,1)}."""
    return "{" + ", ".join(f"({a},{b})" for a, b in r.pairs() if a != b) + "}"


def format_map(mapping) -> str:
    return " ".join(str(v) for v in mapping)


def format_report(report: BaseModel) -> list[str]:
    """One `field: value` line per report field; lists are counted and itemized."""
    lines = []
    for key, value in report.model_dump(mode="json").items():
        if isinstance(value, list):
            lines.append(f"{key}: {len(value)}")
            lines.extend(f"  - {item}" for item in value)
        else:
            lines.append(f"{key}: {value}")
    return lines


def emit(lines) -> None:
    for line in lines:
        print(line)

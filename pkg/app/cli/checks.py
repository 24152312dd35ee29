"""Verifier subcommands: per-structure checks, built-in fixtures and corpus sweeps."""
from app.cli.common import POSET_KINDS, SEMILATTICE_KINDS, CommandError, emit, format_report, load
from app.schemas import CheckStatus
from app.services.correspondence import verify_theorem_2_1
from app.services.fixtures import FIXTURES
from app.services.poset_spec import verify_poset_representation, verify_proposition_3_2
from app.services.quotient import (
    verify_corollary_2_3,
    verify_corollary_2_4,
    verify_corollary_2_5,
    verify_corollary_2_7,
    verify_remark_2_6,
)
from app.services.relational_model import structure_from_poset, verify_congruence_specialization, verify_prop_3_5
from app.services.sweeps import THEOREMS, export_csv, run_sweep, summarize
from app.utils.structure_io import StructureKind

SEMILATTICE_CHECKS = {
    "2.1": verify_theorem_2_1,
    "2.3": verify_corollary_2_3,
    "2.4": verify_corollary_2_4,
}

POSET_CHECKS = {
    "3.1": verify_poset_representation,
    "3.2": verify_proposition_3_2,
}

GLOBAL_CHECKS = {
    "2.5": verify_corollary_2_5,
    "2.6": verify_remark_2_6,
    "2.7": verify_corollary_2_7,
}

CHECKS = ("2.1", "2.3", "2.4", "2.5", "2.6", "2.7", "3.1", "3.2", "3.5")


def _report(args):
    theorem = args.theorem
    if theorem in GLOBAL_CHECKS:
        # a file only fixes the size bound of the sweep
        max_size = load(args.file).carrier.size if args.file else args.max_size
        return GLOBAL_CHECKS[theorem](max_size, allow_large=args.allow_large)
    if not args.file:
        raise CommandError(f"--theorem {theorem} needs a structure file")
    if theorem in SEMILATTICE_CHECKS:
        return SEMILATTICE_CHECKS[theorem](
            load(args.file, *SEMILATTICE_KINDS).semilattice, allow_large=args.allow_large
        )
    if theorem in POSET_CHECKS:
        return POSET_CHECKS[theorem](load(args.file, *POSET_KINDS).poset, allow_large=args.allow_large)

    sf = load(args.file, *SEMILATTICE_KINDS, *POSET_KINDS, StructureKind.RELATIONAL)
    if sf.semilattice is not None:
        return verify_congruence_specialization(sf.semilattice)
    if sf.poset is not None:
        return verify_prop_3_5(structure_from_poset(sf.poset.order), allow_large=args.allow_large)
    return verify_prop_3_5(sf.structure, allow_large=args.allow_large)


def check(args) -> int:
    report = _report(args)
    emit([f"theorem {args.theorem}", *format_report(report)])
    return 0 if report.passed else 1


def _line(values: dict) -> str:
    return " / ".join(f"{key}: {value}" for key, value in values.items())


def fixtures(args) -> int:
    names = [args.remark] if args.remark else list(FIXTURES)
    ok = True
    for name in names:
        report = FIXTURES[name]()
        emit([
            report.name,
            f"expected: {_line(report.expected)}",
            f"actual: {_line(report.actual)}",
            "OK" if report.passed else "MISMATCH",
        ])
        ok = ok and report.passed
    return 0 if ok else 1


def sweep(args) -> int:
    rows = run_sweep(args.theorem, args.max_size)
    if args.csv:
        export_csv(rows, args.csv)
    failed = sum(1 for row in rows if row.status is CheckStatus.FAILED)
    emit(summarize(rows))
    print(f"sweep {args.theorem}: {len(rows)} instances, {failed} failed")
    return 0 if failed == 0 else 1


def register(subparsers) -> None:
    p = subparsers.add_parser("check", help="Run one verifier and print its report")
    p.add_argument("file", nargs="?")
    p.add_argument("--theorem", required=True, choices=CHECKS)
    p.add_argument("--max-size", type=int, default=3, help="Size bound for whole-corpus checks")
    p.add_argument("--allow-large", action="store_true", help="Lift the enumeration size guards")
    p.set_defaults(handler=check)

    p = subparsers.add_parser("fixtures", help="Run the built-in fixtures and compare with the expected answers")
    p.add_argument("--remark", choices=tuple(FIXTURES))
    p.set_defaults(handler=fixtures)

    p = subparsers.add_parser("sweep", help="Run a verifier over every small structure")
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.add_argument("--max-size", type=int)
    p.add_argument("--csv", metavar="PATH", help="Write one row per instance as CSV")
    p.set_defaults(handler=sweep)

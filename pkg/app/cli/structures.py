"""Subcommands that read one structure and print a construction on it."""
from app.cli.common import POSET_KINDS, SEMILATTICE_KINDS, CommandError, emit, format_map, format_pairs, load
from app.services.correspondence import omega, psi
from app.services.poset_spec import (
    enumerate_compatible_preorders_poset,
    enumerate_finite_posets,
    poset_kernel_preorder,
    poset_quotient,
)
from app.services.quotient import build_quotient, kernel_preorder, represent
from app.services.relational_model import ExpansionAxiomError
from app.services.relations import BinaryRelation
from app.services.semilattice import (
    Congruence,
    InvalidStructureError,
    PreorderStrategy,
    SemilatticeAxiomError,
    congruence_from_partition,
    enumerate_compatible_preorders,
    enumerate_congruences,
    enumerate_semilattices,
)
from app.utils.partitions import format_partition, parse_partition
from app.utils.structure_io import (
    StructureKind,
    format_structure,
    parse,
    poset_file,
    relation_file,
    semilattice_file,
)


def validate(args) -> int:
    try:
        parse(args.file)
    except (SemilatticeAxiomError, ExpansionAxiomError) as e:
        print(f"FAIL {e.axiom} at {e.witness}: {e}")
        return 1
    except InvalidStructureError as e:
        where = f" at {e.witness}" if e.witness is not None else ""
        print(f"FAIL{where}: {e}")
        return 1
    print("OK")
    return 0


def congruences(args) -> int:
    s = load(args.file, *SEMILATTICE_KINDS).semilattice
    found = enumerate_congruences(s)
    if args.count:
        print(len(found))
    else:
        emit(format_partition(theta.classes) for theta in found)
    return 0


def preorders(args) -> int:
    sf = load(args.file, *SEMILATTICE_KINDS, *POSET_KINDS)
    if sf.semilattice is not None:
        strategy = PreorderStrategy.CROSS_CHECK if args.cross_check else PreorderStrategy.FILTER
        found = enumerate_compatible_preorders(sf.semilattice, strategy)
    else:
        if args.cross_check:
            raise CommandError("--cross-check applies to semilattice files only")
        found = enumerate_compatible_preorders_poset(sf.poset)
    if args.count:
        print(len(found))
    else:
        emit(format_pairs(r) for r in found)
    return 0


def _relation_on(carrier, path) -> BinaryRelation:
    r = load(path, StructureKind.RELATION).relation
    if r.size != carrier.size:
        raise CommandError(f"{path}: relation on {r.size} elements, structure has {carrier.size}")
    return BinaryRelation(carrier, r.rows)


def psi_command(args) -> int:
    s = load(args.file, *SEMILATTICE_KINDS).semilattice
    theta = psi(s, _relation_on(s.carrier, args.relfile))
    print(format_structure(relation_file(theta.rel)), end="")
    return 0


def omega_command(args) -> int:
    s = load(args.file, *SEMILATTICE_KINDS).semilattice
    theta = Congruence(s, _relation_on(s.carrier, args.relfile))
    print(format_structure(relation_file(omega(s, theta))), end="")
    return 0


def quotient(args) -> int:
    s = load(args.file, *SEMILATTICE_KINDS).semilattice
    try:
        blocks = parse_partition(args.by, s.size)
    except ValueError as e:
        raise CommandError(str(e)) from None
    q = build_quotient(s, congruence_from_partition(s, blocks))
    print(format_structure(semilattice_file(q.target)), end="")
    print(f"# projection: {format_map(q.projection.map)}")
    return 0


def represent_command(args) -> int:
    sf = load(args.file, StructureKind.SPEC_SEMILATTICE, StructureKind.SPEC_POSET)
    if sf.kind is StructureKind.SPEC_SEMILATTICE:
        q = represent(sf.specialization_semilattice)
        target, projection = semilattice_file(q.target), q.projection
        recovered = kernel_preorder(q.projection)
    else:
        poset, projection = poset_quotient(sf.specialization_poset)
        target = poset_file(poset)
        recovered = poset_kernel_preorder(projection)
    equal = recovered == sf.spec
    print(format_structure(target), end="")
    emit([
        f"# projection: {format_map(projection.map)}",
        f"# recovered: {format_pairs(recovered)}",
        f"# recovers spec: {'YES' if equal else 'NO'}",
    ])
    return 0 if equal else 1


def enumerate_command(args) -> int:
    n = args.semilattices if args.semilattices is not None else args.posets
    if n < 1:
        raise CommandError(f"size must be positive, got {n}")
    if args.semilattices is not None:
        files = [semilattice_file(s) for s in enumerate_semilattices(args.semilattices, up_to_iso=args.up_to_iso)]
    else:
        if args.up_to_iso:
            raise CommandError("--up-to-iso applies to --semilattices only")
        files = [poset_file(p) for p in enumerate_finite_posets(args.posets)]
    print("\n".join(format_structure(sf) for sf in files), end="")
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser("validate", help="Check a structure file and report the first violated axiom")
    p.add_argument("file")
    p.set_defaults(handler=validate)

    p = subparsers.add_parser("congruences", help="List the congruences of a semilattice as partitions")
    p.add_argument("file")
    p.add_argument("--count", action="store_true")
    p.set_defaults(handler=congruences)

    p = subparsers.add_parser("preorders", help="List the compatible preorders of a semilattice or poset")
    p.add_argument("file")
    p.add_argument("--count", action="store_true")
    p.add_argument("--cross-check", action="store_true", help="Also derive them from the congruences and compare")
    p.set_defaults(handler=preorders)

    p = subparsers.add_parser("psi", help="Symmetric core of a compatible preorder")
    p.add_argument("file")
    p.add_argument("relfile")
    p.set_defaults(handler=psi_command)

    p = subparsers.add_parser("omega", help="Compatible preorder of a congruence")
    p.add_argument("file")
    p.add_argument("relfile")
    p.set_defaults(handler=omega_command)

    p = subparsers.add_parser("quotient", help="Quotient by a congruence given in block syntax")
    p.add_argument("file")
    p.add_argument("--by", required=True, metavar="PARTITION")
    p.set_defaults(handler=quotient)

    p = subparsers.add_parser("represent", help="Quotient representation of a specialization structure")
    p.add_argument("file")
    p.set_defaults(handler=represent_command)

    p = subparsers.add_parser("enumerate", help="Print every semilattice or poset of a given size")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--semilattices", type=int, metavar="N")
    group.add_argument("--posets", type=int, metavar="N")
    p.add_argument("--up-to-iso", action="store_true")
    p.set_defaults(handler=enumerate_command)

from app.cli.common import CommandError, load
from app.services.relational_model import StructureHom, expansion_from_hom, quotient_from_expansion
from app.utils.structure_io import StructureKind, format_structure, structure_file


def expand(args) -> int:
    """Appropriate expansion of STRUCTFILE induced by the homomorphism in HOMFILE."""
    a = load(args.structfile, StructureKind.RELATIONAL).structure
    target = load(args.homfile, StructureKind.RELATIONAL)
    if target.mapping is None:
        raise CommandError(f"{args.homfile}: a homomorphism file needs a map: line")
    e = expansion_from_hom(StructureHom(a, target.structure, target.mapping))
    print(format_structure(structure_file(a, e.theta, e.starred)), end="")
    return 0


def collapse(args) -> int:
    """Quotient structure of an expansion, printed with the projection as its map."""
    sf = load(args.expansionfile, StructureKind.RELATIONAL)
    if sf.theta is None:
        raise CommandError(f"{args.expansionfile}: an expansion file needs a theta: section")
    h = quotient_from_expansion(sf.expansion)
    print(format_structure(structure_file(h.cod, mapping=h.map)), end="")
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser("expand", help="Expansion induced by a surjective homomorphism")
    p.add_argument("structfile")
    p.add_argument("homfile")
    p.set_defaults(handler=expand)

    p = subparsers.add_parser("collapse", help="Homomorphic image described by an expansion")
    p.add_argument("expansionfile")
    p.set_defaults(handler=collapse)

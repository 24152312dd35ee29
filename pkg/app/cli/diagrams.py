from app.cli.common import POSET_KINDS, SEMILATTICE_KINDS, CommandError, load
from app.utils.dot import congruence_lattice_dot, hasse_dot


def dot(args) -> int:
    sf = load(args.file, *SEMILATTICE_KINDS, *POSET_KINDS)
    if args.congruence_lattice:
        if sf.semilattice is None:
            raise CommandError("--congruence-lattice needs a semilattice file")
        print(congruence_lattice_dot(sf.semilattice), end="")
    else:
        order = sf.semilattice.order if sf.semilattice is not None else sf.poset.order
        print(hasse_dot(order), end="")
    return 0


def register(subparsers) -> None:
    p = subparsers.add_parser("dot", help="Hasse diagram in DOT format")
    p.add_argument("file")
    p.add_argument("--congruence-lattice", action="store_true", help="Draw the congruences ordered by inclusion")
    p.set_defaults(handler=dot)

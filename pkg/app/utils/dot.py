from graphviz import Digraph

from app.services import relations as rel
from app.services.relations import BinaryRelation
from app.services.semilattice import FiniteSemilattice, enumerate_congruences
from app.utils.partitions import format_partition


def hasse_digraph(order: BinaryRelation, labels=None, name: str = "hasse") -> Digraph:
    """Covering edges of a partial order, drawn bottom to top, nodes in index order."""
    labels = labels or order.carrier.names
    g = Digraph(name)
    g.attr(rankdir="BT")
    for i in range(order.size):
        g.node(f"n{i}", label=str(labels[i]))
    for i, j in rel.transitive_reduction(order).pairs():
        g.edge(f"n{i}", f"n{j}")
    return g


def hasse_dot(order: BinaryRelation) -> str:
    return hasse_digraph(order).source


def congruence_lattice_dot(s: FiniteSemilattice) -> str:
    """Congruences ordered by inclusion, each labelled by its partition."""
    congruences = enumerate_congruences(s)
    carrier = rel.Carrier(len(congruences))
    inclusion = rel.from_predicate(
        carrier, lambda x, y: rel.is_coarser(congruences[x].rel, congruences[y].rel)
    )
    labels = [format_partition(theta.classes) for theta in congruences]
    return hasse_digraph(inclusion, labels, name="congruences").source

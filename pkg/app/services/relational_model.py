"""
Surjective homomorphisms of finite relational/algebraic structures and
their internal description as appropriate expansions: an equivalence Θ
(the interpretation of the starred equality) together with one starred
relation R* per relation symbol, subject to

    (3.1)  R(x1..xn) => R*(x1..xn)
    (3.2)  x1 Θ y1 ... xn Θ yn => f(x1..xn) Θ f(y1..yn)
    (3.3)  x1 Θ y1 ... xn Θ yn and R*(x1..xn) => R*(y1..yn)

Equality itself is never stored; Θ is the dedicated `theta` field.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from app.config import settings
from app.schemas import CountReport, InstanceReport
from app.services import relations as rel
from app.services.relations import BinaryRelation, Carrier, EnumerationLimitError
from app.services.semilattice import FiniteSemilattice, InvalidStructureError
from app.utils.partitions import enumerate_partitions

logger = logging.getLogger(__name__)


class ExpansionAxiomError(ValueError):
    def __init__(self, axiom: str, witness: tuple, message: str):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [name for name, _ in self.relations] + [name for name, _ in self.functions]
        if len(set(names)) != len(names):
            raise ValueError(f"Symbol names must be distinct: {names}")
        for name, arity in self.relations:
            if arity < 1:
                raise ValueError(f"Relation {name} must have arity at least 1")
        for name, arity in self.functions:
            if arity < 0:
                raise ValueError(f"Function {name} has negative arity")


def _tuple_index(args: Sequence[int], n: int) -> int:
    index = 0
    for x in args:
        index = index * n + x
    return index


@dataclass(frozen=True)
class FiniteStructure:
    """
    relations[i] holds the tuples of signature.relations[i]; functions[i] is
    the table of signature.functions[i] indexed by argument tuples in
    itertools.product order.
    """
    signature: Signature
    carrier: Carrier
    relations: tuple[frozenset[tuple[int, ...]], ...]
    functions: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        n = self.carrier.size
        if len(self.relations) != len(self.signature.relations):
            raise InvalidStructureError("One tuple set is needed per relation symbol")
        if len(self.functions) != len(self.signature.functions):
            raise InvalidStructureError("One table is needed per function symbol")
        for (name, arity), tuples in zip(self.signature.relations, self.relations):
            for t in tuples:
                if len(t) != arity or any(not 0 <= x < n for x in t):
                    raise InvalidStructureError(f"Tuple {t} does not fit relation {name}/{arity}")
        for (name, arity), table in zip(self.signature.functions, self.functions):
            if len(table) != n ** arity:
                raise InvalidStructureError(f"Function {name} needs {n ** arity} table entries")
            if any(not 0 <= v < n for v in table):
                raise InvalidStructureError(f"Function {name} has values outside the carrier")

    @property
    def size(self) -> int:
        return self.carrier.size

    def apply(self, k: int, args: Sequence[int]) -> int:
        return self.functions[k][_tuple_index(args, self.size)]


@dataclass(frozen=True)
class StructureHom:
    dom: FiniteStructure
    cod: FiniteStructure
    map: tuple[int, ...]

    def __post_init__(self):
        if self.dom.signature != self.cod.signature:
            raise InvalidStructureError("Homomorphism ends have different signatures")
        if len(self.map) != self.dom.size or any(not 0 <= v < self.cod.size for v in self.map):
            raise InvalidStructureError("Map does not send the domain into the codomain")


@dataclass(frozen=True)
class AppropriateExpansion:
    base: FiniteStructure
    theta: BinaryRelation
    starred: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self):
        error = expansion_violation(self.base, self.theta, self.starred)
        if error is not None:
            raise error


def _args(n: int, arity: int):
    return itertools.product(range(n), repeat=arity)


def hom_violation(h: StructureHom) -> Optional[str]:
    dom, cod, f = h.dom, h.cod, h.map
    for k, (name, arity) in enumerate(dom.signature.functions):
        for args in _args(dom.size, arity):
            lhs = f[dom.apply(k, args)]
            rhs = cod.apply(k, tuple(f[x] for x in args))
            if lhs != rhs:
                return f"{name}{args}: h({name}(...)) = {lhs} but {name}(h(...)) = {rhs}"
    for k, (name, _) in enumerate(dom.signature.relations):
        for t in sorted(dom.relations[k]):
            image = tuple(f[x] for x in t)
            if image not in cod.relations[k]:
                return f"{name}{t} holds but {name}{image} does not"
    return None


def is_homomorphism(h: StructureHom) -> bool:
    return hom_violation(h) is None


def is_surjective(h: StructureHom) -> bool:
    return len(set(h.map)) == h.cod.size


def is_into_classes(h: StructureHom) -> bool:
    """
    Codomain element k is the k-th kernel class, classes ordered by least
    element; equivalently the map read as a word is a restricted growth
    string covering the whole codomain.
    """
    if not (is_homomorphism(h) and is_surjective(h)):
        return False
    top = -1
    for v in h.map:
        if v > top + 1:
            return False
        top = max(top, v)
    return True


def expansion_violation(
    base: FiniteStructure, theta: BinaryRelation, starred: Sequence[frozenset]
) -> Optional[ExpansionAxiomError]:
    if theta.carrier != base.carrier:
        return ExpansionAxiomError("carrier", (), "Theta lives on a different carrier")
    if len(starred) != len(base.signature.relations):
        return ExpansionAxiomError("shape", (), "One starred relation is needed per relation symbol")
    if not rel.is_equivalence(theta):
        return ExpansionAxiomError("equivalence", (), "Theta is not an equivalence relation")
    n = base.size
    for k, (name, arity) in enumerate(base.signature.relations):
        for t in starred[k]:
            if len(t) != arity or any(not 0 <= x < n for x in t):
                return ExpansionAxiomError("shape", t, f"Tuple {t} does not fit {name}*")
        for t in sorted(base.relations[k]):
            if t not in starred[k]:
                return ExpansionAxiomError("3.1", t, f"{name}{t} holds but {name}*{t} does not")
    for k, (name, arity) in enumerate(base.signature.functions):
        for xs in _args(n, arity):
            for ys in itertools.product(*(theta.successors(x) for x in xs)):
                fx, fy = base.apply(k, xs), base.apply(k, ys)
                if not theta.holds(fx, fy):
                    return ExpansionAxiomError(
                        "3.2", (xs, ys), f"{name}{xs} = {fx} and {name}{ys} = {fy} are not Θ-related"
                    )
    for k, (name, _) in enumerate(base.signature.relations):
        for xs in sorted(starred[k]):
            for ys in itertools.product(*(theta.successors(x) for x in xs)):
                if ys not in starred[k]:
                    return ExpansionAxiomError(
                        "3.3", (xs, ys), f"{name}*{xs} holds but {name}*{ys} does not"
                    )
    return None


def is_appropriate(base: FiniteStructure, theta: BinaryRelation, starred: Sequence[frozenset]) -> bool:
    return expansion_violation(base, theta, starred) is None


def expansion_from_hom(h: StructureHom) -> AppropriateExpansion:
    """Θ is the kernel of h and R*(a..) holds iff R(h(a)..) holds in the codomain."""
    witness = hom_violation(h)
    if witness is not None:
        raise InvalidStructureError(f"Not a homomorphism: {witness}")
    if not is_surjective(h):
        raise InvalidStructureError("Expansions are built from surjective homomorphisms only")
    dom = h.dom
    theta = rel.from_predicate(dom.carrier, lambda a, b: h.map[a] == h.map[b])
    starred = tuple(
        frozenset(t for t in _args(dom.size, arity) if tuple(h.map[x] for x in t) in h.cod.relations[k])
        for k, (_, arity) in enumerate(dom.signature.relations)
    )
    return AppropriateExpansion(dom, theta, starred)


def _class_structure(
    base: FiniteStructure, blocks: list[list[int]], relations: Sequence[frozenset]
) -> FiniteStructure:
    m = len(blocks)
    index = [0] * base.size
    for k, block in enumerate(blocks):
        for a in block:
            index[a] = k
    functions = tuple(
        tuple(index[base.apply(k, tuple(blocks[c][0] for c in cs))] for cs in _args(m, arity))
        for k, (_, arity) in enumerate(base.signature.functions)
    )
    names = tuple("{" + ",".join(base.carrier.names[a] for a in block) + "}" for block in blocks)
    return FiniteStructure(base.signature, Carrier(m, names), tuple(relations), functions)


def quotient_from_expansion(e: AppropriateExpansion) -> StructureHom:
    """
    The projection of A onto A/Θ, where R holds of classes iff R* holds of
    representatives and functions act on representatives.
    """
    base = e.base
    blocks = rel.classes(e.theta)
    index = [0] * base.size
    for k, block in enumerate(blocks):
        for a in block:
            index[a] = k
    relations = [frozenset(tuple(index[x] for x in t) for t in starred) for starred in e.starred]
    cod = _class_structure(base, blocks, relations)
    return StructureHom(base, cod, tuple(index))


def _respects_functions(base: FiniteStructure, theta: BinaryRelation) -> bool:
    for k, (_, arity) in enumerate(base.signature.functions):
        for xs in _args(base.size, arity):
            fx = base.apply(k, xs)
            for ys in itertools.product(*(theta.successors(x) for x in xs)):
                if not theta.holds(fx, base.apply(k, ys)):
                    return False
    return True


def _guard(a: FiniteStructure, allow_large: bool):
    if a.size > settings.MAX_STRUCTURE_SIZE and not allow_large:
        raise EnumerationLimitError(
            f"Structure size {a.size} exceeds MAX_STRUCTURE_SIZE={settings.MAX_STRUCTURE_SIZE}"
        )


def _subsets(items: Sequence) -> Iterator[list]:
    for counter in range(1 << len(items)):
        yield [x for t, x in enumerate(items) if counter >> t & 1]


def enumerate_homs_into_classes(a: FiniteStructure, allow_large: bool = False) -> list[StructureHom]:
    """
    Kernel partitions first (skipping those that break a function symbol),
    then every choice of codomain relations containing the forward image
    of each relation of a.
    """
    _guard(a, allow_large)
    homs = []
    for blocks in enumerate_partitions(a.size):
        theta = rel.from_partition(a.carrier, blocks)
        if not _respects_functions(a, theta):
            continue
        m = len(blocks)
        index = [0] * a.size
        for k, block in enumerate(blocks):
            for x in block:
                index[x] = k
        choices = []
        for k, (_, arity) in enumerate(a.signature.relations):
            forced = frozenset(tuple(index[x] for x in t) for t in a.relations[k])
            optional = [t for t in _args(m, arity) if t not in forced]
            choices.append([forced | frozenset(extra) for extra in _subsets(optional)])
        for relations in itertools.product(*choices):
            cod = _class_structure(a, blocks, relations)
            homs.append(StructureHom(a, cod, tuple(index)))
    return homs


def enumerate_appropriate_expansions(a: FiniteStructure, allow_large: bool = False) -> list[AppropriateExpansion]:
    """
    Every Θ satisfying (3.2) with every Θ-saturated R* containing R; R* is a
    union of Θ-class boxes, so the choices are subsets of the boxes R misses.
    """
    _guard(a, allow_large)
    expansions = []
    for blocks in enumerate_partitions(a.size):
        theta = rel.from_partition(a.carrier, blocks)
        if not _respects_functions(a, theta):
            continue
        choices = []
        for k, (_, arity) in enumerate(a.signature.relations):
            boxes = [frozenset(itertools.product(*(blocks[c] for c in cs))) for cs in _args(len(blocks), arity)]
            forced = [box for box in boxes if box & a.relations[k]]
            optional = [box for box in boxes if not box & a.relations[k]]
            base = frozenset().union(*forced)
            choices.append([base.union(*extra) for extra in _subsets(optional)])
        for starred in itertools.product(*choices):
            expansions.append(AppropriateExpansion(a, theta, tuple(starred)))
    return expansions


def verify_prop_3_5(a: FiniteStructure, allow_large: bool = False) -> CountReport:
    """
    expansion_from_hom and quotient_from_expansion are mutually inverse
    between surjective homs into classes and appropriate expansions.
    """
    homs = enumerate_homs_into_classes(a, allow_large)
    expansions = enumerate_appropriate_expansions(a, allow_large)
    report = CountReport(
        subject=f"structure on {a.size} elements",
        left_label="surjective homomorphisms into classes",
        right_label="appropriate expansions",
        left_count=len(homs),
        right_count=len(expansions),
    )
    images = set()
    for h in homs:
        report.checked += 1
        if not is_into_classes(h):
            report.failures.append(f"enumerated map {list(h.map)} is not a hom into classes")
            continue
        try:
            e = expansion_from_hom(h)
        except (ExpansionAxiomError, InvalidStructureError) as exc:
            report.failures.append(f"expansion of {list(h.map)} is not appropriate: {exc}")
            continue
        images.add(e)
        if quotient_from_expansion(e) != h:
            report.failures.append(f"round trip changes hom {list(h.map)}")
    for e in expansions:
        report.checked += 1
        if expansion_from_hom(quotient_from_expansion(e)) != e:
            report.failures.append(f"round trip changes expansion with Θ {rel.classes(e.theta)}")
    if images != set(expansions):
        report.failures.append("expansions of homs differ from the enumerated expansions")
    return report


def structure_from_semilattice(s: FiniteSemilattice) -> FiniteStructure:
    signature = Signature(functions=(("join", 2),))
    table = tuple(s.join[a][b] for a in range(s.size) for b in range(s.size))
    return FiniteStructure(signature, s.carrier, (), (table,))


def structure_from_poset(order: BinaryRelation) -> FiniteStructure:
    signature = Signature(relations=(("le", 2),))
    return FiniteStructure(signature, order.carrier, (frozenset(order.pairs()),))


def enumerate_structures(
    signature: Signature, n: int, up_to_iso: bool = False, allow_large: bool = False
) -> list[FiniteStructure]:
    """
    Every structure for the signature on n labelled elements; with
    up_to_iso, only the structure with the least encoding in each
    isomorphism class.
    """
    carrier = Carrier(n)
    rel_spaces = [list(_args(n, arity)) for _, arity in signature.relations]
    fun_sizes = [n ** arity for _, arity in signature.functions]
    count = 1
    for space in rel_spaces:
        count *= 2 ** len(space)
    for size in fun_sizes:
        count *= n ** size
    if count > settings.MAX_MAP_COUNT and not allow_large:
        raise EnumerationLimitError(f"{count} structures exceed MAX_MAP_COUNT={settings.MAX_MAP_COUNT}")
    rel_choices = [[frozenset(sub) for sub in _subsets(space)] for space in rel_spaces]
    fun_choices = [list(itertools.product(range(n), repeat=size)) for size in fun_sizes]
    found = []
    seen = set()
    perms = list(itertools.permutations(range(n)))
    for relations in itertools.product(*rel_choices):
        for functions in itertools.product(*fun_choices):
            a = FiniteStructure(signature, carrier, tuple(relations), tuple(functions))
            if up_to_iso:
                key = min(_encode(a, p) for p in perms)
                if key in seen:
                    continue
                seen.add(key)
            found.append(a)
    logger.info(f"Enumerated {len(found)} structures on {n} elements (up_to_iso={up_to_iso})")
    return found


def _encode(a: FiniteStructure, perm: Sequence[int]) -> tuple:
    n = a.size
    inverse = [0] * n
    for x, y in enumerate(perm):
        inverse[y] = x
    relations = tuple(tuple(sorted(tuple(perm[x] for x in t) for t in r)) for r in a.relations)
    functions = tuple(
        tuple(perm[a.apply(k, tuple(inverse[y] for y in ys))] for ys in _args(n, arity))
        for k, (_, arity) in enumerate(a.signature.functions)
    )
    return relations, functions


def verify_congruence_specialization(s: FiniteSemilattice) -> InstanceReport:
    """
    With no relation symbols, appropriate expansions of a semilattice are its
    congruences and the induced quotients are the semilattice quotients.
    """
    from app.services.quotient import build_quotient
    from app.services.semilattice import enumerate_congruences

    report = InstanceReport(subject=f"semilattice on {s.size} elements")
    a = structure_from_semilattice(s)
    expansions = enumerate_appropriate_expansions(a, allow_large=True)
    congruences = enumerate_congruences(s)
    if [e.theta for e in expansions] != [t.rel for t in congruences]:
        report.failures.append("expansion thetas differ from the semilattice congruences")
    for e, theta in zip(expansions, congruences):
        report.checked += 1
        projection = quotient_from_expansion(e)
        expected = build_quotient(s, theta)
        table = tuple(expected.target.join[x][y] for x in range(expected.target.size) for y in range(expected.target.size))
        if projection.map != expected.projection.map or projection.cod.functions != (table,):
            report.failures.append(f"quotient by {rel.classes(theta.rel)} differs")
    return report

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator, Optional, Sequence

from app.config import settings
from app.services import relations as rel
from app.services.relations import BinaryRelation, Carrier, EnumerationLimitError
from app.utils.partitions import enumerate_partitions

logger = logging.getLogger(__name__)


class SemilatticeAxiomError(ValueError):
    """A join table breaks a semilattice axiom; `witness` names the offending elements."""

    def __init__(self, axiom: str, witness: tuple[int, ...], message: str):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class InvalidStructureError(ValueError):
    """A relation or map does not satisfy the invariant its wrapper type requires."""

    def __init__(self, message: str, witness: Optional[tuple[int, ...]] = None):
        super().__init__(message)
        self.witness = witness


class CrossCheckError(RuntimeError):
    """Two enumeration strategies disagreed."""


class PreorderStrategy(str, Enum):
    FILTER = "filter"
    OMEGA = "omega"
    CROSS_CHECK = "cross-check"


def _axiom_violation(n: int, join: Sequence[Sequence[int]]) -> Optional[SemilatticeAxiomError]:
    for a in range(n):
        for b in range(n):
            if not 0 <= join[a][b] < n:
                return SemilatticeAxiomError(
                    "range", (a, b), f"join[{a}][{b}] = {join[a][b]} is outside 0..{n - 1}"
                )
    for a in range(n):
        if join[a][a] != a:
            return SemilatticeAxiomError(
                "idempotence", (a,), f"idempotence fails at {a}: {a} v {a} = {join[a][a]}"
            )
    for a in range(n):
        for b in range(a + 1, n):
            if join[a][b] != join[b][a]:
                return SemilatticeAxiomError(
                    "commutativity", (a, b),
                    f"commutativity fails at ({a}, {b}): {join[a][b]} != {join[b][a]}",
                )
    for a in range(n):
        for b in range(n):
            ab = join[a][b]
            for c in range(n):
                if join[ab][c] != join[a][join[b][c]]:
                    return SemilatticeAxiomError(
                        "associativity", (a, b, c),
                        f"associativity fails at ({a}, {b}, {c}): "
                        f"({a} v {b}) v {c} = {join[ab][c]} but {a} v ({b} v {c}) = {join[a][join[b][c]]}",
                    )
    return None


@dataclass(frozen=True)
class FiniteSemilattice:
    """Join semilattice on 0..n-1 given by its join table."""
    carrier: Carrier
    join: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.carrier.size
        if len(self.join) != n or any(len(row) != n for row in self.join):
            raise SemilatticeAxiomError("shape", (), f"Join table must be {n}x{n}")
        error = _axiom_violation(n, self.join)
        if error is not None:
            raise error

    @property
    def size(self) -> int:
        return self.carrier.size

    def __call__(self, a: int, b: int) -> int:
        return self.join[a][b]

    @cached_property
    def order(self) -> BinaryRelation:
        return rel.from_predicate(self.carrier, lambda a, b: self.join[a][b] == b)

    @cached_property
    def top(self) -> int:
        t = 0
        for a in range(1, self.size):
            t = self.join[t][a]
        return t


@dataclass(frozen=True)
class SpecializationSemilattice:
    base: FiniteSemilattice
    spec: BinaryRelation

    def __post_init__(self):
        violation = compatibility_violation(self.base, self.spec)
        if violation is not None:
            raise InvalidStructureError(*violation)


@dataclass(frozen=True)
class SemilatticeHom:
    """
    A map between carriers. Join preservation is checked by
    is_semilattice_hom, not on construction.
    """
    dom: FiniteSemilattice
    cod: FiniteSemilattice
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.dom.size:
            raise InvalidStructureError(
                f"Map has length {len(self.map)}, domain has {self.dom.size} elements"
            )
        for a, v in enumerate(self.map):
            if not 0 <= v < self.cod.size:
                raise InvalidStructureError(f"Image of {a} is outside the codomain", (a,))

    def __call__(self, a: int) -> int:
        return self.map[a]

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.size


@dataclass(frozen=True)
class Congruence:
    base: FiniteSemilattice
    rel: BinaryRelation

    def __post_init__(self):
        violation = congruence_violation(self.base, self.rel)
        if violation is not None:
            raise InvalidStructureError(*violation)

    @classmethod
    def unchecked(cls, base: FiniteSemilattice, relation: BinaryRelation) -> Congruence:
        """Wrap a relation already known to be a congruence."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "base", base)
        object.__setattr__(obj, "rel", relation)
        return obj

    @cached_property
    def classes(self) -> list[list[int]]:
        return rel.classes(self.rel)


def validate_semilattice(carrier: Carrier, table: Sequence[Sequence[int]]) -> FiniteSemilattice:
    """
    Build a semilattice from a join table, raising SemilatticeAxiomError
    with a witness tuple on the first failed axiom.
    """
    return FiniteSemilattice(carrier, tuple(tuple(int(v) for v in row) for row in table))


def induced_order(s: FiniteSemilattice) -> BinaryRelation:
    """a <= b iff a v b = b"""
    return s.order


def compatibility_violation(
    s: FiniteSemilattice, r: BinaryRelation
) -> Optional[tuple[str, tuple[int, ...]]]:
    rel.check_same_carrier(s.order, r)
    n = s.size
    for a in range(n):
        if not r.holds(a, a):
            return f"not reflexive at {a}", (a,)
    for a in range(n):
        for b in r.successors(a):
            for c in r.successors(b):
                if not r.holds(a, c):
                    return f"not transitive: {a} ⊑ {b} ⊑ {c} but not {a} ⊑ {c}", (a, b, c)
    for a, b in s.order.pairs():
        if not r.holds(a, b):
            return f"not coarser than the induced order: {a} <= {b} but not {a} ⊑ {b}", (a, b)
    for b in range(n):
        below = [a for a in range(n) if r.holds(a, b)]
        for a, a1 in itertools.combinations(below, 2):
            if not r.holds(s.join[a][a1], b):
                return (
                    f"join condition fails: {a} ⊑ {b} and {a1} ⊑ {b} but not ({a} v {a1}) ⊑ {b}",
                    (a, a1, b),
                )
    return None


def is_compatible_preorder(s: FiniteSemilattice, r: BinaryRelation) -> bool:
    return compatibility_violation(s, r) is None


def congruence_violation(
    s: FiniteSemilattice, r: BinaryRelation
) -> Optional[tuple[str, tuple[int, ...]]]:
    rel.check_same_carrier(s.order, r)
    if not rel.is_equivalence(r):
        return "not an equivalence relation", None
    for a, b in r.pairs():
        for c in range(s.size):
            if not r.holds(s.join[a][c], s.join[b][c]):
                return (
                    f"not join-compatible: {a} Θ {b} but not ({a} v {c}) Θ ({b} v {c})",
                    (a, b, c),
                )
    return None


def is_congruence(s: FiniteSemilattice, r: BinaryRelation) -> bool:
    return congruence_violation(s, r) is None


def congruence_from_partition(s: FiniteSemilattice, blocks) -> Congruence:
    return Congruence(s, rel.from_partition(s.carrier, blocks))


def identity_congruence(s: FiniteSemilattice) -> Congruence:
    return Congruence(s, rel.identity(s.carrier))


def total_congruence(s: FiniteSemilattice) -> Congruence:
    return Congruence(s, rel.total(s.carrier))


def enumerate_congruences(s: FiniteSemilattice, allow_large: bool = False) -> list[Congruence]:
    """All congruences of s, filtered from set partitions in restricted growth string order."""
    found = []
    for blocks in enumerate_partitions(s.size, allow_large=allow_large):
        candidate = rel.from_partition(s.carrier, blocks)
        if is_congruence(s, candidate):
            found.append(Congruence(s, candidate))
    logger.debug(f"Found {len(found)} congruences on {s.size} elements")
    return found


def congruence_generated_by(s: FiniteSemilattice, pairs) -> Congruence:
    """Least congruence containing the given pairs."""
    rows = list(rel.from_pairs(s.carrier, pairs).rows)
    current = rel.BinaryRelation(s.carrier, tuple(rows))
    while True:
        symmetric = rel.union([current, rel.transpose(current)])
        closed = rel.reflexive_transitive_closure(symmetric)
        extra = [
            (s.join[a][c], s.join[b][c])
            for a, b in closed.pairs()
            for c in range(s.size)
            if not closed.holds(s.join[a][c], s.join[b][c])
        ]
        if not extra:
            return Congruence(s, closed)
        current = rel.union([closed, rel.from_pairs(s.carrier, extra)])


def congruence_join(s: FiniteSemilattice, thetas: Sequence[Congruence]) -> Congruence:
    """Join in the congruence lattice; the empty join is the identity congruence."""
    pairs = [p for theta in thetas for p in theta.rel.pairs()]
    return congruence_generated_by(s, pairs)


def enumerate_compatible_preorders(
    s: FiniteSemilattice,
    strategy: PreorderStrategy = PreorderStrategy.FILTER,
    allow_large: bool = False,
) -> list[BinaryRelation]:
    """
    All compatible preorders on s in row-major key order.

    FILTER scans the relations containing the induced order, OMEGA maps
    the congruences through omega, CROSS_CHECK runs both and raises
    CrossCheckError unless they agree.
    """
    strategy = PreorderStrategy(strategy)
    if strategy is PreorderStrategy.FILTER:
        return rel.enumerate_relations_satisfying(
            s.carrier,
            lambda r: is_compatible_preorder(s, r),
            lower=s.order,
            allow_large=allow_large,
        )

    from app.services.correspondence import omega

    images = sorted(
        (omega(s, theta) for theta in enumerate_congruences(s, allow_large=allow_large)),
        key=rel.relation_key,
    )
    if strategy is PreorderStrategy.OMEGA:
        return images
    filtered = enumerate_compatible_preorders(s, PreorderStrategy.FILTER, allow_large)
    if filtered != images:
        missing = set(filtered) - set(images)
        extra = set(images) - set(filtered)
        raise CrossCheckError(
            f"Compatible preorder strategies disagree: {len(filtered)} by filtering, "
            f"{len(images)} as images ({len(missing)} only filtered, {len(extra)} only images)"
        )
    return filtered


def check_derived_monotonicity(ss: SpecializationSemilattice) -> bool:
    """a ⊑ b and a1 ⊑ b1 imply (a v a1) ⊑ (b v b1), over all quadruples."""
    s, spec = ss.base, ss.spec
    pairs = spec.pairs()
    for a, b in pairs:
        for a1, b1 in pairs:
            if not spec.holds(s.join[a][a1], s.join[b][b1]):
                logger.error(f"Derived monotonicity fails at ({a}, {a1}, {b}, {b1})")
                return False
    return True


def semilattice_from_order(order: BinaryRelation) -> Optional[FiniteSemilattice]:
    """Join table of a partial order, or None when some pair has no least upper bound."""
    n = order.size
    up = order.rows
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            bounds = up[a] & up[b]
            least = next((c for c in range(n) if bounds >> c & 1 and bounds & ~up[c] == 0), None)
            if least is None:
                return None
            table[a][b] = table[b][a] = least
    return validate_semilattice(order.carrier, table)


def enumerate_posets(n: int, allow_large: bool = False) -> list[BinaryRelation]:
    """Labelled partial orders on n elements, row-major key order."""
    if n > settings.MAX_UNRESTRICTED_SIZE and not allow_large:
        raise EnumerationLimitError(
            f"Poset enumeration on {n} elements exceeds MAX_UNRESTRICTED_SIZE="
            f"{settings.MAX_UNRESTRICTED_SIZE}"
        )
    carrier = Carrier(n)
    return rel.enumerate_relations_satisfying(
        carrier, rel.is_partial_order, lower=rel.identity(carrier), allow_large=True
    )


def enumerate_semilattices(
    n: int, up_to_iso: bool = False, allow_large: bool = False
) -> list[FiniteSemilattice]:
    """
    Join semilattices on n labelled elements, derived from the partial
    orders on n elements in which every pair has a least upper bound.
    With up_to_iso only the first member of each isomorphism class is kept.
    """
    found = []
    for order in enumerate_posets(n, allow_large=allow_large):
        s = semilattice_from_order(order)
        if s is None:
            continue
        if up_to_iso and any(next(enumerate_isomorphisms(t, s), None) for t in found):
            continue
        found.append(s)
    logger.info(f"Enumerated {len(found)} semilattices on {n} elements (up_to_iso={up_to_iso})")
    return found


def hom_violation(h: SemilatticeHom) -> Optional[tuple[int, int]]:
    dom, cod, f = h.dom, h.cod, h.map
    for a in range(dom.size):
        for b in range(a, dom.size):
            if f[dom.join[a][b]] != cod.join[f[a]][f[b]]:
                return a, b
    return None


def is_semilattice_hom(h: SemilatticeHom) -> bool:
    return hom_violation(h) is None


def require_hom(h: SemilatticeHom) -> SemilatticeHom:
    witness = hom_violation(h)
    if witness is not None:
        a, b = witness
        raise InvalidStructureError(
            f"Map does not preserve joins at ({a}, {b})", witness
        )
    return h


def _map_budget(dom: FiniteSemilattice, cod: FiniteSemilattice, allow_large: bool):
    count = cod.size ** dom.size
    if count > settings.MAX_MAP_COUNT and not allow_large:
        raise EnumerationLimitError(
            f"{count} candidate maps exceed MAX_MAP_COUNT={settings.MAX_MAP_COUNT}"
        )


def enumerate_homs(
    dom: FiniteSemilattice, cod: FiniteSemilattice, allow_large: bool = False
) -> list[SemilatticeHom]:
    _map_budget(dom, cod, allow_large)
    homs = []
    for images in itertools.product(range(cod.size), repeat=dom.size):
        h = SemilatticeHom(dom, cod, images)
        if is_semilattice_hom(h):
            homs.append(h)
    return homs


def enumerate_surjective_homs(
    dom: FiniteSemilattice, cod: FiniteSemilattice, allow_large: bool = False
) -> list[SemilatticeHom]:
    return [h for h in enumerate_homs(dom, cod, allow_large) if h.is_surjective]


def _invariants(s: FiniteSemilattice) -> list[tuple]:
    order = s.order
    below = [row.bit_count() for row in rel.transpose(order).rows]
    # down-set size, up-set size, down-set sizes along the join row
    return [
        (below[a], order.rows[a].bit_count(), tuple(sorted(below[c] for c in s.join[a])))
        for a in range(s.size)
    ]


def enumerate_isomorphisms(s1: FiniteSemilattice, s2: FiniteSemilattice) -> Iterator[tuple[int, ...]]:
    """
    Semilattice isomorphisms s1 -> s2 as image tuples, lexicographically
    increasing. Candidates are pruned by down-set and up-set sizes
    and by the multiset of down-set sizes along each join row.
    """
    n = s1.size
    if n != s2.size:
        return
    inv1, inv2 = _invariants(s1), _invariants(s2)
    if sorted(inv1) != sorted(inv2):
        return
    image = [-1] * n
    used = [False] * n

    def consistent(a: int) -> bool:
        for b in range(a + 1):
            ab = s1.join[a][b]
            if ab <= a and image[ab] != s2.join[image[a]][image[b]]:
                return False
        return True

    def extend(a: int):
        if a == n:
            if all(image[s1.join[x][y]] == s2.join[image[x]][image[y]] for x in range(n) for y in range(n)):
                yield tuple(image)
            return
        for v in range(n):
            if used[v] or inv1[a] != inv2[v]:
                continue
            image[a], used[v] = v, True
            if consistent(a):
                yield from extend(a + 1)
            image[a], used[v] = -1, False

    yield from extend(0)


def is_isomorphism(s1: FiniteSemilattice, s2: FiniteSemilattice, images: Sequence[int]) -> bool:
    n = s1.size
    if n != s2.size or sorted(images) != list(range(n)):
        return False
    return all(images[s1.join[a][b]] == s2.join[images[a]][images[b]] for a in range(n) for b in range(n))

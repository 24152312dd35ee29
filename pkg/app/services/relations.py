from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

import networkx as nx

from app.config import settings

logger = logging.getLogger(__name__)


class CarrierMismatchError(ValueError):
    """Raised when relations over different carriers are combined."""


class EnumerationLimitError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed a configured guard."""


@dataclass(frozen=True)
class Carrier:
    """
    Finite carrier 0..size-1.
    Names are for display only and do not take part in equality.
    """
    size: int
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"Carrier size must be at least 1, got {self.size}")
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(self.size)))
            return
        names = tuple(self.names)
        if len(names) != self.size:
            raise ValueError(f"Expected {self.size} names, got {len(names)}")
        if any(not name for name in names):
            raise ValueError("Element names must be non-empty")
        if any("#" in name or any(c.isspace() for c in name) for name in names):
            raise ValueError(f"Element names must not contain whitespace or '#': {names}")
        if len(set(names)) != len(names):
            raise ValueError(f"Element names must be distinct: {names}")
        object.__setattr__(self, "names", names)

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def has_default_names(self) -> bool:
        return self.names == tuple(str(i) for i in range(self.size))


@dataclass(frozen=True)
class BinaryRelation:
    """
    Boolean matrix over a carrier, stored as packed rows:
    bit j of rows[i] is set iff i relates to j.
    """
    carrier: Carrier
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.carrier.size:
            raise ValueError(
                f"Relation has {len(self.rows)} rows for a carrier of size {self.carrier.size}"
            )
        full = (1 << self.carrier.size) - 1
        for i, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"Row {i} has bits outside the carrier")

    @property
    def size(self) -> int:
        return self.carrier.size

    def holds(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    @property
    def bits(self) -> tuple[tuple[bool, ...], ...]:
        n = self.size
        return tuple(tuple(bool(row >> j & 1) for j in range(n)) for row in self.rows)

    def pairs(self) -> list[tuple[int, int]]:
        n = self.size
        return [(i, j) for i in range(n) for j in range(n) if self.rows[i] >> j & 1]

    def successors(self, i: int) -> list[int]:
        return [j for j in range(self.size) if self.rows[i] >> j & 1]

    def __len__(self) -> int:
        return sum(row.bit_count() for row in self.rows)


def _full_row(n: int) -> int:
    return (1 << n) - 1


def check_same_carrier(*relations: BinaryRelation) -> Carrier:
    carrier = relations[0].carrier
    for r in relations[1:]:
        if r.carrier != carrier:
            raise CarrierMismatchError(
                f"Carrier mismatch: size {carrier.size} vs size {r.carrier.size}"
            )
    return carrier


def empty(carrier: Carrier) -> BinaryRelation:
    return BinaryRelation(carrier, (0,) * carrier.size)


def identity(carrier: Carrier) -> BinaryRelation:
    return BinaryRelation(carrier, tuple(1 << i for i in carrier.elements))


def total(carrier: Carrier) -> BinaryRelation:
    return BinaryRelation(carrier, (_full_row(carrier.size),) * carrier.size)


def from_pairs(carrier: Carrier, pairs: Iterable[tuple[int, int]]) -> BinaryRelation:
    rows = [0] * carrier.size
    for i, j in pairs:
        if not (0 <= i < carrier.size and 0 <= j < carrier.size):
            raise ValueError(f"Pair ({i}, {j}) is outside a carrier of size {carrier.size}")
        rows[i] |= 1 << j
    return BinaryRelation(carrier, tuple(rows))


def from_predicate(carrier: Carrier, related: Callable[[int, int], bool]) -> BinaryRelation:
    n = carrier.size
    return BinaryRelation(
        carrier,
        tuple(sum(1 << j for j in range(n) if related(i, j)) for i in range(n)),
    )


def from_partition(carrier: Carrier, blocks: Iterable[Iterable[int]]) -> BinaryRelation:
    """Equivalence relation whose classes are the given blocks."""
    rows = [0] * carrier.size
    seen = 0
    for block in blocks:
        mask = 0
        for a in block:
            mask |= 1 << a
        if mask & seen:
            raise ValueError("Partition blocks overlap")
        seen |= mask
        for a in block:
            rows[a] = mask
    if seen != _full_row(carrier.size):
        raise ValueError("Partition blocks do not cover the carrier")
    return BinaryRelation(carrier, tuple(rows))


def classes(r: BinaryRelation) -> list[list[int]]:
    """Blocks of an equivalence relation, each sorted, ordered by minimum element."""
    blocks: list[list[int]] = []
    assigned = 0
    for a in range(r.size):
        if assigned >> a & 1:
            continue
        block = r.successors(a)
        for b in block:
            assigned |= 1 << b
        blocks.append(block)
    return blocks


def transpose(r: BinaryRelation) -> BinaryRelation:
    n = r.size
    return BinaryRelation(
        r.carrier,
        tuple(sum(1 << i for i in range(n) if r.rows[i] >> j & 1) for j in range(n)),
    )


def relation_key(r: BinaryRelation) -> int:
    """Row-major bit string of the matrix read as a binary number, (0,0) most significant."""
    n = r.size
    key = 0
    for row in r.rows:
        for j in range(n):
            key = key << 1 | (row >> j & 1)
    return key


def relation_from_key(carrier: Carrier, key: int) -> BinaryRelation:
    n = carrier.size
    rows = []
    shift = n * n
    for _ in range(n):
        row = 0
        for j in range(n):
            shift -= 1
            if key >> shift & 1:
                row |= 1 << j
        rows.append(row)
    return BinaryRelation(carrier, tuple(rows))


def is_reflexive(r: BinaryRelation) -> bool:
    return all(r.rows[i] >> i & 1 for i in range(r.size))


def is_symmetric(r: BinaryRelation) -> bool:
    return r.rows == transpose(r).rows


def is_antisymmetric(r: BinaryRelation) -> bool:
    core = symmetric_core(r)
    return all(row == 1 << i or row == 0 for i, row in enumerate(core.rows))


def _compose_row(r: BinaryRelation, row: int) -> int:
    out = 0
    j = 0
    while row:
        if row & 1:
            out |= r.rows[j]
        row >>= 1
        j += 1
    return out


def is_transitive(r: BinaryRelation) -> bool:
    # r∘r ⊆ r, one boolean matrix product row at a time
    return all(_compose_row(r, row) & ~row == 0 for row in r.rows)


def is_preorder(r: BinaryRelation) -> bool:
    return is_reflexive(r) and is_transitive(r)


def is_partial_order(r: BinaryRelation) -> bool:
    return is_preorder(r) and is_antisymmetric(r)


def is_equivalence(r: BinaryRelation) -> bool:
    return is_preorder(r) and is_symmetric(r)


def is_coarser(fine: BinaryRelation, coarse: BinaryRelation) -> bool:
    """True iff fine ⊆ coarse."""
    check_same_carrier(fine, coarse)
    return all(f & ~c == 0 for f, c in zip(fine.rows, coarse.rows))


def intersect(relations: Sequence[BinaryRelation]) -> BinaryRelation:
    """Meet in the lattice of relations over one carrier."""
    if not relations:
        raise ValueError("intersect needs at least one relation")
    carrier = check_same_carrier(*relations)
    rows = list(relations[0].rows)
    for r in relations[1:]:
        rows = [a & b for a, b in zip(rows, r.rows)]
    return BinaryRelation(carrier, tuple(rows))


def union(relations: Sequence[BinaryRelation]) -> BinaryRelation:
    if not relations:
        raise ValueError("union needs at least one relation")
    carrier = check_same_carrier(*relations)
    rows = list(relations[0].rows)
    for r in relations[1:]:
        rows = [a | b for a, b in zip(rows, r.rows)]
    return BinaryRelation(carrier, tuple(rows))


def symmetric_core(r: BinaryRelation) -> BinaryRelation:
    """r ∩ rᵀ"""
    return BinaryRelation(r.carrier, tuple(a & b for a, b in zip(r.rows, transpose(r).rows)))


def reflexive_transitive_closure(r: BinaryRelation) -> BinaryRelation:
    rows = [row | 1 << i for i, row in enumerate(r.rows)]
    for k in range(r.size):
        for i in range(r.size):
            if rows[i] >> k & 1:
                rows[i] |= rows[k]
    return BinaryRelation(r.carrier, tuple(rows))


def transitive_reduction(order: BinaryRelation) -> BinaryRelation:
    """Hasse edges (covering pairs) of a partial order."""
    if not is_partial_order(order):
        raise ValueError("Transitive reduction is only defined here for partial orders")
    graph = nx.DiGraph()
    graph.add_nodes_from(range(order.size))
    graph.add_edges_from((i, j) for i, j in order.pairs() if i != j)
    reduced = nx.transitive_reduction(graph)
    return from_pairs(order.carrier, reduced.edges())


def _free_positions(n: int, lower: Optional[BinaryRelation]) -> list[int]:
    positions = range(n * n)
    if lower is None:
        return list(positions)
    return [p for p in positions if not lower.rows[p // n] >> (p % n) & 1]


def iter_relations_above(
    carrier: Carrier,
    lower: Optional[BinaryRelation] = None,
    *,
    allow_large: bool = False,
) -> Iterator[BinaryRelation]:
    """
    Every relation containing `lower` (all relations when lower is None),
    in increasing row-major key order.
    """
    n = carrier.size
    limit = settings.MAX_UNRESTRICTED_SIZE
    free = _free_positions(n, lower)
    if not allow_large and len(free) > limit * limit:
        raise EnumerationLimitError(
            f"{len(free)} free matrix cells exceed the MAX_UNRESTRICTED_SIZE={limit} guard"
        )
    base = 0 if lower is None else relation_key(lower)
    # least significant counter bit goes to the least significant key bit
    weights = [1 << (n * n - 1 - p) for p in reversed(free)]
    for counter in range(1 << len(free)):
        key = base
        t = 0
        while counter:
            if counter & 1:
                key |= weights[t]
            counter >>= 1
            t += 1
        yield relation_from_key(carrier, key)


def enumerate_relations_satisfying(
    carrier: Carrier,
    predicate: Callable[[BinaryRelation], bool],
    *,
    lower: Optional[BinaryRelation] = None,
    allow_large: bool = False,
) -> list[BinaryRelation]:
    """
    All relations on the carrier satisfying the predicate, in lexicographic
    order of their row-major bit strings. Passing `lower` restricts the
    search space to relations containing it.
    """
    if lower is None and carrier.size > settings.MAX_UNRESTRICTED_SIZE and not allow_large:
        raise EnumerationLimitError(
            f"Carrier size {carrier.size} exceeds MAX_UNRESTRICTED_SIZE="
            f"{settings.MAX_UNRESTRICTED_SIZE}"
        )
    found = [r for r in iter_relations_above(carrier, lower, allow_large=allow_large) if predicate(r)]
    logger.debug(f"Enumerated {len(found)} relations on {carrier.size} elements")
    return found

"""
Quotients of finite semilattices.

Composition convention: following the diagrammatic order used for
quotients, `phi ∘ chi` means "apply phi, then chi". A quotient
isomorphism chi: T -> T' therefore satisfies chi(phi(a)) = phi'(a) for
every a, and an arrow isomorphism (sigma, tau) between phi1 and phi2
satisfies tau(phi1(a)) = phi2(sigma(a)). Every commuting-square check in
this module reads maps in that order.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from app.config import settings
from app.schemas import CountReport, InstanceReport
from app.services import relations as rel
from app.services.correspondence import psi
from app.services.relations import BinaryRelation, Carrier, EnumerationLimitError
from app.services.semilattice import (
    Congruence,
    FiniteSemilattice,
    InvalidStructureError,
    SemilatticeHom,
    SpecializationSemilattice,
    congruence_violation,
    enumerate_compatible_preorders,
    enumerate_congruences,
    enumerate_homs,
    enumerate_isomorphisms,
    enumerate_semilattices,
    enumerate_surjective_homs,
    is_isomorphism,
    is_semilattice_hom,
    require_hom,
    validate_semilattice,
)
from app.utils.hash_utils import semilattice_fingerprint, short_id

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Quotient:
    source: FiniteSemilattice
    theta: Congruence
    classes: tuple[tuple[int, ...], ...]
    target: FiniteSemilattice
    projection: SemilatticeHom

    @property
    def arrow(self) -> ArrowObject:
        return ArrowObject(self.projection)


@dataclass(frozen=True)
class ArrowObject:
    """A surjective semilattice homomorphism, viewed as an object of the arrow category."""
    hom: SemilatticeHom

    def __post_init__(self):
        require_hom(self.hom)
        if not self.hom.is_surjective:
            raise InvalidStructureError("Arrow objects must be surjective homomorphisms")

    @property
    def dom(self) -> FiniteSemilattice:
        return self.hom.dom

    @property
    def cod(self) -> FiniteSemilattice:
        return self.hom.cod


def build_quotient(s: FiniteSemilattice, theta: Congruence) -> Quotient:
    """S/Θ with classes ordered by their least element and the canonical projection."""
    if theta.base != s:
        violation = congruence_violation(s, theta.rel)
        if violation is not None:
            raise InvalidStructureError(f"Not a congruence: {violation[0]}", violation[1])
    blocks = [tuple(block) for block in rel.classes(theta.rel)]
    index = [0] * s.size
    for k, block in enumerate(blocks):
        for a in block:
            index[a] = k
    table = [
        [index[s.join[b1[0]][b2[0]]] for b2 in blocks]
        for b1 in blocks
    ]
    names = tuple("{" + ",".join(s.carrier.names[a] for a in block) + "}" for block in blocks)
    target = validate_semilattice(Carrier(len(blocks), names), table)
    projection = SemilatticeHom(s, target, tuple(index))
    return Quotient(s, theta, tuple(blocks), target, projection)


def kernel(h: SemilatticeHom) -> Congruence:
    """Θ = {(a, b) | h(a) = h(b)}"""
    require_hom(h)
    return Congruence.unchecked(
        h.dom, rel.from_predicate(h.dom.carrier, lambda a, b: h.map[a] == h.map[b])
    )


def kernel_preorder(h: SemilatticeHom) -> BinaryRelation:
    """a ⊑ b iff h(a) <= h(b) in the codomain"""
    require_hom(h)
    order = h.cod.order
    return rel.from_predicate(h.dom.carrier, lambda a, b: order.holds(h.map[a], h.map[b]))


def represent(ss: SpecializationSemilattice) -> Quotient:
    """
    The quotient of the base semilattice by the symmetric core of ⊑; the
    kernel preorder of its projection is ⊑ again.
    """
    return build_quotient(ss.base, psi(ss.base, ss.spec))


def gamma(s: FiniteSemilattice, allow_large: bool = False) -> list[tuple[BinaryRelation, Quotient]]:
    return [
        (spec, build_quotient(s, psi(s, spec)))
        for spec in enumerate_compatible_preorders(s, allow_large=allow_large)
    ]


def quotient_isomorphic(q1: ArrowObject, q2: ArrowObject) -> Optional[tuple[int, ...]]:
    """
    The isomorphism chi: cod(q1) -> cod(q2) with chi(q1(a)) = q2(a) for all
    a, or None. Surjectivity of q1 leaves at most one candidate.
    """
    if q1.dom != q2.dom:
        raise ValueError("Quotient isomorphism needs quotients of the same semilattice")
    if q1.cod.size != q2.cod.size:
        return None
    chi = [-1] * q1.cod.size
    for a in range(q1.dom.size):
        x, y = q1.hom.map[a], q2.hom.map[a]
        if chi[x] == -1:
            chi[x] = y
        elif chi[x] != y:
            return None
    if not is_isomorphism(q1.cod, q2.cod, chi):
        return None
    return tuple(chi)


def arrow_isomorphic(
    q1: ArrowObject, q2: ArrowObject
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """
    Isomorphisms sigma: dom(q1) -> dom(q2) and tau: cod(q1) -> cod(q2) with
    tau(q1(a)) = q2(sigma(a)) for all a; the lexicographically least sigma
    that admits a tau is returned.
    """
    if q1.dom.size != q2.dom.size or q1.cod.size != q2.cod.size:
        return None
    for sigma in enumerate_isomorphisms(q1.dom, q2.dom):
        tau = [-1] * q1.cod.size
        ok = True
        for a in range(q1.dom.size):
            x, y = q1.hom.map[a], q2.hom.map[sigma[a]]
            if tau[x] == -1:
                tau[x] = y
            elif tau[x] != y:
                ok = False
                break
        if ok and is_isomorphism(q1.cod, q2.cod, tau):
            return sigma, tuple(tau)
    return None


def is_spec_hom(
    ss1: SpecializationSemilattice, ss2: SpecializationSemilattice, mapping: Sequence[int]
) -> bool:
    h = SemilatticeHom(ss1.base, ss2.base, tuple(mapping))
    if not is_semilattice_hom(h):
        return False
    return all(ss2.spec.holds(mapping[a], mapping[b]) for a, b in ss1.spec.pairs())


def is_con_hom(
    s1: FiniteSemilattice,
    theta1: Congruence,
    s2: FiniteSemilattice,
    theta2: Congruence,
    mapping: Sequence[int],
) -> bool:
    h = SemilatticeHom(s1, s2, tuple(mapping))
    if not is_semilattice_hom(h):
        return False
    return all(theta2.rel.holds(mapping[a], mapping[b]) for a, b in theta1.rel.pairs())


def commuting_square(
    h: SemilatticeHom, theta1: Congruence, theta2: Congruence
) -> Optional[tuple[int, ...]]:
    """
    The map chi: S1/Θ1 -> S2/Θ2 with chi(π1(a)) = π2(h(a)) for all a, when
    h is a homomorphism and such a map exists; None otherwise.
    """
    if not is_semilattice_hom(h):
        return None
    p1 = build_quotient(h.dom, theta1).projection
    p2 = build_quotient(h.cod, theta2).projection
    return induced_square_map(h, p1, p2)


def quotient_class_index(s: FiniteSemilattice, arrow: ArrowObject) -> Optional[int]:
    """
    Index, in enumerate_congruences order, of the congruence whose canonical
    projection is quotient-isomorphic to the arrow. That least-index
    congruence represents the arrow's class of quotients.
    """
    for k, theta in enumerate(enumerate_congruences(s)):
        if quotient_isomorphic(build_quotient(s, theta).arrow, arrow) is not None:
            return k
    return None


def _targets(max_size: int, up_to_iso: bool = False) -> list[FiniteSemilattice]:
    return [t for k in range(1, max_size + 1) for t in enumerate_semilattices(k, up_to_iso=up_to_iso)]


def _global_guard(max_size: int, allow_large: bool):
    if max_size > settings.MAX_GLOBAL_SIZE and not allow_large:
        raise EnumerationLimitError(
            f"Size bound {max_size} exceeds MAX_GLOBAL_SIZE={settings.MAX_GLOBAL_SIZE}"
        )


def verify_corollary_2_3(s: FiniteSemilattice, allow_large: bool = False) -> CountReport:
    """
    Gamma is injective on iso-classes (its quotients are pairwise not
    quotient-isomorphic) and surjective (every surjective hom from s onto a
    semilattice of at most |s| elements, one per isomorphism type, is quotient-isomorphic to
    some gamma quotient). Quotient isomorphism is also checked to imply
    arrow isomorphism.
    """
    pairs = gamma(s, allow_large=allow_large)
    arrows = [q.arrow for _, q in pairs]
    report = CountReport(
        subject=short_id(semilattice_fingerprint(s)),
        left_label="compatible preorders",
        right_label="quotient classes",
        left_count=len(pairs),
        right_count=0,
    )
    representatives: list[ArrowObject] = []
    for i, arrow in enumerate(arrows):
        if any(quotient_isomorphic(r, arrow) is not None for r in representatives):
            report.failures.append(f"gamma quotients collide at preorder {i}")
        else:
            representatives.append(arrow)
    report.right_count = len(representatives)

    for a1, a2 in itertools.product(arrows, repeat=2):
        if quotient_isomorphic(a1, a2) is not None and arrow_isomorphic(a1, a2) is None:
            report.failures.append("quotient isomorphism without arrow isomorphism")

    for t in _targets(s.size, up_to_iso=True):
        for h in enumerate_surjective_homs(s, t, allow_large=allow_large):
            report.checked += 1
            arrow = ArrowObject(h)
            if not any(quotient_isomorphic(r, arrow) is not None for r in representatives):
                report.failures.append(f"surjection {list(h.map)} matches no gamma quotient")
    return report


def verify_corollary_2_4(s: FiniteSemilattice, allow_large: bool = False) -> InstanceReport:
    """
    Every compatible preorder is the kernel preorder of its representation,
    and every kernel preorder of a hom into a small semilattice is compatible.
    """
    report = InstanceReport(subject=short_id(semilattice_fingerprint(s)))
    for spec in enumerate_compatible_preorders(s, allow_large=allow_large):
        report.checked += 1
        q = represent(SpecializationSemilattice(s, spec))
        recovered = kernel_preorder(q.projection)
        if recovered != spec:
            report.failures.append(f"representation recovers a different preorder for {spec.pairs()}")
    for t in enumerate_semilattices(min(s.size, 3), up_to_iso=True):
        for h in enumerate_homs(s, t, allow_large=allow_large):
            report.checked += 1
            try:
                SpecializationSemilattice(s, kernel_preorder(h))
            except InvalidStructureError as e:
                report.failures.append(f"kernel preorder of {list(h.map)} is not compatible: {e}")
    return report


def enumerate_specialization_semilattices(max_size: int) -> list[SpecializationSemilattice]:
    return [
        SpecializationSemilattice(s, spec)
        for s in _targets(max_size)
        for spec in enumerate_compatible_preorders(s)
    ]


def verify_corollary_2_5(max_size: int = 3, allow_large: bool = False) -> InstanceReport:
    """is_spec_hom agrees with is_con_hom under psi for every map between every pair."""
    _global_guard(max_size, allow_large)
    report = InstanceReport(subject=f"specialization semilattices up to {max_size} elements")
    objects = enumerate_specialization_semilattices(max_size)
    images = [psi(ss.base, ss.spec) for ss in objects]
    for (ss1, t1), (ss2, t2) in itertools.product(list(zip(objects, images)), repeat=2):
        for mapping in itertools.product(range(ss2.base.size), repeat=ss1.base.size):
            report.checked += 1
            if is_spec_hom(ss1, ss2, mapping) != is_con_hom(ss1.base, t1, ss2.base, t2, mapping):
                report.failures.append(f"morphism mismatch for map {list(mapping)}")
    logger.info(f"Checked {report.checked} maps between {len(objects)} specialization semilattices")
    return report


def verify_remark_2_6(max_size: int = 3, allow_large: bool = False) -> InstanceReport:
    """
    Every surjective hom is arrow-isomorphic to the canonical projection of
    its kernel, and a map is a morphism of semilattices with a congruence
    exactly when it is a hom closing a commuting square of projections.
    """
    _global_guard(max_size, allow_large)
    report = InstanceReport(subject=f"semilattice surjections up to {max_size} elements")
    labelled = _targets(max_size)
    for s1, s2 in itertools.product(labelled, repeat=2):
        if s2.size > s1.size:
            continue
        for h in enumerate_surjective_homs(s1, s2):
            report.checked += 1
            canonical = build_quotient(s1, kernel(h)).arrow
            if arrow_isomorphic(ArrowObject(h), canonical) is None:
                report.failures.append(f"surjection {list(h.map)} is not isomorphic to its projection")

    for s1, s2 in itertools.product(_targets(max_size, up_to_iso=True), repeat=2):
        for theta1 in enumerate_congruences(s1):
            for theta2 in enumerate_congruences(s2):
                for mapping in itertools.product(range(s2.size), repeat=s1.size):
                    report.checked += 1
                    h = SemilatticeHom(s1, s2, mapping)
                    square = commuting_square(h, theta1, theta2) is not None
                    if square != is_con_hom(s1, theta1, s2, theta2, mapping):
                        report.failures.append(f"commuting-square mismatch for map {list(mapping)}")
    return report


def induced_square_map(h: SemilatticeHom, q1: SemilatticeHom, q2: SemilatticeHom) -> Optional[tuple[int, ...]]:
    """chi with chi(q1(a)) = q2(h(a)) for all a, when h respects the kernel of q1."""
    chi = [-1] * q1.cod.size
    for a in range(h.dom.size):
        x, y = q1.map[a], q2.map[h.map[a]]
        if chi[x] == -1:
            chi[x] = y
        elif chi[x] != y:
            return None
    return tuple(chi)


def verify_corollary_2_7(max_size: int = 3, allow_large: bool = False) -> InstanceReport:
    """
    A carrier map is a morphism of specialization semilattices exactly when
    it is a semilattice hom whose square over the two representations
    closes with a semilattice hom between the targets.
    """
    _global_guard(max_size, allow_large)
    report = InstanceReport(subject=f"specialization semilattices up to {max_size} elements")
    objects = enumerate_specialization_semilattices(max_size)
    projections = [represent(ss).projection for ss in objects]
    for (ss1, q1), (ss2, q2) in itertools.product(list(zip(objects, projections)), repeat=2):
        for mapping in itertools.product(range(ss2.base.size), repeat=ss1.base.size):
            report.checked += 1
            h = SemilatticeHom(ss1.base, ss2.base, mapping)
            square = False
            if is_semilattice_hom(h):
                chi = induced_square_map(h, q1, q2)
                square = chi is not None and is_semilattice_hom(SemilatticeHom(q1.cod, q2.cod, chi))
            if square != is_spec_hom(ss1, ss2, mapping):
                report.failures.append(f"epimorphism square mismatch for map {list(mapping)}")
    logger.info(f"Checked {report.checked} maps between {len(objects)} specialization semilattices")
    return report

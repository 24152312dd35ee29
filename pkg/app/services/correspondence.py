"""
The maps between compatible preorders and congruences of a semilattice.

psi sends a compatible preorder to its symmetric core; omega sends a
congruence Θ to the preorder a ⊑ b iff (a v b) Θ b. The two are mutually
inverse and psi preserves arbitrary meets, so they are complete lattice
isomorphisms; verify_theorem_2_1 checks all of this on one semilattice.
"""
from __future__ import annotations

import itertools
import logging
from typing import Optional, Sequence

from app.config import settings
from app.schemas import CorrespondenceReport
from app.services import relations as rel
from app.services.relations import BinaryRelation
from app.services.semilattice import (
    Congruence,
    FiniteSemilattice,
    InvalidStructureError,
    compatibility_violation,
    congruence_join,
    congruence_violation,
    enumerate_compatible_preorders,
    enumerate_congruences,
    is_compatible_preorder,
)
from app.utils.hash_utils import semilattice_fingerprint, short_id

logger = logging.getLogger(__name__)


def _require_compatible(s: FiniteSemilattice, spec: BinaryRelation):
    violation = compatibility_violation(s, spec)
    if violation is not None:
        message, witness = violation
        raise InvalidStructureError(f"Not a compatible preorder: {message}", witness)


def psi(s: FiniteSemilattice, spec: BinaryRelation) -> Congruence:
    _require_compatible(s, spec)
    core = rel.symmetric_core(spec)
    if settings.DEBUG:
        return Congruence(s, core)
    return Congruence.unchecked(s, core)


def omega(s: FiniteSemilattice, theta: Congruence) -> BinaryRelation:
    if theta.base != s:
        violation = congruence_violation(s, theta.rel)
        if violation is not None:
            raise InvalidStructureError(f"Not a congruence: {violation[0]}", violation[1])
    t = theta.rel
    image = rel.from_predicate(s.carrier, lambda a, b: t.holds(s.join[a][b], b))
    if settings.DEBUG:
        _require_compatible(s, image)
    return image


def monotone_pair_check(s: FiniteSemilattice, spec1: BinaryRelation, spec2: BinaryRelation) -> bool:
    """spec1 ⊆ spec2 iff psi(spec1) ⊆ psi(spec2)"""
    return rel.is_coarser(spec1, spec2) == rel.is_coarser(psi(s, spec1).rel, psi(s, spec2).rel)


def preorder_join(
    s: FiniteSemilattice,
    specs: Sequence[BinaryRelation],
    candidates: Optional[Sequence[BinaryRelation]] = None,
) -> BinaryRelation:
    """
    Join of compatible preorders, taken as the meet of every compatible
    preorder containing all of them. The empty join is the induced order.
    Pass the already enumerated compatible preorders as `candidates` to
    skip the search.
    """
    for spec in specs:
        _require_compatible(s, spec)
    lower = rel.union([s.order, *specs])
    if candidates is None:
        bounds = rel.enumerate_relations_satisfying(
            s.carrier, lambda r: is_compatible_preorder(s, r), lower=lower
        )
    else:
        bounds = [r for r in candidates if rel.is_coarser(lower, r)]
    return rel.intersect(bounds)


def _describe(r: BinaryRelation) -> str:
    return "{" + ", ".join(f"({a},{b})" for a, b in r.pairs() if a != b) + "}"


def verify_theorem_2_1(s: FiniteSemilattice, allow_large: bool = False) -> CorrespondenceReport:
    """
    Check that psi and omega are inverse bijections between compatible
    preorders and congruences, that psi preserves meets of every subset of
    at most MAX_MEET_SUBSET preorders plus the meet of all of them, that
    psi preserves binary joins, and that both directions respect inclusion.
    """
    preorders = enumerate_compatible_preorders(s, allow_large=allow_large)
    congruences = enumerate_congruences(s, allow_large=allow_large)
    report = CorrespondenceReport(
        subject=short_id(semilattice_fingerprint(s)),
        preorder_count=len(preorders),
        congruence_count=len(congruences),
    )

    images = [psi(s, spec) for spec in preorders]
    for spec, theta in zip(preorders, images):
        back = omega(s, theta)
        if back != spec:
            report.round_trip_failures.append(f"omega(psi({_describe(spec)})) = {_describe(back)}")
    for theta in congruences:
        back = psi(s, omega(s, theta))
        if back.rel != theta.rel:
            report.round_trip_failures.append(
                f"psi(omega({_describe(theta.rel)})) = {_describe(back.rel)}"
            )
    if {t.rel for t in images} != {t.rel for t in congruences} or len(set(images)) != len(images):
        report.round_trip_failures.append("psi is not a bijection onto the congruences")

    subsets = [
        combo
        for k in range(1, min(settings.MAX_MEET_SUBSET, len(preorders)) + 1)
        for combo in itertools.combinations(range(len(preorders)), k)
    ]
    subsets.append(tuple(range(len(preorders))))
    for combo in subsets:
        meet = rel.intersect([preorders[i] for i in combo])
        if not is_compatible_preorder(s, meet):
            report.meet_failures.append(f"meet of {list(combo)} is not compatible")
            continue
        expected = rel.intersect([images[i].rel for i in combo])
        if psi(s, meet).rel != expected:
            report.meet_failures.append(f"psi does not preserve the meet of {list(combo)}")

    for i, j in itertools.combinations(range(len(preorders)), 2):
        joined = preorder_join(s, [preorders[i], preorders[j]], candidates=preorders)
        expected = congruence_join(s, [images[i], images[j]])
        if psi(s, joined).rel != expected.rel:
            report.join_failures.append(f"psi does not preserve the join of [{i}, {j}]")
        if not (monotone_pair_check(s, preorders[i], preorders[j]) and monotone_pair_check(s, preorders[j], preorders[i])):
            report.order_failures.append(f"inclusion is not reflected between [{i}, {j}]")

    if report.passed:
        logger.info(f"Correspondence verified on {report.subject}: {report.preorder_count} preorders")
    else:
        logger.error(f"Correspondence failed on {report.subject}")
    return report

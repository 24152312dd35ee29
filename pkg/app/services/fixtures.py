"""Built-in example structures with their expected answers."""
import logging

from app.schemas import FixtureReport
from app.services import relations as rel
from app.services.poset_spec import (
    FinitePoset,
    SpecializationPoset,
    compatible_preorder_count_poset,
    enumerate_compatible_preorders_poset,
    enumerate_surjective_monotone_classes,
    equivalence_count,
    poset_quotient,
    poset_quotient_isomorphic,
)
from app.services.quotient import arrow_isomorphic, build_quotient, quotient_isomorphic
from app.services.relations import Carrier
from app.services.semilattice import Congruence, FiniteSemilattice, congruence_from_partition, validate_semilattice

logger = logging.getLogger(__name__)

A1, A2, B1, B2, C = range(5)


def two_chain_fork() -> FiniteSemilattice:
    """a1 < a2 < c and b1 < b2 < c, with every a v b equal to c."""
    carrier = Carrier(5, ("a1", "a2", "b1", "b2", "c"))
    return validate_semilattice(carrier, [
        [A1, A2, C, C, C],
        [A2, A2, C, C, C],
        [C, C, B1, B2, C],
        [C, C, B2, B2, C],
        [C, C, C, C, C],
    ])


def fork_congruences(s: FiniteSemilattice) -> tuple[Congruence, Congruence]:
    """Θ collapses {a1, a2}; Θ′ collapses {b1, b2}."""
    theta = congruence_from_partition(s, [[A1, A2], [B1], [B2], [C]])
    theta_prime = congruence_from_partition(s, [[A1], [A2], [B1, B2], [C]])
    return theta, theta_prime


def two_chain() -> FiniteSemilattice:
    return validate_semilattice(Carrier(2), [[0, 1], [1, 1]])


def two_antichain() -> FinitePoset:
    carrier = Carrier(2, ("a", "b"))
    return FinitePoset(carrier, rel.identity(carrier))


def _yes_no(flag: bool) -> str:
    return "YES" if flag else "NO"


def run_remark_2_8() -> FixtureReport:
    s = two_chain_fork()
    theta, theta_prime = fork_congruences(s)
    q = build_quotient(s, theta).arrow
    q_prime = build_quotient(s, theta_prime).arrow
    actual = {
        "quotient-isomorphic": _yes_no(quotient_isomorphic(q, q_prime) is not None),
        "arrow-isomorphic": _yes_no(arrow_isomorphic(q, q_prime) is not None),
    }
    expected = {"quotient-isomorphic": "NO", "arrow-isomorphic": "YES"}
    logger.debug(f"remark 2.8 fixture: {actual}")
    return FixtureReport(name="remark 2.8", expected=expected, actual=actual)


def run_remark_3_3() -> FixtureReport:
    p = two_antichain()
    classes = enumerate_surjective_monotone_classes(p)
    preorders = enumerate_compatible_preorders_poset(p)
    matched = all(
        sum(poset_quotient_isomorphic(m, poset_quotient(SpecializationPoset(p, spec))[1]) is not None for m in classes) == 1
        for spec in preorders
    )
    actual = {
        "classes": str(len(classes)),
        "equivalences": str(equivalence_count(p.size)),
        "preorders": str(compatible_preorder_count_poset(p)),
        "bijection": _yes_no(matched and len(classes) == len(preorders)),
    }
    expected = {"classes": "4", "equivalences": "2", "preorders": "4", "bijection": "YES"}
    logger.debug(f"remark 3.3 fixture: {actual}")
    return FixtureReport(name="remark 3.3", expected=expected, actual=actual)


FIXTURES = {
    "2.8": run_remark_2_8,
    "3.3": run_remark_3_3,
}

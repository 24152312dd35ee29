import logging
from typing import List

from app.config import settings
from app.services import relations as rel
from app.services.cache import cache
from app.services.correspondence import verify_theorem_2_1
from app.services.poset_spec import FinitePoset, verify_poset_representation, verify_proposition_3_2
from app.services.quotient import (
    verify_corollary_2_3,
    verify_corollary_2_4,
    verify_corollary_2_5,
    verify_corollary_2_7,
    verify_remark_2_6,
)
from app.services.relational_model import (
    FiniteStructure,
    Signature,
    verify_congruence_specialization,
    verify_prop_3_5,
)
from app.services.relations import Carrier
from app.services.semilattice import validate_semilattice
from app.utils.hash_utils import calculate_table_hash, semilattice_fingerprint, short_id
from app.workers.celery_app import celery_app

logger = logging.getLogger(__name__)

SEMILATTICE_VERIFIERS = {
    "2.1": verify_theorem_2_1,
    "2.3": verify_corollary_2_3,
    "2.4": verify_corollary_2_4,
    "3.5": verify_congruence_specialization,
}

POSET_VERIFIERS = {
    "3.1": verify_poset_representation,
    "3.2": verify_proposition_3_2,
}

GLOBAL_VERIFIERS = {
    "2.5": verify_corollary_2_5,
    "2.6": verify_remark_2_6,
    "2.7": verify_corollary_2_7,
}


def _carrier(payload: dict) -> Carrier:
    return Carrier(payload["n"], tuple(payload.get("names") or ()))


@celery_app.task(bind=True, name="semicon.verify_semilattice")
def verify_semilattice(self, theorem: str, payload: dict) -> dict:
    """
    Run one per-semilattice verifier. payload = {"n", "names", "join"}.
    Reports are cached by structure fingerprint when the cache is enabled.
    """
    s = validate_semilattice(_carrier(payload), payload["join"])
    fingerprint = semilattice_fingerprint(s)
    cached = cache.get_report(theorem, fingerprint)
    if cached:
        logger.debug(f"Report cache hit for {theorem} on {short_id(fingerprint)}")
        return cached
    try:
        report = SEMILATTICE_VERIFIERS[theorem](s).model_dump(mode="json")
    except Exception as e:
        logger.error(f"Verifier {theorem} crashed on {short_id(fingerprint)}: {e}")
        raise
    cache.set_report(theorem, fingerprint, report)
    return report


@celery_app.task(bind=True, name="semicon.verify_poset")
def verify_poset(self, theorem: str, payload: dict) -> dict:
    """payload = {"n", "names", "rows"} with rows the packed order rows."""
    carrier = _carrier(payload)
    p = FinitePoset(carrier, rel.BinaryRelation(carrier, tuple(payload["rows"])))
    fingerprint = calculate_table_hash(f"poset{p.size}", [payload["rows"]])
    cached = cache.get_report(theorem, fingerprint)
    if cached:
        return cached
    report = POSET_VERIFIERS[theorem](p).model_dump(mode="json")
    cache.set_report(theorem, fingerprint, report)
    return report


@celery_app.task(bind=True, name="semicon.verify_structure")
def verify_structure(self, payload: dict) -> dict:
    """
    payload = {"n", "relations": [[name, arity], ...], "functions": [[name, arity], ...],
    "tuples": [[tuple, ...] per relation], "tables": [table per function]}
    """
    signature = Signature(
        tuple((name, arity) for name, arity in payload["relations"]),
        tuple((name, arity) for name, arity in payload["functions"]),
    )
    a = FiniteStructure(
        signature,
        _carrier(payload),
        tuple(frozenset(tuple(t) for t in tuples) for tuples in payload["tuples"]),
        tuple(tuple(table) for table in payload["tables"]),
    )
    return verify_prop_3_5(a, allow_large=True).model_dump(mode="json")


@celery_app.task(bind=True, name="semicon.verify_global")
def verify_global(self, theorem: str, max_size: int) -> dict:
    logger.info(f"Running {theorem} over structures up to {max_size} elements")
    return GLOBAL_VERIFIERS[theorem](max_size).model_dump(mode="json")


def semilattice_payload(s) -> dict:
    return {"n": s.size, "names": list(s.carrier.names), "join": [list(row) for row in s.join]}


def poset_payload(p) -> dict:
    return {"n": p.size, "names": list(p.carrier.names), "rows": list(p.order.rows)}


def structure_payload(a) -> dict:
    return {
        "n": a.size,
        "names": list(a.carrier.names),
        "relations": [list(sym) for sym in a.signature.relations],
        "functions": [list(sym) for sym in a.signature.functions],
        "tuples": [[list(t) for t in sorted(tuples)] for tuples in a.relations],
        "tables": [list(table) for table in a.functions],
    }


def collect(results: List) -> List[dict]:
    """Wait for dispatched tasks in submission order."""
    timeout = None if settings.SWEEP_EAGER else 3600
    return [r.get(timeout=timeout) for r in results]

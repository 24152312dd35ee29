import pytest

from app.config import settings
from app.services import relations as rel
from app.services.fixtures import A1, A2, B1, B2, C, fork_congruences, two_chain, two_chain_fork
from app.services.quotient import (
    ArrowObject,
    arrow_isomorphic,
    build_quotient,
    commuting_square,
    gamma,
    kernel,
    kernel_preorder,
    quotient_class_index,
    quotient_isomorphic,
    represent,
    verify_corollary_2_3,
    verify_corollary_2_4,
    verify_corollary_2_5,
    verify_corollary_2_7,
    verify_remark_2_6,
)
from app.services.semilattice import (
    InvalidStructureError,
    SemilatticeHom,
    SpecializationSemilattice,
    enumerate_compatible_preorders,
    enumerate_congruences,
    enumerate_semilattices,
    identity_congruence,
    total_congruence,
    validate_semilattice,
)
from app.services.relations import Carrier, EnumerationLimitError


def test_fork_quotient_shape():
    s = two_chain_fork()
    theta, _ = fork_congruences(s)
    q = build_quotient(s, theta)
    assert q.target.size == 4
    assert q.target.carrier.names == ("{a1,a2}", "{b1}", "{b2}", "{c}")
    assert q.projection.map == (0, 0, 1, 2, 3)
    assert q.classes == ((A1, A2), (B1,), (B2,), (C,))
    assert kernel(q.projection).rel == theta.rel


def test_total_and_identity_quotients():
    s = two_chain_fork()
    assert build_quotient(s, total_congruence(s)).target.size == 1
    q = build_quotient(s, identity_congruence(s))
    assert q.projection.map == (0, 1, 2, 3, 4)
    assert quotient_isomorphic(q.arrow, q.arrow) == (0, 1, 2, 3, 4)


def test_representation_recovers_every_preorder():
    s = two_chain_fork()
    for spec in enumerate_compatible_preorders(s):
        q = represent(SpecializationSemilattice(s, spec))
        assert kernel_preorder(q.projection) == spec


def test_fork_quotients_are_arrow_but_not_quotient_isomorphic():
    s = two_chain_fork()
    theta, theta_prime = fork_congruences(s)
    q = build_quotient(s, theta).arrow
    q_prime = build_quotient(s, theta_prime).arrow
    assert quotient_isomorphic(q, q_prime) is None
    assert arrow_isomorphic(q, q_prime) == ((2, 3, 0, 1, 4), (2, 0, 1, 3))


def test_quotient_isomorphism_needs_shared_source():
    chain = two_chain()
    other = validate_semilattice(Carrier(3), [[0, 1, 2], [1, 1, 2], [2, 2, 2]])
    with pytest.raises(ValueError):
        quotient_isomorphic(
            build_quotient(chain, identity_congruence(chain)).arrow,
            build_quotient(other, identity_congruence(other)).arrow,
        )


def test_arrow_objects_are_surjective_homs():
    chain = two_chain()
    with pytest.raises(InvalidStructureError):
        ArrowObject(SemilatticeHom(chain, chain, (0, 0)))
    with pytest.raises(InvalidStructureError):
        ArrowObject(SemilatticeHom(chain, chain, (1, 0)))


def test_gamma_lists_one_quotient_per_preorder():
    s = two_chain_fork()
    pairs = gamma(s)
    assert len(pairs) == len(enumerate_congruences(s))
    for spec, q in pairs:
        assert kernel_preorder(q.projection) == spec


def test_quotient_class_index_finds_representative():
    s = two_chain_fork()
    congruences = enumerate_congruences(s)
    for k, theta in enumerate(congruences):
        assert quotient_class_index(s, build_quotient(s, theta).arrow) == k


def test_commuting_square_on_identity_map():
    s = two_chain_fork()
    theta, theta_prime = fork_congruences(s)
    h = SemilatticeHom(s, s, (0, 1, 2, 3, 4))
    assert commuting_square(h, theta, theta) == (0, 1, 2, 3)
    assert commuting_square(h, identity_congruence(s), theta) == (0, 0, 1, 2, 3)
    assert commuting_square(h, theta, theta_prime) is None
    swap = SemilatticeHom(s, s, (2, 3, 0, 1, 4))
    assert commuting_square(swap, theta, theta_prime) == (2, 0, 1, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_corollary_2_3_on_small_semilattices(n):
    for s in enumerate_semilattices(n, up_to_iso=True):
        report = verify_corollary_2_3(s)
        assert report.passed, report.model_dump()
        assert report.left_count == report.right_count


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_corollary_2_4_sweep(n):
    for s in enumerate_semilattices(n):
        assert verify_corollary_2_4(s).passed


def test_corollary_2_4_on_fork():
    report = verify_corollary_2_4(two_chain_fork())
    assert report.passed
    assert report.checked > 0


def test_corollary_2_5_all_maps():
    report = verify_corollary_2_5(3)
    assert report.passed, report.failures[:5]
    assert report.checked > 0


def test_remark_2_6_instances():
    report = verify_remark_2_6(3)
    assert report.passed, report.failures[:5]


def test_corollary_2_7_squares():
    report = verify_corollary_2_7(2)
    assert report.passed, report.failures[:5]


def test_kernel_preorder_of_constant_map_is_total():
    s = two_chain_fork()
    chain = two_chain()
    h = SemilatticeHom(s, chain, (1,) * 5)
    assert kernel_preorder(h) == rel.total(s.carrier)


@pytest.mark.parametrize("verifier", [verify_corollary_2_5, verify_remark_2_6, verify_corollary_2_7])
def test_whole_corpus_checks_respect_size_guard(monkeypatch, verifier):
    with pytest.raises(EnumerationLimitError):
        verifier(4)
    monkeypatch.setattr(settings, "MAX_GLOBAL_SIZE", 1)
    with pytest.raises(EnumerationLimitError):
        verifier(2)
    assert verifier(2, allow_large=True).passed

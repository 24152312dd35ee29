import itertools

import pytest

from app.config import settings
from app.services import relations as rel
from app.services.fixtures import A1, A2, B1, B2, C, fork_congruences, two_chain, two_chain_fork
from app.services.relations import Carrier, EnumerationLimitError
from app.services.semilattice import (
    Congruence,
    InvalidStructureError,
    PreorderStrategy,
    SemilatticeAxiomError,
    SemilatticeHom,
    SpecializationSemilattice,
    check_derived_monotonicity,
    congruence_from_partition,
    congruence_generated_by,
    congruence_join,
    enumerate_compatible_preorders,
    enumerate_congruences,
    enumerate_homs,
    enumerate_isomorphisms,
    enumerate_posets,
    enumerate_semilattices,
    enumerate_surjective_homs,
    is_compatible_preorder,
    is_congruence,
    is_isomorphism,
    require_hom,
    semilattice_from_order,
    validate_semilattice,
)


def antichain_with_top():
    return validate_semilattice(Carrier(3), [[0, 2, 2], [2, 1, 2], [2, 2, 2]])


@pytest.mark.parametrize(
    "table, axiom, witness",
    [
        ([[0, 5], [5, 1]], "range", (0, 1)),
        ([[1, 1], [1, 1]], "idempotence", (0,)),
        ([[0, 1], [0, 1]], "commutativity", (0, 1)),
        ([[0, 1, 0], [1, 1, 2], [0, 2, 2]], "associativity", (0, 1, 2)),
    ],
)
def test_axiom_violations_carry_witness(table, axiom, witness):
    with pytest.raises(SemilatticeAxiomError) as excinfo:
        validate_semilattice(Carrier(len(table)), table)
    assert excinfo.value.axiom == axiom
    assert excinfo.value.witness == witness


def test_shape_is_checked():
    with pytest.raises(SemilatticeAxiomError) as excinfo:
        validate_semilattice(Carrier(2), [[0, 1]])
    assert excinfo.value.axiom == "shape"


def test_induced_order_and_top():
    s = two_chain_fork()
    assert s.top == C
    assert s.order.holds(A1, A2) and s.order.holds(B2, C)
    assert not s.order.holds(A1, B2)
    assert rel.is_partial_order(s.order)
    assert s(A1, B1) == C


@pytest.mark.parametrize("n, labelled, classes", [(1, 1, 1), (2, 2, 1), (3, 9, 2), (4, 76, 5)])
def test_semilattice_counts(n, labelled, classes):
    assert len(enumerate_semilattices(n)) == labelled
    assert len(enumerate_semilattices(n, up_to_iso=True)) == classes


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 3), (3, 19), (4, 219)])
def test_poset_counts(n, expected):
    assert len(enumerate_posets(n)) == expected


def test_semilattice_from_order_needs_joins():
    c = Carrier(2)
    assert semilattice_from_order(rel.identity(c)) is None
    chain = semilattice_from_order(rel.from_pairs(c, [(0, 0), (0, 1), (1, 1)]))
    assert chain == two_chain()


def test_congruences_of_small_semilattices():
    assert len(enumerate_congruences(two_chain())) == 2
    s = antichain_with_top()
    found = [theta.classes for theta in enumerate_congruences(s)]
    assert found == [[[0, 1, 2]], [[0, 2], [1]], [[0], [1, 2]], [[0], [1], [2]]]
    assert not is_congruence(s, rel.from_partition(s.carrier, [[0, 1], [2]]))


def test_fork_congruences():
    s = two_chain_fork()
    theta, theta_prime = fork_congruences(s)
    assert theta.classes == [[A1, A2], [B1], [B2], [C]]
    assert theta_prime.classes == [[A1], [A2], [B1, B2], [C]]
    joined = congruence_join(s, [theta, theta_prime])
    assert joined.classes == [[A1, A2], [B1, B2], [C]]
    assert congruence_join(s, []).rel == rel.identity(s.carrier)


def test_non_congruence_is_rejected():
    s = antichain_with_top()
    with pytest.raises(InvalidStructureError):
        congruence_from_partition(s, [[0, 1], [2]])


def test_generated_congruence_is_least():
    s = two_chain_fork()
    generated = congruence_generated_by(s, [(A1, B1)])
    assert generated.rel.holds(A1, B1)
    for theta in enumerate_congruences(s):
        if theta.rel.holds(A1, B1):
            assert rel.is_coarser(generated.rel, theta.rel)


def test_compatible_preorders():
    s = antichain_with_top()
    assert is_compatible_preorder(s, s.order)
    assert is_compatible_preorder(s, rel.total(s.carrier))
    assert not is_compatible_preorder(two_chain(), rel.identity(Carrier(2)))
    found = enumerate_compatible_preorders(s)
    assert len(found) == 4
    assert found == sorted(found, key=rel.relation_key)
    with pytest.raises(InvalidStructureError):
        SpecializationSemilattice(two_chain(), rel.identity(Carrier(2)))


def test_strategies_agree_on_fork():
    s = two_chain_fork()
    filtered = enumerate_compatible_preorders(s, PreorderStrategy.FILTER)
    images = enumerate_compatible_preorders(s, PreorderStrategy.OMEGA)
    assert filtered == images
    assert enumerate_compatible_preorders(s, PreorderStrategy.CROSS_CHECK) == filtered
    assert len(filtered) == len(enumerate_congruences(s))


def test_derived_monotonicity_holds():
    s = two_chain_fork()
    for spec in enumerate_compatible_preorders(s):
        assert check_derived_monotonicity(SpecializationSemilattice(s, spec))


def test_homs_between_chains():
    chain = two_chain()
    homs = enumerate_homs(chain, chain)
    assert [h.map for h in homs] == [(0, 0), (0, 1), (1, 1)]
    assert [h.map for h in enumerate_surjective_homs(chain, chain)] == [(0, 1)]
    with pytest.raises(InvalidStructureError):
        require_hom(SemilatticeHom(chain, chain, (1, 0)))


def test_map_budget(monkeypatch):
    monkeypatch.setattr(settings, "MAX_MAP_COUNT", 10)
    s = two_chain_fork()
    with pytest.raises(EnumerationLimitError):
        enumerate_homs(s, s)
    assert len(enumerate_homs(s, s, allow_large=True)) > 0


def test_fork_automorphisms():
    s = two_chain_fork()
    autos = list(enumerate_isomorphisms(s, s))
    assert autos == [(0, 1, 2, 3, 4), (2, 3, 0, 1, 4)]
    assert is_isomorphism(s, s, (2, 3, 0, 1, 4))
    assert not is_isomorphism(s, s, (1, 0, 2, 3, 4))


def test_congruence_wrapper_validates():
    s = two_chain()
    Congruence(s, rel.total(s.carrier))
    with pytest.raises(InvalidStructureError):
        Congruence(s, rel.from_pairs(s.carrier, [(0, 1)]))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_derived_monotonicity_on_every_small_semilattice(n):
    for s in enumerate_semilattices(n):
        for spec in enumerate_compatible_preorders(s):
            assert check_derived_monotonicity(SpecializationSemilattice(s, spec))


@pytest.mark.parametrize("n", [3, 4])
def test_isomorphism_pruning_keeps_every_isomorphism(n):
    labelled = enumerate_semilattices(n)
    for s1 in labelled[:12]:
        for s2 in labelled:
            brute = [p for p in itertools.permutations(range(n)) if is_isomorphism(s1, s2, p)]
            assert list(enumerate_isomorphisms(s1, s2)) == brute

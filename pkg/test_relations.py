import pytest
from hypothesis import given, strategies as st

from app.services import relations as rel
from app.services.relations import BinaryRelation, Carrier, CarrierMismatchError, EnumerationLimitError


def relations_strategy(max_size: int = 5):
    return st.integers(1, max_size).flatmap(
        lambda n: st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n).map(
            lambda rows: BinaryRelation(Carrier(n), tuple(rows))
        )
    )


def test_carrier_names_do_not_affect_equality():
    assert Carrier(2, ("a", "b")) == Carrier(2)
    assert Carrier(3).names == ("0", "1", "2")
    assert Carrier(3).has_default_names
    assert not Carrier(2, ("a", "b")).has_default_names


def test_carrier_rejects_bad_input():
    with pytest.raises(ValueError):
        Carrier(0)
    with pytest.raises(ValueError):
        Carrier(2, ("a", "a"))
    with pytest.raises(ValueError):
        Carrier(2, ("a",))
    with pytest.raises(ValueError):
        Carrier(2, ("a#b", "c"))
    with pytest.raises(ValueError):
        Carrier(2, ("a b", "c"))


def test_relation_key_is_row_major_with_first_cell_most_significant():
    c = Carrier(2)
    assert rel.relation_key(rel.identity(c)) == 0b1001
    assert rel.relation_key(rel.from_pairs(c, [(0, 1)])) == 0b0100
    assert rel.relation_key(rel.total(c)) == 0b1111
    assert rel.relation_from_key(c, 0b0110).pairs() == [(0, 1), (1, 0)]


def test_rows_outside_carrier_are_rejected():
    with pytest.raises(ValueError):
        BinaryRelation(Carrier(2), (0b100, 0))
    with pytest.raises(ValueError):
        rel.from_pairs(Carrier(2), [(0, 2)])


def test_property_predicates():
    c = Carrier(3)
    chain = rel.from_pairs(c, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)])
    assert rel.is_partial_order(chain)
    assert not rel.is_equivalence(chain)
    broken = rel.from_pairs(c, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)])
    assert rel.is_reflexive(broken)
    assert not rel.is_transitive(broken)
    eq = rel.from_partition(c, [[0, 2], [1]])
    assert rel.is_equivalence(eq)
    assert not rel.is_antisymmetric(eq)


@pytest.mark.parametrize(
    "predicate, n, expected",
    [
        (rel.is_preorder, 2, 4),
        (rel.is_preorder, 3, 29),
        (rel.is_partial_order, 3, 19),
        (rel.is_equivalence, 3, 5),
        (rel.is_equivalence, 4, 15),
        (rel.is_transitive, 2, 13),
    ],
)
def test_known_relation_counts(predicate, n, expected):
    assert len(rel.enumerate_relations_satisfying(Carrier(n), predicate)) == expected


def test_enumeration_is_in_key_order():
    found = rel.enumerate_relations_satisfying(Carrier(3), rel.is_preorder)
    keys = [rel.relation_key(r) for r in found]
    assert keys == sorted(keys)
    assert found[0] == rel.identity(Carrier(3))
    assert found[-1] == rel.total(Carrier(3))


def test_lower_bound_restricts_the_search():
    c = Carrier(3)
    lower = rel.from_pairs(c, [(0, 0), (1, 1), (2, 2), (0, 1)])
    above = rel.enumerate_relations_satisfying(c, rel.is_preorder, lower=lower)
    everything = rel.enumerate_relations_satisfying(c, rel.is_preorder)
    assert above == [r for r in everything if rel.is_coarser(lower, r)]


def test_enumeration_guard():
    with pytest.raises(EnumerationLimitError):
        rel.enumerate_relations_satisfying(Carrier(6), rel.is_preorder)


def test_partition_and_classes():
    c = Carrier(5)
    r = rel.from_partition(c, [[3, 1], [0], [4, 2]])
    assert rel.classes(r) == [[0], [1, 3], [2, 4]]
    with pytest.raises(ValueError):
        rel.from_partition(c, [[0, 1], [1, 2, 3, 4]])
    with pytest.raises(ValueError):
        rel.from_partition(c, [[0, 1]])


def test_carrier_mismatch():
    with pytest.raises(CarrierMismatchError):
        rel.is_coarser(rel.identity(Carrier(2)), rel.identity(Carrier(3)))
    with pytest.raises(ValueError):
        rel.intersect([])


def test_transitive_reduction_of_chain_and_diamond():
    c = Carrier(3)
    chain = rel.reflexive_transitive_closure(rel.from_pairs(c, [(0, 1), (1, 2)]))
    assert rel.transitive_reduction(chain).pairs() == [(0, 1), (1, 2)]
    d = Carrier(4)
    diamond = rel.reflexive_transitive_closure(rel.from_pairs(d, [(0, 1), (0, 2), (1, 3), (2, 3)]))
    assert rel.transitive_reduction(diamond).pairs() == [(0, 1), (0, 2), (1, 3), (2, 3)]
    with pytest.raises(ValueError):
        rel.transitive_reduction(rel.total(c))


@given(relations_strategy())
def test_closure_is_least_preorder_above(r):
    closed = rel.reflexive_transitive_closure(r)
    assert rel.is_preorder(closed)
    assert rel.is_coarser(r, closed)
    assert rel.reflexive_transitive_closure(closed) == closed


@given(relations_strategy())
def test_symmetric_core_and_transpose(r):
    core = rel.symmetric_core(r)
    assert rel.is_symmetric(core)
    assert rel.is_coarser(core, r)
    assert rel.transpose(rel.transpose(r)) == r
    assert rel.relation_from_key(r.carrier, rel.relation_key(r)) == r


@given(relations_strategy(), st.data())
def test_meet_and_join_bounds(r, data):
    other = BinaryRelation(
        r.carrier,
        tuple(data.draw(st.lists(st.integers(0, (1 << r.size) - 1), min_size=r.size, max_size=r.size))),
    )
    meet = rel.intersect([r, other])
    join = rel.union([r, other])
    assert rel.is_coarser(meet, r) and rel.is_coarser(meet, other)
    assert rel.is_coarser(r, join) and rel.is_coarser(other, join)
    assert len(meet) + len(join) == len(r) + len(other)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symmetric_core_of_every_preorder_is_an_equivalence(n):
    for r in rel.enumerate_relations_satisfying(Carrier(n), rel.is_preorder):
        assert rel.is_equivalence(rel.symmetric_core(r))


def test_intersect_of_opposite_arrows_is_identity():
    c = Carrier(2)
    up = rel.union([rel.from_pairs(c, [(0, 1)]), rel.identity(c)])
    down = rel.union([rel.from_pairs(c, [(1, 0)]), rel.identity(c)])
    assert rel.intersect([up, down]) == rel.identity(c)


@given(relations_strategy(), st.data())
def test_intersect_is_idempotent_commutative_and_associative(r, data):
    rows = st.lists(st.integers(0, (1 << r.size) - 1), min_size=r.size, max_size=r.size)
    s = BinaryRelation(r.carrier, tuple(data.draw(rows)))
    t = BinaryRelation(r.carrier, tuple(data.draw(rows)))
    assert rel.intersect([r, r]) == r
    assert rel.intersect([r, s]) == rel.intersect([s, r])
    assert rel.intersect([rel.intersect([r, s]), t]) == rel.intersect([r, rel.intersect([s, t])])
    assert rel.intersect([r, s, t]) == rel.intersect([r, rel.intersect([s, t])])


def test_is_coarser_is_a_partial_order():
    c = Carrier(2)
    everything = [rel.relation_from_key(c, key) for key in range(1 << 4)]
    for r in everything:
        assert rel.is_coarser(r, r)
    for r in everything:
        for s in everything:
            if rel.is_coarser(r, s) and rel.is_coarser(s, r):
                assert r == s
            for t in everything:
                if rel.is_coarser(r, s) and rel.is_coarser(s, t):
                    assert rel.is_coarser(r, t)

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthowork.exceptions import MissingBounds, NoJoin, NoMeet, NotAPartialOrder, DuplicateName
from orthowork.generators import random_lattice, random_poset
from orthowork.lattice import (
    FiniteLattice,
    Poset,
    boolean_lattice,
    chain,
    diamond,
    dm_completion,
    dual,
    generated_sublattice,
    induced_sublattice,
    pentagon,
    relation_from_covers,
    subset_inf,
    subset_sup,
    validate_lattice,
)
from orthowork.exceptions import NotASublattice
import random

import oracles

seeds = st.integers(0, 2**31 - 1)


def bowtie():
    # 0 < c, d < a, b < 1 with a, b both above c and d
    names = ["0", "c", "d", "a", "b", "1"]
    covers = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)]
    return Poset.from_covers(names, covers)


def test_two_chain_meet_is_min():
    L = chain(2)
    assert L.meet(0, 1) == 0 and L.join(0, 1) == 1
    assert L.bottom == 0 and L.top == 1


def test_bowtie_has_no_meet():
    with pytest.raises(NoMeet) as info:
        validate_lattice(bowtie())
    # a and b have the two incomparable lower bounds c and d
    assert {info.value.x, info.value.y} == {3, 4}


def test_bowtie_meet_failure_matches_oracle():
    P = bowtie()
    rel = oracles.leq_lists(P)
    assert oracles.glb(rel, [3, 4]) is None
    assert oracles.lub(rel, [1, 2]) is None


def test_diamond_m2():
    L = diamond(2)
    a, b = L.index("a1"), L.index("a2")
    assert L.meet(a, b) == L.bottom and L.join(a, b) == L.top


def test_missing_bounds_and_bad_orders():
    with pytest.raises(MissingBounds):
        FiniteLattice(["a", "b"], np.eye(2, dtype=bool))
    with pytest.raises(NotAPartialOrder):
        FiniteLattice(["a", "b"], np.ones((2, 2), dtype=bool))
    with pytest.raises(DuplicateName):
        FiniteLattice(["a", "a"], np.triu(np.ones((2, 2), dtype=bool)))
    with pytest.raises(MissingBounds):
        FiniteLattice(["0", "1"], np.triu(np.ones((2, 2), dtype=bool)), bottom=1)


def test_no_join_is_reported():
    # the bowtie turned upside down lacks joins instead
    P = bowtie()
    names = list(P.names)
    with pytest.raises((NoMeet, NoJoin)):
        FiniteLattice(names, P.leq.T)


def test_meet_with_top_and_join_in_chain():
    L = chain(3)
    for x in L.elements:
        assert L.meet(x, L.top) == x
    assert L.join(0, L.index("m")) == L.index("m")


def test_dual_of_three_chain():
    D = dual(chain(3))
    m = D.index("m")
    assert D.le(D.index("1"), m) and D.le(m, D.index("0"))
    assert D.bottom == 2 and D.top == 0


def test_dual_swaps_tables():
    L = pentagon()
    D = L.dual()
    assert np.array_equal(D.meet_table, L.join_table)
    assert np.array_equal(D.join_table, L.meet_table)
    assert D.dual() == L


def test_subset_sup_and_inf():
    L = diamond(2)
    assert subset_sup(L, [1, 2]) == L.top
    assert subset_sup(L, []) == L.bottom
    assert subset_inf(L, []) == L.top
    C = chain(3)
    assert subset_sup(C, [0, 1]) == 1


def test_dm_completion_of_antichain_is_diamond():
    P = Poset(["a", "b"], np.eye(2, dtype=bool))
    L, e = dm_completion(P)
    assert L.names == ("{}", "a", "b", "{a,b}")
    assert L.size == oracles.dm_cut_count(oracles.leq_lists(P)) == 4
    assert L.meet(e[0], e[1]) == L.bottom and L.join(e[0], e[1]) == L.top


@pytest.mark.parametrize("lat", [chain(3), diamond(3), pentagon(), boolean_lattice(3)], ids=str)
def test_dm_completion_of_lattice_is_isomorphic(lat):
    L, e = dm_completion(lat.as_poset())
    assert L.size == lat.size
    assert sorted(e.map) == list(range(L.size))
    m = e.array
    assert np.array_equal(L.leq[np.ix_(m, m)], lat.leq)


def test_shapes():
    assert boolean_lattice(3).size == 8
    assert pentagon().size == 5
    assert diamond(3).size == 5
    assert chain(4).is_chain() and not diamond(2).is_chain()
    assert chain(4).heights == (0, 1, 2, 3)


def test_generated_and_induced_sublattice():
    B = boolean_lattice(3)
    gen = generated_sublattice(B, [B.index("a"), B.index("b")])
    assert sorted(B.names[x] for x in gen) == sorted(["0", "a", "b", "ab", "1"])
    sub, ids = induced_sublattice(B, gen)
    assert sub.size == 5
    with pytest.raises(NotASublattice):
        induced_sublattice(B, [B.bottom, B.index("a"), B.index("b"), B.top])
    with pytest.raises(OverflowError):
        generated_sublattice(B, [B.index("a"), B.index("b"), B.index("c")], cap=4)


def test_relation_from_covers_is_closed():
    rel = relation_from_covers(4, [(0, 1), (1, 2), (2, 3)])
    assert rel[0, 3] and not rel[3, 0]


@settings(max_examples=60)
@given(seeds, st.integers(1, 8))
def test_meet_join_tables_match_oracle(seed, k):
    L = random_lattice(random.Random(seed), k)
    rel = oracles.leq_lists(L)
    assert oracles.is_partial_order(rel)
    assert L.meet_table.tolist() == oracles.meet_table(rel)
    assert L.join_table.tolist() == oracles.join_table(rel)


@settings(max_examples=40)
@given(seeds, st.integers(1, 7))
def test_glb_law_exhaustive(seed, k):
    L = random_lattice(random.Random(seed), k)
    n = L.size
    for x, y, z in itertools.product(range(n), repeat=3):
        assert (L.le(z, x) and L.le(z, y)) == L.le(z, L.meet(x, y))
        assert (L.le(x, z) and L.le(y, z)) == L.le(L.join(x, y), z)


@settings(max_examples=40)
@given(seeds, st.integers(1, 7))
def test_subset_sup_is_least_upper_bound(seed, k):
    rng = random.Random(seed)
    L = random_lattice(rng, k)
    rel = oracles.leq_lists(L)
    for _ in range(10):
        A = [x for x in range(L.size) if rng.random() < 0.4]
        assert subset_sup(L, A) == (oracles.lub(rel, A) if A else L.bottom)
        assert subset_inf(L, A) == (oracles.glb(rel, A) if A else L.top)


@settings(max_examples=40)
@given(seeds, st.integers(1, 8))
def test_dm_completion_counts_and_preserves(seed, k):
    P = random_poset(random.Random(seed), k)
    rel = oracles.leq_lists(P)
    L, e = dm_completion(P)
    assert L.size == oracles.dm_cut_count(rel)
    # order embedding
    for x in range(k):
        for y in range(k):
            assert rel[x][y] == L.le(e[x], e[y])
    # existing binary meets and joins are preserved
    for x in range(k):
        for y in range(k):
            m = oracles.glb(rel, [x, y])
            if m is not None:
                assert e[m] == L.meet(e[x], e[y])
            j = oracles.lub(rel, [x, y])
            if j is not None:
                assert e[j] == L.join(e[x], e[y])


@settings(max_examples=30)
@given(seeds, st.integers(1, 7))
def test_dual_is_involution(seed, k):
    L = random_lattice(random.Random(seed), k)
    assert L.dual().dual() == L

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthowork.constructions import compose_all, horizontal_sum, ortho_construction, product
from orthowork.exceptions import (
    BoundsNotPreserved,
    MorphismError,
    NoGreatestBelow,
    NotComposable,
    NotConvex,
    NotDownwardClosed,
    NotInjective,
    NotJoinPreserving,
    PerpNotPreserved,
)
from orthowork.generators import random_lattice, random_tower, random_triangle_extension
from orthowork.lattice import boolean_lattice, chain, diamond, subset_sup
from orthowork.morphisms import (
    Embedding,
    certificate_table,
    check_convex,
    check_sub01,
    check_subortholattice,
    check_triangle,
    check_triangle_dual,
    projections,
    sup_agreement,
)
from orthowork.ortho import boolean_algebra, mo2, zoo

import oracles

seeds = st.integers(0, 2**31 - 1)


def emb(src, tgt, names):
    return Embedding(src, tgt, [tgt.index(n) for n in names])


def test_two_chain_in_three_chain():
    e, pi = check_triangle(Embedding(chain(2), chain(3), [0, 2]))
    assert e.has("Sub01") and e.has("Triangle")
    assert pi[1] == 0  # pi(m) = 0


def test_diamond_into_b3():
    B3 = boolean_lattice(3)
    # two atoms join to a coatom, not to the top
    with pytest.raises(NotJoinPreserving):
        check_sub01(emb(diamond(2), B3, ["0", "a", "b", "1"]))
    # an atom and its complement work
    e = check_sub01(emb(diamond(2), B3, ["0", "a", "bc", "1"]))
    assert e.has("Sub01")


def test_bounds_not_preserved():
    with pytest.raises(BoundsNotPreserved):
        check_sub01(emb(chain(3), boolean_lattice(3), ["0", "a", "ab"]))


def test_injectivity_is_enforced():
    with pytest.raises(NotInjective):
        Embedding(chain(3), chain(3), [0, 0, 2])


def test_hsum_projection_is_zero_on_interior():
    L0 = zoo("B2")
    hs = horizontal_sum(L0, product(L0, L0).result)
    e = hs.embeddings["A→L"]
    assert e.has("Triangle")
    _, pi = check_triangle(e)
    L = hs.result
    for x in range(L0.size, L.size):
        assert pi[x] == L0.bottom
    assert oracles.triangle_holds(L0, L, e.map)


def test_b2_atoms_in_b3_not_downward_closed():
    B3 = boolean_lattice(3)
    e = emb(boolean_lattice(2), B3, ["0", "a", "bc", "1"])
    with pytest.raises(NotDownwardClosed) as info:
        check_triangle(e)
    assert B3.names[info.value.z] == "bc"
    assert B3.names[info.value.x] in ("b", "c")
    assert not oracles.triangle_holds(boolean_lattice(2), B3, e.map)
    # the dual statement fails too: above the image atom a sit ab and ac
    with pytest.raises(NotDownwardClosed):
        check_triangle_dual(e)


def test_projections():
    B2 = boolean_lattice(2)
    e = check_sub01(emb(chain(2), B2, ["0", "1"]))
    pi = projections(e)
    assert [pi[x] for x in range(4)] == [0, 0, 0, 1]


def test_no_greatest_below_needs_a_non_lattice_map():
    # for a {0,1}-sublattice the join of the image elements below x is again
    # below x, so projections always exist; an order embedding can fail
    B3 = boolean_lattice(3)
    e = emb(diamond(2), B3, ["0", "a", "b", "1"])
    with pytest.raises(NoGreatestBelow) as info:
        projections(e)
    assert B3.names[info.value.x] == "ab"
    assert sorted(info.value.antichain) == [1, 2]


def test_triangle_dual_of_identity_and_dual_copy():
    L = zoo("O6")
    assert check_triangle_dual(Embedding.identity(L))[0].has("TriangleDual")


def test_convex_examples():
    C3 = chain(3)
    assert check_convex(Embedding.identity(C3)).has("Convex")
    C4 = chain(4)
    assert check_convex(emb(chain(2), C4, ["0", "1"])).has("Convex")
    assert check_convex(emb(chain(3), C4, ["0", "c2", "1"])).has("Convex")
    C5 = chain(5)
    with pytest.raises(NotConvex) as info:
        check_convex(emb(chain(4), C5, ["0", "c1", "c3", "1"]))
    assert (C5.names[info.value.a], C5.names[info.value.x], C5.names[info.value.a2]) == ("c1", "c2", "c3")


def test_sup_agreement_examples():
    C5 = chain(5)
    e = emb(chain(3), C5, ["0", "c2", "1"])
    rep = sup_agreement(e, [0, 1])
    assert rep.ok and rep.equal and rep.equality_required
    B2 = boolean_lattice(2)
    rep = sup_agreement(emb(chain(3), B2, ["0", "a", "1"]), [1])
    assert rep.ok and rep.equal and B2.names[rep.target_sup] == "a"
    e = emb(chain(4), C5, ["0", "c1", "c3", "1"])
    for k in range(5):
        for A in itertools.combinations(range(4), k):
            assert sup_agreement(e, A).ge_holds


def test_subortho_examples():
    O = zoo("2-chain")
    e = check_triangle(Embedding(O, chain(3), [0, 2]))[0]
    res = ortho_construction(e)
    assert res.embeddings["L0→L"].has("SubOrtho")
    assert check_subortholattice(Embedding.identity(zoo("MO2"))).has("SubOrtho")
    B2, M = boolean_algebra(2), mo2()
    with pytest.raises(PerpNotPreserved):
        check_subortholattice(emb(B2, M, ["0", "a", "b", "1"]))


def test_every_sub01_map_b2_to_b3_preserves_perp():
    # complements are unique in a Boolean algebra, so no counterexample exists there
    B2, B3 = boolean_algebra(2), boolean_algebra(3)
    found = 0
    for images in itertools.permutations(range(8), 4):
        try:
            e = check_sub01(Embedding(B2, B3, images))
        except MorphismError:
            continue
        found += 1
        assert check_subortholattice(e).has("SubOrtho")
    assert found == 6


def test_composition_and_certificate_table():
    e1 = Embedding(chain(2), chain(3), [0, 2])
    e2 = Embedding(chain(3), chain(4), [0, 1, 3])
    assert e1.then(e2).map == (0, 3)
    with pytest.raises(NotComposable):
        e2.then(e1)
    table = certificate_table(e1)
    assert table["Sub01"][0] and table["Triangle"][0] and table["SubOrtho"][0] is None


@settings(max_examples=50)
@given(seeds)
def test_triangle_transitivity_on_towers(seed):
    rng = random.Random(seed)
    base = random_lattice(rng, rng.randint(1, 4))
    steps = random_tower(rng, base, levels=2, extra=2)
    _, p12 = check_triangle(steps[0])
    _, p23 = check_triangle(steps[1])
    e13, p13 = check_triangle(compose_all(steps))
    assert oracles.triangle_holds(base, e13.target, e13.map)
    for x in range(e13.target.size):
        assert p13[x] == p12[p23[x]]


@settings(max_examples=50)
@given(seeds)
def test_projection_laws(seed):
    rng = random.Random(seed)
    base = random_lattice(rng, rng.randint(1, 5))
    e = random_triangle_extension(rng, base, rng.randint(0, 4))
    _, pi = check_triangle(e)
    T = e.target
    for z in range(base.size):
        assert pi[e[z]] == z
    for x in range(T.size):
        assert pi[x] == oracles.projection(base, T, e.map, x)
        for y in range(T.size):
            if T.le(x, y):
                assert base.le(pi[x], pi[y])


@settings(max_examples=40)
@given(seeds)
def test_sup_agreement_all_subsets(seed):
    rng = random.Random(seed)
    base = random_lattice(rng, rng.randint(1, 4))
    e = random_triangle_extension(rng, base, rng.randint(0, 3))
    if e.target.size > 8:
        e = random_triangle_extension(rng, base, 0)
    S = e.source
    for k in range(S.size + 1):
        for A in itertools.combinations(range(S.size), k):
            rep = sup_agreement(e, A)
            assert rep.ok
            assert rep.source_sup == subset_sup(S, A)

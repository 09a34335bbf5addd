import itertools

import pytest
from hypothesis import given, strategies as st

from tambara.groups import (NotAGroup, UnknownGroup, FiniteGroup, classify, coset_factorization,
                            double_coset, double_cosets, normalizer, preset)

from conftest import SMALL


# [TRIVIAL] subgroup census of the small catalog
@pytest.mark.parametrize("name,order,nsub,kind", [
    ("C2", 2, 2, "dedekind"), ("C3", 3, 2, "dedekind"), ("C4", 4, 3, "dedekind"),
    ("C2xC2", 4, 5, "dedekind"), ("S3", 6, 6, "star"), ("D8", 8, 10, "d8"),
    ("Q8", 8, 6, "dedekind"), ("CpxCq7,3", 21, 10, "star"),
])
def test_catalog(name, order, nsub, kind):
    G = preset(name)
    assert G.order == order
    assert G.nsub == nsub
    assert classify(G) == kind


def test_unknown_group():
    with pytest.raises(UnknownGroup):
        preset("A5x")


def test_bad_table():
    with pytest.raises(NotAGroup):
        FiniteGroup([[0, 1], [1, 1]])


# [DERIVED] brute-force closure under multiplication and inverses
@pytest.mark.parametrize("name", SMALL)
def test_subgroups_closed(name):
    G = preset(name)
    for H in G.subgroups():
        for a, b in itertools.product(H.elements, repeat=2):
            assert G.mul[a][G.inv[b]] in H
    assert G.trivial.order == 1 and G.whole.order == G.order


@pytest.mark.parametrize("name", SMALL)
def test_tables_agree(name):
    G = preset(name)
    for H in G.subgroups():
        for K in G.subgroups():
            assert G.sub(G.meet_table[H.id][K.id]).elset == H.elset & K.elset
            assert G.leq_table[H.id][K.id] == (H.elset <= K.elset)
        for g in range(G.order):
            gH = {G.mul[G.mul[g][h]][G.inv[g]] for h in H.elements}
            assert G.sub(G.conj_table[g][H.id]).elset == gH
        N = normalizer(H)
        assert N.elset == {g for g in range(G.order) if G.conj_table[g][H.id] == H.id}


# [DERIVED] double cosets partition the ambient subgroup
@pytest.mark.parametrize("name", SMALL)
def test_double_cosets_partition(name):
    G = preset(name)
    subs = G.subgroups()
    for H, M in itertools.product(subs, repeat=2):
        reps = double_cosets(H, M)
        cover = [double_coset(H, x, M) for x in reps]
        assert sum(len(c) for c in cover) == G.order
        assert frozenset().union(*cover) == frozenset(range(G.order))
        for x in reps:
            assert x == min(double_coset(H, x, M))


# [PAPER] double cosets of M in L fibre over those of K, with fibres H\K/(K ∩ gMg⁻¹)
@pytest.mark.parametrize("name", ["S3", "D8", "Q8"])
def test_coset_factorization(name):
    G = preset(name)
    subs = G.subgroups()
    for H, K, L, M in itertools.product(subs, repeat=4):
        if H <= K <= L and M <= L:
            f = coset_factorization(H, K, L, M)
            assert sorted(f.values()) == sorted(double_cosets(H, M, L))


@given(st.sampled_from(SMALL), st.data())
def test_conjugation_is_action(name, data):
    G = preset(name)
    g = data.draw(st.integers(0, G.order - 1))
    h = data.draw(st.integers(0, G.order - 1))
    H = data.draw(st.sampled_from(G.subgroups()))
    ct = G.conj_table
    assert ct[G.mul[g][h]][H.id] == ct[g][ct[h][H.id]]


# [PAPER] D8 has three subgroups of order 4 and five of order 2
def test_d8_census():
    G = preset("D8")
    orders = sorted(H.order for H in G.subgroups())
    assert orders.count(4) == 3 and orders.count(2) == 5
    assert preset("C1").nsub == 1


# [PAPER] <x>\D8/<x> has representatives e, a, a^2
def test_d8_double_cosets():
    G = preset("D8")
    X = G.sub("x")
    reps = double_cosets(X, X)
    assert len(reps) == 3
    assert {double_coset(X, r, X) for r in reps} == {double_coset(X, G.word(w), X)
                                                     for w in ("e", "a", "a^2")}


def test_s3_double_cosets():
    G = preset("S3")
    assert len(double_cosets(G.sub("s"), G.sub("sr"))) == 2
    assert len(double_cosets(G.trivial, G.trivial)) == G.order


# [PAPER] N(<x>) = <a^2, x> in D8
def test_normalizers():
    from tambara.groups import weyl
    G = preset("D8")
    assert normalizer(G.sub("x")) == G.sub("a^2,x")
    S = preset("S3")
    assert normalizer(S.sub("s")) == S.sub("s")
    assert len(weyl(S.sub("s"))) == 1
    for name in SMALL:
        H = preset(name)
        for K in H.subgroups():
            assert len(weyl(K)) * K.order == normalizer(K).order
            if K.is_normal():
                assert normalizer(K) == H.whole


@pytest.mark.parametrize("name", SMALL + ["CpxCq7,3", "D2p5", "C8"])
def test_dedekind_cross_check(name):
    G = preset(name)
    assert (classify(G) == "dedekind") == all(H.is_normal() for H in G.subgroups())


def test_dihedral_star():
    assert classify(preset("D2p5")) == "star"


def test_chain_errors():
    from tambara.groups import NotASubgroupChain
    G = preset("C4")
    with pytest.raises(NotASubgroupChain):
        coset_factorization(G.whole, G.trivial, G.whole, G.trivial)


def test_other_with_witness():
    from tambara.groups import group_from_generators
    rot = tuple((i + 1) % 8 for i in range(8))
    ref = tuple((-i) % 8 for i in range(8))
    G = group_from_generators([rot, ref], lambda p, q: tuple(p[q[i]] for i in range(8)),
                              tuple(range(8)), "D16")
    assert G.order == 16
    kind = classify(G)
    assert kind == "other" and kind.witness

import itertools
import random

import pytest

from tambara import boxprod as bp
from tambara import mackey as mk
from tambara import zmodule as zm
from tambara.groups import preset
from tambara.gsets import GroupMismatch, parse_gset


def _basis(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


@pytest.fixture(scope="module")
def c4_burnside_box():
    G = preset("C4")
    A = mk.burnside(G)
    return G, A, bp.box([A, A])


# [TRIVIAL] Burnside is the unit for the box product
@pytest.mark.parametrize("name", ["C2", "C4", "S3", "C2xC2", "D8", "Q8"])
def test_burnside_unit(name):
    G = preset(name)
    A = mk.burnside(G)
    B = bp.box([A, A])
    assert mk.check_axioms(B)["pass"]
    for L in range(G.nsub):
        assert zm.is_iso(B.levels[L], A.levels[L])


def test_burnside_unit_on_free_truncation():
    G = preset("C2")
    M = mk.free_truncation(parse_gset(G, "C2/e"), 2)
    B = bp.box([mk.burnside(G), M], truncation=2)
    assert mk.check_axioms(B)["pass"]
    for L in range(G.nsub):
        assert zm.is_iso(B.levels[L], M.levels[L])


# [DERIVED] f_H∘(Res⊗Res) = Res∘f_K
def test_dress_restriction(c4_burnside_box):
    G, A, B = c4_burnside_box
    for H, K in itertools.product(range(G.nsub), repeat=2):
        if not G.leq_table[H][K]:
            continue
        for x, y in itertools.product(_basis(A.rank(K)), repeat=2):
            lhs = B.dress_pair(H, [A.apply("res", (H, K), x), A.apply("res", (H, K), y)])
            rhs = B.apply("res", (H, K), B.dress_pair(K, [x, y]))
            assert B.level(H).equal(lhs, rhs)


# [PAPER] Tr∘f_H∘(Res⊗id) = f_K∘(id⊗Tr), and the mirrored condition
def test_dress_frobenius(c4_burnside_box):
    G, A, B = c4_burnside_box
    for H, K in itertools.product(range(G.nsub), repeat=2):
        if not G.leq_table[H][K]:
            continue
        for x in _basis(A.rank(K)):
            for y in _basis(A.rank(H)):
                lhs = B.apply("tr", (H, K), B.dress_pair(H, [A.apply("res", (H, K), x), y]))
                rhs = B.dress_pair(K, [x, A.apply("tr", (H, K), y)])
                assert B.level(K).equal(lhs, rhs)
                lhs = B.apply("tr", (H, K), B.dress_pair(H, [y, A.apply("res", (H, K), x)]))
                rhs = B.dress_pair(K, [A.apply("tr", (H, K), y), x])
                assert B.level(K).equal(lhs, rhs)


def test_dress_conjugation():
    G = preset("S3")
    A = mk.burnside(G)
    B = bp.box([A, A])
    for H in range(G.nsub):
        for g in range(G.order):
            gH = G.conj_table[g][H]
            for x, y in itertools.product(_basis(A.rank(H)), repeat=2):
                lhs = B.apply("conj", (g, H), B.dress_pair(H, [x, y]))
                rhs = B.dress_pair(gH, [A.apply("conj", (g, H), x), A.apply("conj", (g, H), y)])
                assert B.level(gH).equal(lhs, rhs)


def test_dress_unit(c4_burnside_box):
    G, A, B = c4_burnside_box
    for L in range(G.nsub):
        assert B.level(L).equal(B.dress_pair(L, [A.unit[L], A.unit[L]]), B.unit[L])


def test_level_mismatch(c4_burnside_box):
    G, A, B = c4_burnside_box
    with pytest.raises(bp.LevelMismatch):
        B.dress_pair(G.whole.id, [[1], [1]])
    with pytest.raises(bp.LevelMismatch):
        B.dress_pair(G.whole.id, [A.unit[G.whole.id]])


def test_errors():
    A = mk.burnside(preset("C2"))
    with pytest.raises(GroupMismatch):
        bp.box([A, mk.burnside(preset("C3"))])
    plain = mk.MackeyData(A.group, A.levels, A.res, A.tr, A.conj, name="plain")
    with pytest.raises(bp.NotGreen):
        bp.box([A, plain], green=True)
    B = bp.box([A, plain])
    with pytest.raises(bp.NotGreen):
        B.green_mul(A.group.whole.id, [1, 0], [1, 0])
    with pytest.raises(ValueError):
        bp.box([A, plain], truncation=1)


# [DERIVED] the Green product is unital, commutative and associative
@pytest.mark.parametrize("name,x_text,y_text", [("C2", "C2/e", "C2/e"), ("C2", "point", "C2/e")])
def test_green_laws(name, x_text, y_text):
    rng = random.Random(5)
    G = preset(name)
    M1 = mk.free_truncation(parse_gset(G, x_text), 2)
    M2 = mk.free_truncation(parse_gset(G, y_text), 2)
    B = bp.box([M1, M2], truncation=2)
    for L in range(G.nsub):
        lv = B.level(L)
        r = lv.rank
        one = B.unit[L]
        for _ in range(10):
            a, b, c = ([rng.randint(-2, 2) for _ in range(r)] for _ in range(3))
            assert lv.equal(B.green_mul(L, a, one), a)
            assert lv.equal(B.green_mul(L, a, b), B.green_mul(L, b, a))
            assert lv.equal(B.green_mul(L, B.green_mul(L, a, b), c),
                            B.green_mul(L, a, B.green_mul(L, b, c)))


# [PAPER] box square of the C_p example: transfer products vanish, top is (Z/p)^{1+d²}
@pytest.mark.parametrize("p,d", [(2, 2), (3, 3)])
def test_green_example(p, d):
    r = bp.green_example(p, d)
    assert r["transfer_products_zero"]
    assert r["top"] == (0, (p,) * (1 + d * d))
    assert mk.check_axioms(r["box"])["pass"]


# [PAPER] for abelian G the level is the coinvariant formula
def test_abelian_level_matches():
    G = preset("C4")
    M1 = mk.free_truncation(parse_gset(G, "C4/C2"), 2)
    M2 = mk.free_truncation(parse_gset(G, "C4/e"), 2)
    B = bp.box([M1, M2], truncation=2)
    for L in range(G.nsub):
        assert zm.is_iso(bp.abelian_level([M1, M2], L, 2), B.levels[L])


@pytest.mark.parametrize("name,x,y,n", [("C2", "C2/e", "C2/e", 2), ("C2", "empty", "empty", 2),
                                        ("C4", "C4/C2", "point", 2)])
def test_compare_free(name, x, y, n):
    G = preset(name)
    for L in G.subgroups():
        r = bp.compare_free(parse_gset(G, x), parse_gset(G, y), L.id, n)
        assert r["pass"]
        assert r["dress_well_defined"]
        for d, s in r["strata"].items():
            assert s["iso"] and s["dress_iso"]
            assert s["box"] == [s["direct"], []]


# [PAPER] with a trivially graded factor the relations stay homogeneous
def test_trivial_grading_homogeneous():
    G = preset("C2")
    T = mk.burnside(G)
    M = mk.free_truncation(parse_gset(G, "C2/e"), 2)
    B = bp.box([T, M], truncation=2)
    for L, lvl in B.box_levels.items():
        for rel in lvl.relations:
            assert len({lvl.degree[g] for g in rel}) == 1


def test_box_of_truncations_passes_axioms():
    G = preset("S3")
    M1 = mk.free_truncation(parse_gset(G, "S3/<s>"), 1)
    M2 = mk.free_truncation(parse_gset(G, "S3/<r>"), 1)
    B = bp.box([M1, M2], truncation=1)
    assert mk.check_axioms(B)["pass"]


def test_indecomposables():
    G = preset("C2")
    # Burnside sits in degree zero, so nothing survives
    assert bp.indecomposables(mk.burnside(G), G.whole.id).ngens_min == 0
    M = mk.free_truncation(parse_gset(G, "C2/e"), 2)
    assert bp.indecomposables(M, G.whole.id).ngens_min >= 1


def test_json_keeps_provenance():
    G = preset("C2")
    A = mk.burnside(G)
    B = bp.box([A, A])
    data = B.to_json()
    assert "summands" in data["provenance"] or data["provenance"]
    assert mk.check_axioms(mk.MackeyData.from_json(B.dumps()))["pass"]


# [PAPER] module generators needed up to degree d keep growing, d = 2..5
def test_green_example_growth():
    counts = [bp.green_example(2, d)["generators_lower_bound"] for d in range(2, 6)]
    assert all(a < b for a, b in zip(counts, counts[1:]))
    assert counts == [d * d for d in range(2, 6)]

import json

import numpy as np
import pytest

from tambara import mackey as mk
from tambara.groups import preset
from tambara.gsets import parse_gset

from conftest import SMALL


@pytest.mark.parametrize("name", SMALL)
def test_burnside_passes(name):
    G = preset(name)
    M = mk.burnside(G)
    assert mk.check_axioms(M)["pass"]
    for L in G.subgroups():
        reps = {min(G.conj_table[l][H.id] for l in L.elements) for H in G.subgroups() if H <= L}
        assert M.rank(L) == len(reps)


def test_burnside_ranks():
    for p in (2, 3, 5):
        G = preset(f"C{p}")
        assert mk.burnside(G).rank(G.whole) == 2
    D = preset("D8")
    assert mk.burnside(D).rank(D.trivial) == 1


@pytest.mark.parametrize("name", ["C4", "S3", "D8"])
def test_constant_functor(name):
    assert mk.check_axioms(mk.constant_functor(preset(name)))["pass"]


@pytest.mark.parametrize("p,d", [(2, 1), (2, 3), (3, 2), (5, 2)])
def test_green_counterexample(p, d):
    M = mk.green_counterexample(p, d)
    G = M.group
    assert mk.check_axioms(M)["pass"]
    T = M.tr[(G.trivial.id, G.whole.id)]
    assert all(v == 0 for row in T for v in row)


def test_green_counterexample_needs_d():
    with pytest.raises(ValueError):
        mk.green_counterexample(2, 0)


@pytest.mark.parametrize("name,x_text", [("C2", "C2/e"), ("C4", "C4/C2"), ("S3", "S3/<s>"),
                                         ("Q8", "Q8/<i>")])
def test_free_truncation_passes(name, x_text):
    G = preset(name)
    M = mk.free_truncation(parse_gset(G, x_text), 2)
    assert mk.check_axioms(M)["pass"]


# [TRIVIAL] negative controls name the failing instance
@pytest.mark.parametrize("kind", ["tr", "res", "conj"])
def test_corruption_detected(kind):
    G = preset("C4")
    M = mk.burnside(G)
    bad = mk.corrupt(M, kind)
    rep = mk.check_axioms(bad)
    assert not rep["pass"]
    assert rep["axiom"]
    assert set(rep) - {"pass", "axiom"}


def test_corrupted_multiplication_detected():
    G = preset("C2")
    M = mk.burnside(G)
    M.mult[G.whole.id] = M.mult[G.whole.id].copy()
    M.mult[G.whole.id][0, 0, 0] += 1
    assert not mk.check_axioms(M)["pass"]


def test_conjugation_by_members_is_identity():
    G = preset("D8")
    M = mk.burnside(G)
    for H in G.subgroups():
        for h in H.elements:
            assert M.conj[(h, H.id)] == np.eye(M.rank(H), dtype=int).tolist()


@pytest.mark.parametrize("builder", [lambda: mk.burnside(preset("S3")),
                                     lambda: mk.green_counterexample(3, 2),
                                     lambda: mk.free_truncation(parse_gset(preset("C2"), "C2/e"), 2)])
def test_json_round_trip(builder):
    M = builder()
    s = M.dumps()
    N = mk.MackeyData.from_json(json.loads(s))
    assert N.dumps() == s
    assert mk.check_axioms(N)["pass"]


def test_frobenius_on_burnside():
    G = preset("S3")
    M = mk.burnside(G)
    top = G.whole.id
    for H in G.subgroups():
        for i in range(M.rank(top)):
            for j in range(M.rank(H)):
                x = [int(k == i) for k in range(M.rank(top))]
                y = [int(k == j) for k in range(M.rank(H))]
                lhs = M.product(top, x, M.apply("tr", (H.id, top), y))
                rhs = M.apply("tr", (H.id, top), M.product(H.id, M.apply("res", (H.id, top), x), y))
                assert lhs == rhs


def test_large_rank_associativity_sampled():
    G = preset("C2")
    M = mk.free_truncation(parse_gset(G, "C2/e"), 7)
    top = G.whole.id
    r = M.rank(top)
    assert r > 16
    S = np.sort(np.random.default_rng(top).choice(r, 16, replace=False))
    unit = list(M.unit[top]).index(1)
    a, b = [int(i) for i in S if i != unit][:2]
    bad = mk.MackeyData(M.group, M.levels, M.res, M.tr, M.conj,
                        {h: np.array(t, copy=True) for h, t in M.mult.items()}, M.unit)
    bad.mult[top][a, b, a] += 1
    bad.mult[top][b, a, a] += 1
    r = mk.check_axioms(bad)
    assert not r["pass"]

import itertools

import pytest
from hypothesis import given, strategies as st

from tambara.groups import preset
from tambara.gsets import (GMap, GSet, GroupMismatch, SubgroupMismatch, degree, dependent_product,
                           disjoint_union, identity_map, induce, induce_by_elements, parse_gset,
                           point, product, projection, pullback, to_point, transitive)

from conftest import SMALL


def _brute_iso(X, Y):
    """Search for an equivariant bijection element by element."""
    if X.size != Y.size:
        return False
    G = X.group
    for perm in itertools.permutations(range(Y.size)):
        if all(perm[X.act[g][x]] == Y.act[g][perm[x]] for g in range(G.order) for x in range(X.size)):
            return True
    return False


# [DERIVED] iso type from conjugacy classes of stabilizers agrees with brute force
@pytest.mark.parametrize("name", ["C4", "S3", "C2xC2"])
def test_iso_type_vs_brute_force(name):
    G = preset(name)
    orbs = [transitive(G, H) for H in G.subgroups() if G.order // H.order <= 3]
    for X, Y in itertools.product(orbs, repeat=2):
        assert X.is_isomorphic(Y) == _brute_iso(X, Y)


# [PAPER] D8/<x> × D8/<x> ≅ D8/<x> ⊔ D8/e ⊔ D8/<x>
def test_d8_product():
    G = preset("D8")
    X = parse_gset(G, "D8/<x>")
    P, _, _ = product(X, X)
    assert P.is_isomorphic(parse_gset(G, "D8/<x> + D8/e + D8/<x>"))


def test_product_examples():
    G = preset("C4")
    X = parse_gset(G, "C4/C2")
    P, _, _ = product(X, X)
    assert P.is_isomorphic(parse_gset(G, "C4/C2 + C4/C2"))
    Q, _, _ = product(X, point(G))
    assert Q.is_isomorphic(X)


@given(st.sampled_from(SMALL), st.data())
def test_product_size(name, data):
    G = preset(name)
    subs = G.subgroups()
    X = GSet(G, data.draw(st.lists(st.sampled_from(subs), max_size=2)))
    Y = GSet(G, data.draw(st.lists(st.sampled_from(subs), max_size=2)))
    P, p1, p2 = product(X, Y)
    assert P.size == X.size * Y.size
    assert {(p1(z), p2(z)) for z in range(P.size)} == set(itertools.product(range(X.size), range(Y.size)))


# [PAPER] G/K ×_{G/L} G/K' is a disjoint union of |L/K'| copies of G/K when K ≤ K'
@pytest.mark.parametrize("name", ["C4", "C2xC2", "Q8"])
def test_pullback_chain(name):
    G = preset(name)
    for K, K2, L in itertools.product(G.subgroups(), repeat=3):
        if K <= K2 <= L:
            P, _, _ = pullback(projection(G, K, L), projection(G, K2, L))
            assert P.is_isomorphic(GSet(G, [K] * (L.order // K2.order)))


def test_pullback_s3():
    G = preset("S3")
    P, _, _ = pullback(to_point(parse_gset(G, "S3/<s>")), to_point(parse_gset(G, "S3/<r>")))
    assert P.is_isomorphic(parse_gset(G, "S3/e"))


def test_pullback_identity():
    G = preset("D8")
    f = projection(G, G.trivial, G.sub("x"))
    P, a, b = pullback(f, identity_map(f.target))
    assert P.is_isomorphic(f.source)


# [PAPER] pullback preserves degree
@given(st.sampled_from(["C4", "S3", "D8", "Q8"]), st.data())
def test_pullback_preserves_degree(name, data):
    G = preset(name)
    subs = G.subgroups()
    chains = [(A, B, C) for A in subs for B in subs for C in subs if A <= B <= C]
    A, B, C = data.draw(st.sampled_from(chains))
    D = data.draw(st.sampled_from([s for s in subs if s <= C]))
    f = projection(G, A, B)
    g = projection(G, D, C)
    h = projection(G, B, C)
    P, pa, pb = pullback(h, g)
    # A ×_C D → B ×_C D
    Q, qa, qb = pullback(GMap(f.source, h.target, [h(f(a)) for a in range(f.source.size)]), g)
    imgs = []
    for z in range(Q.size):
        target = (f(qa(z)), qb(z))
        imgs.append(next(w for w in range(P.size) if (pa(w), pb(w)) == target))
    assert degree(GMap(Q, P, imgs)) == degree(f)


def test_degree_examples():
    G = preset("D8")
    X = parse_gset(G, "D8/<x>")
    assert degree(identity_map(X)) == 1
    K = G.sub("a")
    assert degree(projection(G, G.trivial, K)) == K.order
    # ⊔ G/H_i → G/K has degree Σ|K|/|H_i|
    U, incs = disjoint_union(transitive(G, G.trivial), transitive(G, G.sub("a^2")))
    f = GMap(U, transitive(G, K), [projection(G, G.trivial, K)(x) for x in range(8)]
             + [projection(G, G.sub("a^2"), K)(x) for x in range(4)])
    assert degree(f) == 4 + 2


def test_degree_undefined():
    G = preset("C2")
    X = parse_gset(G, "C2/e + point + point")
    Y = parse_gset(G, "point + point")
    f = GMap(X, Y, [0, 0, 0, 1])
    assert degree(f) is None


@pytest.mark.parametrize("G_name,H_text,X_text,expected", [
    ("C4", "<a^2>", "C2/e", "C4/e"),
    ("C4", "<a^2>", "point", "C4/<a^2>"),
    ("S3", "e", "point", "S3/e"),
    ("D8", "<x>", "C2/e + point", "D8/e + D8/<x>"),
])
def test_induce(G_name, H_text, X_text, expected):
    from tambara.gsets import parse_subgroup
    G = preset(G_name)
    H = parse_subgroup(G, H_text)
    Hg, _ = H.as_group()
    X_H = parse_gset(Hg, X_text.replace("C2", Hg.name)) if "/" in X_text else parse_gset(Hg, X_text)
    A = induce(H, X_H)
    B = induce_by_elements(H, X_H)
    assert A.is_isomorphic(parse_gset(G, expected))
    assert B.is_isomorphic(A)
    assert A.size == (G.order // H.order) * X_H.size


def test_induce_wrong_group():
    G = preset("C4")
    with pytest.raises(SubgroupMismatch):
        induce(G.sub("a^2"), point(G))


def test_group_mismatch():
    with pytest.raises(GroupMismatch):
        product(point(preset("C2")), point(preset("C3")))


# [TRIVIAL] Π along an identity is A; Π of ∅ over a surjection with nonempty fibers is ∅
def test_dependent_product_trivial():
    G = preset("C2")
    X = parse_gset(G, "C2/e")
    A = parse_gset(G, "C2/e + C2/e")
    p = GMap(A, X, [0, 1, 0, 1])
    D = dependent_product(identity_map(X), p)
    assert D.pi.is_isomorphic(A)
    E = GSet(G, [])
    D = dependent_product(to_point(X), GMap(E, X, []))
    assert D.pi.size == 0


# [DERIVED] sections of C2/e ⊔ C2/e over C2/e → pt: 4 elements, C2/C2 ⊔ C2/C2 ⊔ C2/e
def test_dependent_product_c2():
    G = preset("C2")
    X = parse_gset(G, "C2/e")
    A = parse_gset(G, "C2/e + C2/e")
    p = GMap(A, X, [0, 1, 0, 1])
    D = dependent_product(to_point(X), p)
    assert D.pi.size == 4
    assert D.pi.is_isomorphic(parse_gset(G, "C2/C2 + C2/C2 + C2/e"))


def _count_maps_over(P, A, pr, p):
    """Equivariant maps P → A over X, counted orbit by orbit."""
    total = 1
    for i in range(len(P.orbits)):
        z = P.base_point(i)
        S = P.stabilizer(z)
        total *= sum(1 for a in range(A.size) if p(a) == pr(z) and S <= A.stabilizer(a))
    return total


# [DERIVED] Hom_Y(T, Π_f A) = Hom_X(T ×_Y X, A) for all orbits T = G/K over Y
@pytest.mark.parametrize("name,x_text,a_text", [
    ("C2", "C2/e", "C2/e + C2/e"), ("C4", "C4/C2", "C4/e + C4/C2"), ("S3", "S3/<s>", "S3/e"),
    ("C2xC2", "C2xC2/<a> + C2xC2/<b>", "C2xC2/e"),
])
def test_dependent_product_universal(name, x_text, a_text):
    G = preset(name)
    X = parse_gset(G, x_text)
    A = parse_gset(G, a_text)
    f = to_point(X)
    # any equivariant p: A → X, sending each orbit's base point somewhere legal
    imgs = []
    for i, S in enumerate(A.orbits):
        x = next(x for x in range(X.size) if S <= X.stabilizer(x))
        imgs.append(x)
    p = GMap.from_orbits(A, X, imgs)
    D = dependent_product(f, p)
    assert D.pi.size <= 200
    for K in G.subgroups():
        T = transitive(G, K)
        t = to_point(T)
        lhs = sum(1 for w in range(D.pi.size) if K <= D.pi.stabilizer(w))
        P, pr1, pr2 = pullback(t, f)
        assert lhs == _count_maps_over(P, A, pr2, p)


def test_json_round_trip():
    G = preset("D8")
    X = parse_gset(G, "D8/<x> + D8/e + point")
    assert GSet.from_json(X.to_json(), G) == X

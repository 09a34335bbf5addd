import random

import pytest
from hypothesis import given, settings, strategies as st

from tambara import bispan as bs
from tambara.groups import preset
from tambara.gsets import GMap, GSet, identity_map, parse_gset, point, projection, to_point

from strategies import classes, groups, gsets


def _relabel(b: bs.Bispan, rng) -> bs.Bispan:
    """An isomorphic bispan: permute and re-base the orbits of A and B."""
    G = b.X.group

    def twist(S):
        order = list(range(len(S.orbits)))
        rng.shuffle(order)
        gs = [rng.randrange(G.order) for _ in order]
        new = GSet(G, [S.orbits[i].conjugate(g) for i, g in zip(order, gs)])
        to_old = GMap.from_orbits(new, S, [S.act[g][S.base_point(i)] for i, g in zip(order, gs)])
        return new, to_old

    B2, beta = twist(b.B)
    A2, alpha = twist(b.A)
    beta_inv = [0] * B2.size
    for v, w in enumerate(beta.images):
        beta_inv[w] = v
    p = GMap(A2, b.X, [b.p(alpha(a)) for a in range(A2.size)])
    q = GMap(A2, B2, [beta_inv[b.q(alpha(a))] for a in range(A2.size)])
    r = GMap(B2, b.Y, [b.r(beta(v)) for v in range(B2.size)])
    return bs.Bispan(p, q, r)


@given(groups, st.data())
def test_canonicalize_idempotent(G, data):
    X = data.draw(gsets(G))
    Y = data.draw(gsets(G))
    c = data.draw(classes(X, Y))
    assert bs.canonicalize(c.representative()) == c


@given(groups, st.data(), st.integers(0, 2**16))
def test_isomorphic_bispans_share_keys(G, data, seed):
    X = data.draw(gsets(G))
    Y = data.draw(gsets(G, allow_empty=False))
    c = data.draw(classes(X, Y, max_comps=3))
    b = _relabel(c.representative(), random.Random(seed))
    assert bs.canonicalize(b).key() == c.key()


def _orbit_maps(S, T, used, extra_ok):
    """Equivariant maps of orbit i of S onto unused orbits of T, as dicts, via backtracking."""
    G = S.group

    def extend(i, acc, used):
        if i == len(S.orbits):
            yield acc
            return
        base = S.base_point(i)
        for t in range(T.size):
            j = T.orbit_of[t]
            if j in used or T.stabilizer(t).elset != S.stabilizer(base).elset:
                continue
            m = {S.act[g][base]: T.act[g][t] for g in range(G.order)}
            if not extra_ok(m):
                continue
            yield from extend(i + 1, {**acc, **m}, used | {j})

    return extend(0, {}, used)


def _brute_iso(b1, b2) -> bool:
    """Search for equivariant bijections A1 → A2, B1 → B2 commuting with all legs."""
    if (b1.A.size, b1.B.size) != (b2.A.size, b2.B.size):
        return False
    if len(b1.A.orbits) != len(b2.A.orbits) or len(b1.B.orbits) != len(b2.B.orbits):
        return False
    for beta in _orbit_maps(b1.B, b2.B, frozenset(),
                            lambda m: all(b2.r(w) == b1.r(v) for v, w in m.items())):
        def ok(m, beta=beta):
            return all(b2.p(w) == b1.p(a) and b2.q(w) == beta[b1.q(a)] for a, w in m.items())
        for _ in _orbit_maps(b1.A, b2.A, frozenset(), ok):
            return True
    return False


# [DERIVED] equal canonical keys exactly when a brute-force isomorphism exists
@given(st.sampled_from(["C2", "C3", "C4", "S3"]).map(preset), st.data())
def test_keys_match_brute_force_iso(G, data):
    X = data.draw(gsets(G, max_orbits=2, allow_empty=False))
    Y = data.draw(gsets(G, max_orbits=1, allow_empty=False))
    c1 = data.draw(classes(X, Y, max_comps=2, max_atoms=2))
    if data.draw(st.booleans()):
        c2 = c1
    else:
        c2 = data.draw(classes(X, Y, max_comps=2, max_atoms=2))
    b1 = c1.representative()
    b2 = _relabel(c2.representative(), random.Random(data.draw(st.integers(0, 999))))
    assert (bs.canonicalize(b2).key() == c1.key()) == _brute_iso(b1, b2)


@given(groups, st.data())
def test_semiring_laws(G, data):
    X = data.draw(gsets(G, max_orbits=1))
    Y = data.draw(gsets(G, max_orbits=1, allow_empty=False))
    a, b, c = (data.draw(classes(X, Y, max_comps=1)) for _ in range(3))
    zero, one = bs.zero(X, Y), bs.one(X, Y)
    assert a + zero == a
    assert a * one == a
    assert a * zero == zero
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


# [PAPER] t·t = p·t for t = [pt ← ∅ → C_p/e → pt]
@pytest.mark.parametrize("p", [2, 3, 5])
def test_cp_transfer_square(p):
    G = preset(f"C{p}")
    P = point(G)
    t = bs.BispanClass(P, P, [(G.trivial.id, 0, ())])
    tt = t * t
    assert tt.terms() == {t.components[0]: p}


def test_signature_mismatch():
    G = preset("C2")
    a = bs.one(point(G), point(G))
    b = bs.one(parse_gset(G, "C2/e"), point(G))
    with pytest.raises(bs.SignatureMismatch):
        bs.mul(a, b)
    with pytest.raises(bs.SignatureMismatch):
        bs.compose(a, bs.identity(parse_gset(G, "C2/e")))


def test_empty_bispan_is_canonical():
    G = preset("S3")
    E = GSet(G, [])
    z = bs.zero(E, E)
    assert z.components == ()
    assert bs.canonicalize(z.representative()) == z
    assert bs.identity(E) == z


def test_key_is_sorted_integers():
    G = preset("C4")
    X = parse_gset(G, "C4/e")
    Y = point(G)
    c = bs.BispanClass(X, Y, [(G.trivial.id, 0, ((0, 1), (0, 0)))])
    assert c.key() == bs.BispanClass(X, Y, [(0, 0, ((0, 0), (0, 1)))]).key()
    assert b" " not in c.key()


# ---------------------------------------------------------------------------
# composition

@given(st.sampled_from(["C2", "C3", "S3"]).map(preset), st.data())
@settings(max_examples=40)
def test_composition_identity_and_associativity(G, data):
    X, Y, Z, W = (data.draw(gsets(G, max_orbits=1, allow_empty=False)) for _ in range(4))
    f = data.draw(classes(X, Y, max_comps=1, max_atoms=1))
    g = data.draw(classes(Y, Z, max_comps=1, max_atoms=1))
    h = data.draw(classes(Z, W, max_comps=1, max_atoms=1))
    assert bs.compose(bs.identity(Y), f) == f
    assert bs.compose(f, bs.identity(X)) == f
    assert bs.compose(h, bs.compose(g, f)) == bs.compose(bs.compose(h, g), f)


# [DERIVED] T, N and R are functorial on composable maps
@pytest.mark.parametrize("name", ["C2", "C4", "S3", "D8"])
def test_distinguished_morphisms_compose(name):
    G = preset(name)
    subs = G.subgroups()
    for A in subs:
        for B in subs:
            for C in subs:
                if not (A <= B <= C) or C.order // A.order > 4:
                    continue
                f = projection(G, A, B)
                g = projection(G, B, C)
                gf = GMap(f.source, g.target, [g(f(x)) for x in range(f.source.size)])
                assert bs.compose(bs.t_of(g), bs.t_of(f)) == bs.t_of(gf)
                assert bs.compose(bs.n_of(g), bs.n_of(f)) == bs.n_of(gf)
                assert bs.compose(bs.r_of(f), bs.r_of(g)) == bs.r_of(gf)


# [DERIVED] R_f ∘ T_f for f: C2/e → pt is id + c_g
def test_res_after_tr_c2():
    G = preset("C2")
    f = to_point(parse_gset(G, "C2/e"))
    out = bs.compose(bs.r_of(f), bs.t_of(f))
    assert len(out.components) == 2
    assert out == bs.identity(f.source) + bs.c_of(G, 1, G.trivial)


def test_t_of_identity():
    G = preset("D8")
    X = parse_gset(G, "D8/<x> + D8/e")
    assert bs.t_of(identity_map(X)) == bs.identity(X)


# [PAPER] c_g ∘ c_{g⁻¹} = id and c_h = id for h ∈ H
@pytest.mark.parametrize("name", ["S3", "D8", "Q8"])
def test_conjugations(name):
    G = preset(name)
    for H in G.subgroups():
        for g in range(G.order):
            gi = G.inv[g]
            c = bs.compose(bs.c_of(G, gi, H.conjugate(g)), bs.c_of(G, g, H))
            assert c == bs.identity(GSet(G, [H]))
        for h in H.elements:
            assert bs.c_of(G, h, H) == bs.identity(GSet(G, [H]))


def test_conjugation_multiplicative():
    G = preset("S3")
    H = G.sub("s")
    for g in range(G.order):
        for g2 in range(G.order):
            lhs = bs.compose(bs.c_of(G, g, H.conjugate(g2)), bs.c_of(G, g2, H))
            assert lhs == bs.c_of(G, G.mul[g][g2], H)


# [DERIVED] T along C2/e → pt applied to the unit of 𝔸[∅](C2/e) is the Burnside class [C2/e]
def test_transfer_into_burnside():
    G = preset("C2")
    E = GSet(G, [])
    f = to_point(parse_gset(G, "C2/e"))
    out = bs.compose(bs.t_of(f), bs.one(E, f.source))
    assert out.components == ((G.trivial.id, 0, ()),)


# [PAPER] tuples differing by ℓ ∈ L and by elements of K describe one class
def test_equivalent_tuples_share_keys():
    G = preset("C4")
    X = parse_gset(G, "C4/e")
    Y = point(G)
    K = G.sub("a^2").id
    keys = {bs.BispanClass(X, Y, [(K, 0, ((0, x),))]).key() for x in range(4)}
    assert len(keys) == 1
    two = {bs.BispanClass(X, Y, [(0, 0, ((0, 0), (0, x)))]).key() for x in range(4)}
    assert len(two) == 3

"""Bispans [X ← A → B → Y] of finite G-sets, up to isomorphism.

An isomorphism class splits along the orbits of B into irreducible
pieces.  Each irreducible piece is recorded as a *component*
``(K, y, atoms)``: ``K`` is the stabilizer of a chosen point of B, ``y``
its image in Y, and ``atoms`` the sorted multiset of A-orbits over that
point, each written ``(S, x)`` with ``S`` the stabilizer of a chosen
point of the A-orbit (so ``S ≤ K``) and ``x`` its image in X.  Subgroups
are stored by id, points by element index.

Moving the chosen point of the A-orbit by ``k ∈ K`` gives
``(kSk⁻¹, k·x)``; moving the chosen point of B by ``g`` conjugates the
whole triple.  The canonical component is the lexicographic minimum
over both, which is what :func:`canonical_component` computes.  A class
is the sorted tuple of its canonical components, so two bispans are
isomorphic exactly when their classes are equal.
"""

from __future__ import annotations

import json
from collections import Counter
from functools import lru_cache

from .groups import FiniteGroup
from .gsets import (GMap, GSet, GroupMismatch, dependent_product, disjoint_union, empty,
                    identity_map, pullback)


class SignatureMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# canonical forms

def canonical_atom(G: FiniteGroup, X: GSet, K: int, S: int, x: int) -> tuple[int, int]:
    conj, act = G.conj_table, X.act
    return min((conj[k][S], act[k][x]) for k in G.sub(K).elements)


@lru_cache(maxsize=None)
def _atom_canon_table(X: GSet, K: int) -> dict:
    return {}


def canonical_atoms(X: GSet, K: int, atoms) -> tuple:
    G = X.group
    memo = _atom_canon_table(X, K)
    out = []
    for a in atoms:
        c = memo.get(a)
        if c is None:
            c = memo[a] = canonical_atom(G, X, K, a[0], a[1])
        out.append(c)
    out.sort()
    return tuple(out)


def canonical_component(X: GSet, Y: GSet, K: int, y: int, atoms) -> tuple:
    return _canon(X, Y, K, y, tuple(sorted(atoms)))


@lru_cache(maxsize=200000)
def _canon(X: GSet, Y: GSet, K: int, y: int, atoms: tuple) -> tuple:
    G = X.group
    conj, ax, ay = G.conj_table, X.act, Y.act
    best = None
    for g in range(G.order):
        head = (conj[g][K], ay[g][y])
        if best is not None and head > best[:2]:
            continue
        cand = head + (canonical_atoms(X, head[0], [(conj[g][s], ax[g][x]) for s, x in atoms]),)
        if best is None or cand < best:
            best = cand
    return best


def atom_degree(G: FiniteGroup, K: int, atom) -> int:
    return G.sub(K).order // G.sub(atom[0]).order


def component_degree(G: FiniteGroup, comp) -> int:
    k = G.sub(comp[0]).order
    return sum(k // G.sub(s).order for s, _ in comp[2])


def check_component(X: GSet, Y: GSet, comp):
    G = X.group
    K, y, atoms = comp
    Kset = G.sub(K).elset
    if not Kset <= Y.stabilizer(y).elset:
        raise ValueError("K is not contained in the stabilizer of y")
    for s, x in atoms:
        S = G.sub(s).elset
        if not (S <= Kset and S <= X.stabilizer(x).elset):
            raise ValueError(f"atom {(s, x)} violates S ≤ K ∩ Stab(x)")


# ---------------------------------------------------------------------------
# classes

class BispanClass:
    """Isomorphism class of [X ← A → B → Y] as a sorted tuple of components."""

    __slots__ = ("X", "Y", "components", "_key")

    def __init__(self, X: GSet, Y: GSet, components=(), canonical: bool = False):
        if X.group is not Y.group:
            raise GroupMismatch("X and Y over different groups")
        self.X = X
        self.Y = Y
        if not canonical:
            components = [canonical_component(X, Y, *c) for c in components]
        self.components = tuple(sorted(components))
        self._key = None

    @property
    def group(self) -> FiniteGroup:
        return self.X.group

    def __repr__(self):
        return f"BispanClass({list(self.components)})"

    def __eq__(self, other):
        return (isinstance(other, BispanClass) and other.X == self.X and other.Y == self.Y
                and other.components == self.components)

    def __hash__(self):
        return hash(self.components)

    def __lt__(self, other):
        return self.components < other.components

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    def terms(self) -> Counter:
        """The formal sum of irreducible components."""
        return Counter(self.components)

    def irreducibles(self) -> list["BispanClass"]:
        return [BispanClass(self.X, self.Y, [c], canonical=True) for c in self.components]

    def degree(self) -> int:
        """Degree of A → B when all components share one; raises otherwise."""
        degs = {component_degree(self.group, c) for c in self.components}
        if len(degs) != 1:
            raise ValueError("degree undefined")
        return degs.pop()

    def to_json(self) -> dict:
        return {"components": [[k, y, [list(a) for a in atoms]] for k, y, atoms in self.components]}

    def key(self) -> bytes:
        """Canonical serialized bytes (sorted integer lists only)."""
        if self._key is None:
            payload = {"X": [h.id for h in self.X.orbits], "Y": [h.id for h in self.Y.orbits],
                       "components": self.to_json()["components"]}
            self._key = json.dumps(payload, separators=(",", ":"), sort_keys=True).encode()
        return self._key

    @classmethod
    def from_json(cls, X: GSet, Y: GSet, data) -> "BispanClass":
        comps = [(k, y, tuple(tuple(a) for a in atoms)) for k, y, atoms in data["components"]]
        return cls(X, Y, comps)

    def representative(self) -> "Bispan":
        return to_bispan(self)


class Bispan:
    """A concrete bispan X ←p A →q B →r Y."""

    def __init__(self, p: GMap, q: GMap, r: GMap):
        if p.source != q.source or q.target != r.source:
            raise SignatureMismatch("legs do not chain")
        if len({id(m.source.group) for m in (p, q, r)}) != 1:
            raise GroupMismatch("legs over different groups")
        self.p, self.q, self.r = p, q, r

    @property
    def X(self):
        return self.p.target

    @property
    def A(self):
        return self.p.source

    @property
    def B(self):
        return self.r.source

    @property
    def Y(self):
        return self.r.target

    def to_json(self) -> dict:
        return {"p": self.p.to_json(), "q": self.q.to_json(), "r": self.r.to_json()}


def to_bispan(c: BispanClass) -> Bispan:
    G = c.group
    B = GSet(G, [G.sub(k) for k, _, _ in c.components])
    A_orbits, q_base, p_base = [], [], []
    for j, (k, y, atoms) in enumerate(c.components):
        for s, x in atoms:
            A_orbits.append(G.sub(s))
            q_base.append(B.base_point(j))
            p_base.append(x)
    A = GSet(G, A_orbits)
    p = GMap.from_orbits(A, c.X, p_base)
    q = GMap.from_orbits(A, B, q_base)
    r = GMap.from_orbits(B, c.Y, [y for _, y, _ in c.components])
    return Bispan(p, q, r)


def canonicalize(b: Bispan) -> BispanClass:
    """Read off components orbit by orbit of B and canonicalize them."""
    A, B = b.A, b.B
    comps = []
    over = [[] for _ in range(B.size)]
    for a, t in enumerate(b.q.images):
        over[t].append(a)
    aa = A.act
    for j in range(len(B.orbits)):
        base = B.base_point(j)
        K = B.orbits[j]
        seen = set()
        atoms = []
        for a in over[base]:
            if a in seen:
                continue
            seen.update(aa[k][a] for k in K.elements)
            atoms.append((A.stab_ids[a], b.p.images[a]))
        comps.append((K.id, b.r.images[base], tuple(atoms)))
    return BispanClass(b.X, b.Y, comps)


# ---------------------------------------------------------------------------
# semiring structure, computed on concrete representatives

def zero(X: GSet, Y: GSet) -> BispanClass:
    return BispanClass(X, Y, ())


def one(X: GSet, Y: GSet) -> BispanClass:
    """[X ← ∅ → Y → Y]"""
    return BispanClass(X, Y, [(h.id, Y.base_point(j), ()) for j, h in enumerate(Y.orbits)])


def _same_signature(a: BispanClass, b: BispanClass):
    if a.X != b.X or a.Y != b.Y:
        raise SignatureMismatch("classes have different (X, Y)")


def add(a: BispanClass, b: BispanClass) -> BispanClass:
    _same_signature(a, b)
    return BispanClass(a.X, a.Y, a.components + b.components, canonical=True)


def mul(a: BispanClass, b: BispanClass) -> BispanClass:
    """[X ← (A ×_Y B′) ⊔ (A′ ×_Y B) → B ×_Y B′ → Y], built element by element."""
    _same_signature(a, b)
    s, t = to_bispan(a), to_bispan(b)
    P, pi1, pi2 = pullback(s.r, t.r)
    A1, a1_to_A, a1_to_P = pullback(s.q, pi1)
    A2, a2_to_A, a2_to_P = pullback(t.q, pi2)
    A, (i1, i2) = disjoint_union(A1, A2)
    p = GMap(A, a.X, [s.p.images[v] for v in a1_to_A.images]
             + [t.p.images[v] for v in a2_to_A.images], check=False)
    q = GMap(A, P, list(a1_to_P.images) + list(a2_to_P.images), check=False)
    r = GMap(P, a.Y, [s.r.images[v] for v in pi1.images], check=False)
    return canonicalize(Bispan(p, q, r))


def compose(g: BispanClass, f: BispanClass) -> BispanClass:
    """g ∘ f for f: X → Y and g: Y → Z via the dependent-product construction."""
    if f.Y != g.X:
        raise SignatureMismatch("middle objects differ")
    F, Gb = to_bispan(f), to_bispan(g)
    # P = A′ ×_Y B, sections of P → A′ along q′ give B″
    P, P_to_A2, P_to_B = pullback(Gb.p, F.r)
    ed = dependent_product(Gb.q, P_to_A2)
    W_to_B = GMap(ed.w, F.B, [P_to_B.images[v] for v in ed.evaluation.images], check=False)
    A3, A3_to_W, A3_to_A = pullback(W_to_B, F.q)
    p = GMap(A3, f.X, [F.p.images[a] for a in A3_to_A.images], check=False)
    q = GMap(A3, ed.pi, [ed.w_to_pi.images[w] for w in A3_to_W.images], check=False)
    r = GMap(ed.pi, g.Y, [Gb.r.images[b] for b in ed.to_base.images], check=False)
    return canonicalize(Bispan(p, q, r))


def from_maps(p: GMap, q: GMap, r: GMap) -> BispanClass:
    return canonicalize(Bispan(p, q, r))


def identity(X: GSet) -> BispanClass:
    i = identity_map(X)
    return from_maps(i, i, i)


def r_of(f: GMap) -> BispanClass:
    """R_f = [Y ←f X = X = X] for f: X → Y."""
    i = identity_map(f.source)
    return from_maps(f, i, i)


def n_of(f: GMap) -> BispanClass:
    """N_f = [X = X →f Y = Y]."""
    return from_maps(identity_map(f.source), f, identity_map(f.target))


def t_of(f: GMap) -> BispanClass:
    """T_f = [X = X = X →f Y]."""
    i = identity_map(f.source)
    return from_maps(i, i, f)


def conj_map(G: FiniteGroup, g: int, H) -> GMap:
    """f_g: G/H → G/gHg⁻¹, xH ↦ xg⁻¹(gHg⁻¹)."""
    H = G.sub(H)
    src = GSet(G, [H])
    tgt = GSet(G, [H.conjugate(g)])
    return GMap.from_orbits(src, tgt, [tgt.element(0, G.inv[g])])


def c_of(G: FiniteGroup, g: int, H) -> BispanClass:
    """C_g = T_{f_g}."""
    return t_of(conj_map(G, g, H))


def from_empty_class(X: GSet, B: GSet, r: GMap) -> BispanClass:
    """[X ← ∅ → B → Y]"""
    A = empty(X.group)
    return from_maps(GMap(A, X, []), GMap(A, B, []), r)

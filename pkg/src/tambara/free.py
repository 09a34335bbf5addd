"""Levels 𝔸[X](G/L) of free polynomial Tambara functors.

Elements are integer combinations of irreducible components (see
:mod:`tambara.bispan`).  The structure maps here use closed formulas on
components; :mod:`tambara.bispan` computes the same things on concrete
G-sets and serves as the reference they are tested against.
"""

from __future__ import annotations

from collections import Counter, namedtuple
from functools import lru_cache

from . import bispan as bs
from .groups import FiniteGroup, NotASubgroupChain, double_cosets, is_dedekind
from .gsets import GMap, GSet, projection


class TruncationTooLarge(RuntimeError):
    pass


class NotDedekind(ValueError):
    pass


class ChainViolation(ValueError):
    pass


@lru_cache(maxsize=None)
def level_set(G: FiniteGroup, L: int) -> GSet:
    return GSet(G, [G.sub(L)])


# ---------------------------------------------------------------------------
# component formulas

@lru_cache(maxsize=None)
def _dc(G: FiniteGroup, A: int, B: int, within: int) -> tuple[int, ...]:
    return tuple(double_cosets(G.sub(A), G.sub(B), G.sub(within)))


def restrict_atoms(X: GSet, atoms, K: int, h: int, K2: int) -> list:
    """Atoms over a point of stabilizer K2 mapping to h·b, where b has stabilizer K.

    Requires h⁻¹K2h ≤ K.  Each (S, x) splits over (h⁻¹K2h)\\K/S.
    """
    G = X.group
    conj, meet, mul = G.conj_table, G.meet_table, G.mul
    inner = conj[G.inv[h]][K2]
    out = []
    for s, x in atoms:
        for k in _dc(G, inner, s, K):
            hk = mul[h][k]
            out.append((meet[K2][conj[hk][s]], X.act[hk][x]))
    return out


def comp_mul(X: GSet, Y: GSet, c1, c2) -> list:
    """Components of c1·c2 (unnormalized), via orbits of B ×_Y B′."""
    G = X.group
    K1, y1, M1 = c1
    K2, y2, M2 = c2
    ay = Y.act
    K1e = G.sub(K1).elements
    K2e = G.sub(K2).elements
    mul, conj, meet = G.mul, G.conj_table, G.meet_table
    seen = set()
    out = []
    for h in range(G.order):
        if h in seen or ay[h][y2] != y1:
            continue
        for a in K1e:
            ah = mul[a][h]
            for b in K2e:
                seen.add(mul[ah][b])
        K3 = meet[K1][conj[h][K2]]
        atoms = restrict_atoms(X, M1, K1, 0, K3) + restrict_atoms(X, M2, K2, h, K3)
        out.append((K3, y1, tuple(atoms)))
    return out


def comp_pullback(X: GSet, c, f: GMap) -> list:
    """Components of R_f(c) for f: Z → Y (restriction along f)."""
    G = X.group
    K, y, M = c
    Z = f.source
    az = Z.act
    Ke = G.sub(K).elements
    seen = set()
    out = []
    for z in range(Z.size):
        if f.images[z] != y or z in seen:
            continue
        seen.update(az[k][z] for k in Ke)
        K2 = G.meet_table[K][Z.stab_ids[z]]
        out.append((K2, z, tuple(restrict_atoms(X, M, K, 0, K2))))
    return out


def comp_postcompose(c, f: GMap) -> tuple:
    K, y, M = c
    return (K, f.images[y], M)


def comp_relabel(c, f: GMap) -> tuple:
    """R_f^*: [X ← A → B → Y] ↦ [X′ ← A → B → Y] along f: X → X′."""
    K, y, M = c
    return (K, y, tuple((s, f.images[x]) for s, x in M))


def comp_norm_pullback(c, f: GMap) -> tuple:
    """N_f^*: [Y ← A → B → Z] ↦ [X ← A ×_Y X → B → Z] for f: X → Y."""
    G = f.source.group
    K, z, M = c
    X = f.source
    ax = X.act
    atoms = []
    for s, y in M:
        Se = G.sub(s).elements
        seen = set()
        for x in range(X.size):
            if f.images[x] != y or x in seen:
                continue
            seen.update(ax[k][x] for k in Se)
            atoms.append((G.meet_table[s][X.stab_ids[x]], x))
    return (K, z, tuple(atoms))


# ---------------------------------------------------------------------------
# degrees

WeightedDegree = namedtuple("WeightedDegree", "n K")


def degree_add(a: WeightedDegree, b: WeightedDegree, G: FiniteGroup) -> WeightedDegree:
    K = None if a.K is None or b.K is None else G.meet_table[a.K][b.K]
    return WeightedDegree(a.n + b.n, K)


def degree_of(G: FiniteGroup, c) -> WeightedDegree:
    """(Σ|K|/|S|, K); the subgroup part only for Dedekind groups."""
    if isinstance(c, bs.BispanClass):
        if not c.is_irreducible():
            raise ValueError("degree_of needs an irreducible class")
        c = c.components[0]
    n = bs.component_degree(G, c)
    return WeightedDegree(n, c[0] if is_dedekind(G) else None)


# ---------------------------------------------------------------------------
# level elements

class LevelElement:
    """An element of 𝔸[X](G/L): integer combination of canonical components."""

    __slots__ = ("X", "L", "terms", "bound")

    def __init__(self, X: GSet, L, terms=None, bound=None, canonical=False):
        G = X.group
        self.X = X
        self.L = G.sub(L)
        Y = level_set(G, self.L.id)
        acc = Counter()
        for c, v in (terms or {}).items():
            if v:
                acc[c if canonical else bs.canonical_component(X, Y, *c)] += v
        self.terms = {c: v for c, v in acc.items() if v}
        self.bound = bound

    @property
    def group(self) -> FiniteGroup:
        return self.X.group

    @property
    def Y(self) -> GSet:
        return level_set(self.group, self.L.id)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*{c}" for c, v in sorted(self.terms.items()))

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return (isinstance(other, LevelElement) and other.X == self.X and other.L == self.L
                and other.terms == self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _like(self, terms, bound=None) -> "LevelElement":
        return LevelElement(self.X, self.L, terms, bound, canonical=True)

    def _check(self, other):
        if other.X != self.X or other.L != self.L:
            raise bs.SignatureMismatch("elements live in different levels")

    def __add__(self, other):
        self._check(other)
        t = Counter(self.terms)
        t.update(other.terms)
        return self._like(t, _min_bound(self.bound, other.bound))

    def __neg__(self):
        return self._like({c: -v for c, v in self.terms.items()}, self.bound)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return self._like({c: k * v for c, v in self.terms.items()}, self.bound)

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        self._check(other)
        X, Y = self.X, self.Y
        acc = Counter()
        for c1, v1 in self.terms.items():
            for c2, v2 in other.terms.items():
                for c in comp_mul(X, Y, c1, c2):
                    acc[bs.canonical_component(X, Y, *c)] += v1 * v2
        bound = None
        if self.bound is not None and other.bound is not None:
            bound = self.bound + other.bound
        return self._like(acc, bound)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {degree_of(self.group, c) for c in self.terms}

    def homogeneous_parts(self) -> dict:
        parts = {}
        for c, v in self.terms.items():
            parts.setdefault(degree_of(self.group, c), {})[c] = v
        return {d: self._like(t) for d, t in parts.items()}

    def max_degree(self) -> int:
        return max((bs.component_degree(self.group, c) for c in self.terms), default=0)

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self.terms.values())

    def to_class(self) -> bs.BispanClass:
        """The bispan class of a nonnegative element."""
        if not self.is_nonnegative():
            raise ValueError("only nonnegative elements are bispan classes")
        comps = [c for c, v in sorted(self.terms.items()) for _ in range(v)]
        return bs.BispanClass(self.X, self.Y, comps, canonical=True)

    @classmethod
    def from_class(cls, c: bs.BispanClass, L=None) -> "LevelElement":
        if L is None:
            if len(c.Y.orbits) != 1:
                raise ValueError("Y must be a single orbit G/L")
            L = c.Y.orbits[0]
        Y = level_set(c.group, c.group.sub(L).id)
        if c.Y != Y:
            raise ValueError("class does not live at level G/L")
        return cls(c.X, L, Counter(c.components), canonical=True)

    def truncate(self, max_n: int) -> "LevelElement":
        G = self.group
        return self._like({c: v for c, v in self.terms.items()
                           if bs.component_degree(G, c) <= max_n}, max_n)


def _min_bound(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def basis_element(X: GSet, L, comp) -> LevelElement:
    return LevelElement(X, L, {comp: 1})


def unit(X: GSet, L) -> LevelElement:
    G = X.group
    L = G.sub(L)
    return LevelElement(X, L, {(L.id, 0, ()): 1})


def zero(X: GSet, L) -> LevelElement:
    return LevelElement(X, L, {})


def _chain(G, L, L2):
    L, L2 = G.sub(L), G.sub(L2)
    if not L <= L2:
        raise NotASubgroupChain(f"{L!r} is not contained in {L2!r}")
    return L, L2


def res(e: LevelElement, to) -> LevelElement:
    """Res^{L}_{L′} for L′ ≤ L (pullback along G/L′ → G/L)."""
    G = e.group
    L2, L = _chain(G, to, e.L)
    f = GMap.from_orbits(level_set(G, L2.id), level_set(G, L.id), [0])
    acc = Counter()
    Y2 = level_set(G, L2.id)
    for c, v in e.terms.items():
        for c2 in comp_pullback(e.X, c, f):
            acc[bs.canonical_component(e.X, Y2, *c2)] += v
    return LevelElement(e.X, L2, acc, e.bound, canonical=True)


def tr(e: LevelElement, to) -> LevelElement:
    """Tr_{L}^{L′} for L ≤ L′ (postcompose with G/L → G/L′)."""
    G = e.group
    L, L2 = _chain(G, e.L, to)
    f = GMap.from_orbits(level_set(G, L.id), level_set(G, L2.id), [0])
    Y2 = level_set(G, L2.id)
    acc = Counter()
    for c, v in e.terms.items():
        acc[bs.canonical_component(e.X, Y2, *comp_postcompose(c, f))] += v
    return LevelElement(e.X, L2, acc, e.bound, canonical=True)


def cg(e: LevelElement, g: int) -> LevelElement:
    """c_g: 𝔸[X](G/L) → 𝔸[X](G/gLg⁻¹)."""
    G = e.group
    f = bs.conj_map(G, g, e.L)
    L2 = f.target.orbits[0]
    Y2 = level_set(G, L2.id)
    f = GMap(level_set(G, e.L.id), Y2, f.images, check=False)
    acc = Counter()
    for c, v in e.terms.items():
        acc[bs.canonical_component(e.X, Y2, *comp_postcompose(c, f))] += v
    return LevelElement(e.X, L2, acc, e.bound, canonical=True)


def nm(e: LevelElement, to) -> LevelElement:
    """Nm_L^{L′} by composing with N along G/L → G/L′ (nonnegative elements)."""
    G = e.group
    L, L2 = _chain(G, e.L, to)
    f = projection(G, L, L2)
    f = GMap(level_set(G, L.id), level_set(G, L2.id), f.images, check=False)
    out = bs.compose(bs.n_of(f), e.to_class())
    return LevelElement.from_class(out, L2)


def relabel(e: LevelElement, f: GMap) -> LevelElement:
    """R_f^*: 𝔸[X] → 𝔸[X′] for f: X → X′."""
    if f.source != e.X:
        raise bs.SignatureMismatch("map must start at X")
    return LevelElement(f.target, e.L, {comp_relabel(c, f): v for c, v in e.terms.items()},
                        e.bound)


def norm_pullback(e: LevelElement, f: GMap) -> LevelElement:
    """N_f^*: 𝔸[Y] → 𝔸[X] for f: X → Y."""
    if f.target != e.X:
        raise bs.SignatureMismatch("map must end at X of the element")
    acc = Counter()
    for c, v in e.terms.items():
        acc[comp_norm_pullback(c, f)] += v
    return LevelElement(f.source, e.L, acc, None)


# ---------------------------------------------------------------------------
# bases

def atom_classes(X: GSet, K: int) -> list[tuple[int, int]]:
    """K-classes of pairs (S, x) with S ≤ K ∩ Stab(x), as canonical atoms."""
    G = X.group
    found = set()
    leq = G.leq_table
    for x in range(X.size):
        Kx = G.meet_table[K][X.stab_ids[x]]
        for S in range(G.nsub):
            if leq[S][Kx]:
                found.add(bs.canonical_atom(G, X, K, S, x))
    return sorted(found)


def _multisets(items, weights, budget):
    """All multisets (as tuples of items) with total weight ≤ budget."""
    def rec(i, left):
        if i == len(items):
            yield ()
            return
        w = weights[i]
        for m in range(left // w + 1):
            for rest in rec(i + 1, left - m * w):
                yield (items[i],) * m + rest
    yield from rec(0, budget)


DEFAULT_CAP = 200000


def level_basis(X: GSet, L, max_n: int, cap: int = DEFAULT_CAP) -> list[tuple]:
    """Canonical irreducible components of 𝔸[X](G/L) with degree ≤ max_n.

    Sorted by (degree, component).
    """
    if max_n < 0:
        raise ValueError("max_n must be nonnegative")
    return list(_level_basis(X, X.group.sub(L).id, max_n, cap))


@lru_cache(maxsize=None)
def _level_basis(X: GSet, L: int, max_n: int, cap: int) -> tuple:
    G = X.group
    Y = level_set(G, L)
    found = set()
    count = 0
    Lsub = G.sub(L)
    for K in [s for s in G.subgroups() if s <= Lsub]:
        atoms = atom_classes(X, K.id)
        weights = [K.order // G.sub(s).order for s, _ in atoms]
        for ms in _multisets(atoms, weights, max_n):
            count += 1
            if count > cap:
                raise TruncationTooLarge(f"more than {cap} candidates")
            found.add(bs.canonical_component(X, Y, K.id, 0, ms))
    return tuple(sorted(found, key=lambda c: (bs.component_degree(G, c), c)))


def basis_by_degree(X: GSet, L, max_n: int) -> dict:
    G = X.group
    out = {}
    for c in level_basis(X, L, max_n):
        out.setdefault(degree_of(G, c), []).append(c)
    return out


# ---------------------------------------------------------------------------
# Dedekind tuples

DedekindTuple = namedtuple("DedekindTuple", "K pairs H L")


def _require_dedekind(G):
    if not is_dedekind(G):
        raise NotDedekind(f"{G.name} is not a Dedekind group")


def _reduce_label(G: FiniteGroup, K: int, H: int, f: int) -> int:
    """Least element of the coset f·KH."""
    KH = G.closure(G.sub(K).elements + G.sub(H).elements)
    return min(G.mul[f][k] for k in KH)


def make_tuple(G: FiniteGroup, K, pairs, H, L) -> DedekindTuple:
    """Normalize ((H_i, f_i))_K: labels reduced mod KH, minimized over ℓ ∈ L."""
    _require_dedekind(G)
    K, H, L = G.sub(K), G.sub(H), G.sub(L)
    if not K <= L:
        raise ChainViolation("need K ≤ L")
    pairs = [(G.sub(h).id, f) for h, f in pairs]
    for h, _ in pairs:
        if not (G.sub(h) <= K and G.sub(h) <= H):
            raise ChainViolation("need H_i ≤ K ∩ H")
    best = None
    for l in L.elements:
        cand = tuple(sorted((h, _reduce_label(G, K.id, H.id, G.mul[l][f])) for h, f in pairs))
        if best is None or cand < best:
            best = cand
    return DedekindTuple(K.id, best, H.id, L.id)


def tuple_form(X: GSet, L, comp) -> DedekindTuple:
    """The tuple ((H_i, f_i))_K of a component of 𝔸[G/H](G/L)."""
    G = X.group
    _require_dedekind(G)
    if len(X.orbits) != 1:
        raise ValueError("tuple form needs a transitive X = G/H")
    H = X.orbits[0]
    L = G.sub(L)
    Y = level_set(G, L.id)
    K, y, M = comp
    # move y to the base point: conjugating by normal subgroups keeps K
    g0 = Y.rep_of[y]
    gi = G.inv[g0]
    pairs = [(s, X.rep_of[X.act[gi][x]]) for s, x in M]
    return make_tuple(G, K, pairs, H, L)


def from_tuple(X: GSet, t: DedekindTuple) -> tuple:
    G = X.group
    Y = level_set(G, t.L)
    return bs.canonical_component(X, Y, t.K, 0, [(h, X.element(0, f)) for h, f in t.pairs])


def multiply_tuples(G: FiniteGroup, a: DedekindTuple, b: DedekindTuple) -> Counter:
    """Σ_{s ∈ L/K′} ((H_i, f_i) ⊔ {(H′_j, r g_j) : r ∈ L/K, r ↦ s})_K.

    ``a`` is over K and ``b`` over K′ with H ≤ K ≤ K′ ≤ L.
    """
    _require_dedekind(G)
    if a.L != b.L or a.H != b.H:
        raise ChainViolation("tuples from different ambient data")
    H, K, K2, L = (G.sub(i) for i in (a.H, a.K, b.K, a.L))
    if not (H <= K <= K2 <= L):
        raise ChainViolation("need H ≤ K ≤ K′ ≤ L")
    out = Counter()
    for s_coset in K2.left_cosets(L):
        members = set(s_coset)
        rs = [c[0] for c in K.left_cosets(L) if c[0] in members]
        pairs = list(a.pairs) + [(h, G.mul[r][g]) for h, g in b.pairs for r in rs]
        out[make_tuple(G, K, pairs, H, L)] += 1
    return out


def tuple_degree(G: FiniteGroup, t: DedekindTuple) -> WeightedDegree:
    k = G.sub(t.K).order
    return WeightedDegree(sum(k // G.sub(h).order for h, _ in t.pairs), t.K)

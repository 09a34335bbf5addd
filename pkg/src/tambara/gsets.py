"""Finite G-sets and equivariant maps.

A :class:`GSet` is stored symbolically as a list of orbit stabilizers
(orbit ``i`` is ``G/H_i``) and also enumerated element-wise: element
``k`` of orbit ``i`` is the ``k``-th left coset of ``H_i`` ordered by
smallest member, and the base point of each orbit is the coset ``H_i``
itself.  Constructions (products, pullbacks, dependent products) work
on elements and re-extract stabilizers with :func:`from_action`.
"""

from __future__ import annotations

import itertools
import json
from collections import namedtuple
from functools import cached_property
from typing import Callable, Hashable, Sequence

from .groups import FiniteGroup, Subgroup, load_group


class GroupMismatch(ValueError):
    pass


class SubgroupMismatch(ValueError):
    pass


class NotEquivariant(ValueError):
    pass


class GSet:
    """Disjoint union of orbits ``G/H_i``."""

    def __init__(self, group: FiniteGroup, orbits: Sequence[Subgroup]):
        self.group = group
        self.orbits = tuple(group.sub(h) for h in orbits)
        for h in self.orbits:
            if h.parent is not group:
                raise GroupMismatch("stabilizer from a different group")
        cosets, offsets, coset_of = [], [], []
        n = 0
        for h in self.orbits:
            cs = h.left_cosets()
            table = [0] * group.order
            for k, c in enumerate(cs):
                for g in c:
                    table[g] = k
            cosets.append(cs)
            coset_of.append(table)
            offsets.append(n)
            n += len(cs)
        self._cosets = cosets
        self._coset_of = coset_of
        self.offsets = tuple(offsets)
        self.size = n

    def __len__(self):
        return self.size

    def __repr__(self):
        inner = " + ".join(f"{self.group.name}/{h!r}" for h in self.orbits) or "0"
        return f"GSet({inner})"

    def __eq__(self, other):
        return (isinstance(other, GSet) and other.group is self.group
                and other.orbits == self.orbits)

    def __hash__(self):
        return hash((id(self.group), tuple(h.id for h in self.orbits)))

    # element-level view ---------------------------------------------------
    def element(self, orbit: int, g: int = 0) -> int:
        """Index of the point g·H_orbit."""
        return self.offsets[orbit] + self._coset_of[orbit][g]

    def base_point(self, orbit: int) -> int:
        return self.offsets[orbit]

    @cached_property
    def orbit_of(self) -> tuple[int, ...]:
        out = []
        for i, cs in enumerate(self._cosets):
            out.extend([i] * len(cs))
        return tuple(out)

    @cached_property
    def rep_of(self) -> tuple[int, ...]:
        """A group element carrying the base point of the orbit to each point."""
        out = []
        for cs in self._cosets:
            out.extend(c[0] for c in cs)
        return tuple(out)

    @cached_property
    def act(self) -> tuple[tuple[int, ...], ...]:
        """act[g][x] = g·x"""
        G = self.group
        rows = []
        orbit_of, rep_of = self.orbit_of, self.rep_of
        for g in range(G.order):
            mg = G.mul[g]
            rows.append(tuple(self.offsets[orbit_of[x]] + self._coset_of[orbit_of[x]][mg[rep_of[x]]]
                              for x in range(self.size)))
        return tuple(rows)

    def stabilizer(self, x: int) -> Subgroup:
        i = self.orbit_of[x]
        return self.orbits[i].conjugate(self.rep_of[x])

    @cached_property
    def stab_ids(self) -> tuple[int, ...]:
        return tuple(self.stabilizer(x).id for x in range(self.size))

    def orbit_elements(self, i: int) -> range:
        return range(self.offsets[i], self.offsets[i] + len(self._cosets[i]))

    # iso invariants ----------------------------------------------------------
    def iso_type(self) -> tuple[int, ...]:
        """Sorted conjugacy-class ids of the stabilizers; a complete iso invariant."""
        return tuple(sorted(self.group.class_rep[h.id] for h in self.orbits))

    def is_isomorphic(self, other: "GSet") -> bool:
        return other.group is self.group and other.iso_type() == self.iso_type()

    def to_json(self) -> dict:
        return {"group": self.group.name, "orbits": [list(h.elements) for h in self.orbits]}

    @classmethod
    def from_json(cls, data, group: FiniteGroup | None = None) -> "GSet":
        if isinstance(data, str):
            data = json.loads(data)
        G = group if group is not None else load_group(data["group"])
        return cls(G, [G.sub(o) for o in data["orbits"]])


class GMap:
    """An equivariant map, stored as the image of every source element."""

    def __init__(self, source: GSet, target: GSet, images: Sequence[int], check: bool = True):
        if source.group is not target.group:
            raise GroupMismatch("source and target over different groups")
        self.source = source
        self.target = target
        self.images = tuple(images)
        if len(self.images) != source.size:
            raise ValueError("wrong number of images")
        if check:
            sa, ta = source.act, target.act
            for g in range(source.group.order):
                srow, trow = sa[g], ta[g]
                for a in range(source.size):
                    if self.images[srow[a]] != trow[self.images[a]]:
                        raise NotEquivariant(f"fails at g={g}, x={a}")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __repr__(self):
        return f"GMap({self.source!r} -> {self.target!r})"

    def __eq__(self, other):
        return (isinstance(other, GMap) and other.source == self.source
                and other.target == self.target and other.images == self.images)

    def __hash__(self):
        return hash(self.images)

    @classmethod
    def from_orbits(cls, source: GSet, target: GSet, base_images: Sequence[int]) -> "GMap":
        """Map determined by where each source base point goes."""
        imgs = []
        for x in range(source.size):
            i = source.orbit_of[x]
            t = base_images[i]
            if not source.orbits[i].elset <= target.stabilizer(t).elset:
                raise NotEquivariant(f"orbit {i}: stabilizer not contained in target stabilizer")
            imgs.append(target.act[source.rep_of[x]][t])
        return cls(source, target, imgs, check=False)

    @property
    def assignment(self) -> list[tuple[int, int]]:
        """Per source orbit: (target orbit j, g) with H_i ↦ g K_j."""
        out = []
        for i in range(len(self.source.orbits)):
            t = self.images[self.source.base_point(i)]
            out.append((self.target.orbit_of[t], self.target.rep_of[t]))
        return out

    def then(self, other: "GMap") -> "GMap":
        """other ∘ self"""
        if other.source != self.target:
            raise ValueError("maps are not composable")
        return GMap(self.source, other.target, [other.images[y] for y in self.images], check=False)

    def fiber(self, y: int) -> list[int]:
        return [a for a, b in enumerate(self.images) if b == y]

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "images": list(self.images)}


def identity_map(X: GSet) -> GMap:
    return GMap(X, X, range(X.size), check=False)


def empty(G: FiniteGroup) -> GSet:
    return GSet(G, [])


def point(G: FiniteGroup) -> GSet:
    return GSet(G, [G.whole])


def transitive(G: FiniteGroup, H) -> GSet:
    return GSet(G, [G.sub(H)])


def to_point(X: GSet) -> GMap:
    return GMap(X, point(X.group), [0] * X.size, check=False)


def from_empty(X: GSet) -> GMap:
    return GMap(empty(X.group), X, [], check=False)


def disjoint_union(*sets: GSet) -> tuple[GSet, list[GMap]]:
    G = sets[0].group
    for s in sets:
        if s.group is not G:
            raise GroupMismatch("disjoint union over different groups")
    U = GSet(G, [h for s in sets for h in s.orbits])
    incs, off = [], 0
    for s in sets:
        incs.append(GMap(s, U, [off + x for x in range(s.size)], check=False))
        off += s.size
    return U, incs


def from_action(G: FiniteGroup, labels: Sequence[Hashable],
                act: Callable[[int, Hashable], Hashable]) -> tuple[GSet, dict]:
    """Decompose a G-action on ``labels`` into orbits.

    Returns the GSet and a dict sending each label to its element index.
    Orbits appear in order of their first label; the stabilizer of that
    label is the orbit's chosen stabilizer.
    """
    index = {lab: i for i, lab in enumerate(labels)}
    seen = [False] * len(labels)
    orbits, reps = [], []
    for i, lab in enumerate(labels):
        if seen[i]:
            continue
        imgs = [act(g, lab) for g in range(G.order)]
        stab = [g for g in range(G.order) if imgs[g] == lab]
        for m in imgs:
            seen[index[m]] = True
        orbits.append(G.sub(stab))
        reps.append(imgs)
    X = GSet(G, orbits)
    iso = {}
    for i, imgs in enumerate(reps):
        for g, m in enumerate(imgs):
            if m not in iso:
                iso[m] = X.element(i, g)
    return X, iso


def _labels_action(X: GSet, Y: GSet, pairs):
    ax, ay = X.act, Y.act
    return lambda g, p: (ax[g][p[0]], ay[g][p[1]])


def pullback(f: GMap, g: GMap) -> tuple[GSet, GMap, GMap]:
    """Fiber product X ×_Z Y with its two projections."""
    if f.target != g.target:
        raise GroupMismatch("pullback needs a common target")
    X, Y = f.source, g.source
    by_z: dict[int, list[int]] = {}
    for y, z in enumerate(g.images):
        by_z.setdefault(z, []).append(y)
    pairs = [(x, y) for x in range(X.size) for y in by_z.get(f.images[x], ())]
    P, iso = from_action(X.group, pairs, _labels_action(X, Y, pairs))
    inv = [None] * P.size
    for lab, k in iso.items():
        inv[k] = lab
    p1 = GMap(P, X, [lab[0] for lab in inv], check=False)
    p2 = GMap(P, Y, [lab[1] for lab in inv], check=False)
    return P, p1, p2


def product(X: GSet, Y: GSet) -> tuple[GSet, GMap, GMap]:
    if X.group is not Y.group:
        raise GroupMismatch("product over different groups")
    return pullback(to_point(X), to_point(Y))


def degree(f: GMap) -> int | None:
    """Common fiber size of f, or None when fibers differ in size."""
    counts = [0] * f.target.size
    for b in f.images:
        counts[b] += 1
    sizes = {counts[f.target.base_point(j)] for j in range(len(f.target.orbits))}
    if not sizes:
        return 0
    if len(sizes) > 1:
        return None
    return sizes.pop()


def restrict_to(X: GSet, H: Subgroup) -> GSet:
    """The underlying H-set of X, over the standalone group H.as_group()."""
    Hg, emb = H.as_group()
    ax = X.act
    labels = list(range(X.size))
    Y, _ = from_action(Hg, labels, lambda h, x: ax[emb[h]][x])
    return Y


def induce(H: Subgroup, X_H: GSet) -> GSet:
    """G ×_H X_H, computed orbitwise: G ×_H (H/S) ≅ G/S."""
    Hg, emb = H.as_group()
    if X_H.group is not Hg:
        raise SubgroupMismatch("X_H must be a set over H.as_group()")
    G = H.parent
    return GSet(G, [G.sub([emb[s] for s in S.elements]) for S in X_H.orbits])


def induce_by_elements(H: Subgroup, X_H: GSet) -> GSet:
    """G ×_H X_H built from pairs (g, x) modulo (gh, x) ~ (g, hx)."""
    Hg, emb = H.as_group()
    if X_H.group is not Hg:
        raise SubgroupMismatch("X_H must be a set over H.as_group()")
    G = H.parent
    ax = X_H.act

    def normal(g, x):
        # least representative of the class of (g, x)
        return min((G.mul[g][emb[h]], ax[Hg.inv[h]][x]) for h in range(Hg.order))

    labels = sorted({normal(g, x) for g in range(G.order) for x in range(X_H.size)})
    Y, _ = from_action(G, labels, lambda k, p: normal(G.mul[k][p[0]], p[1]))
    return Y


ExponentialDiagram = namedtuple(
    "ExponentialDiagram", "pi to_base w w_to_source w_to_pi evaluation sections")


def dependent_product(f: GMap, p: GMap) -> ExponentialDiagram:
    """Π_f A for f: X → Y and p: A → X, with its exponential diagram.

    Elements of Π_f A are pairs (y, s) with s a section of p over the
    fiber f⁻¹(y); g·(y, s) = (gy, x ↦ g·s(g⁻¹x)).  Also returns
    W = X ×_Y Π_f A with its projections and the evaluation W → A.
    """
    if p.target != f.source:
        raise GroupMismatch("p must target the source of f")
    X, Y, A = f.source, f.target, p.source
    G = X.group
    fibers = [[] for _ in range(Y.size)]
    for x, y in enumerate(f.images):
        fibers[y].append(x)
    pos = {}
    for y, fb in enumerate(fibers):
        for k, x in enumerate(fb):
            pos[x] = k
    over = [[] for _ in range(X.size)]
    for a, x in enumerate(p.images):
        over[x].append(a)
    labels = []
    for y in range(Y.size):
        for s in itertools.product(*[over[x] for x in fibers[y]]):
            labels.append((y, s))
    ax, ay, aa = X.act, Y.act, A.act

    def act(g, lab):
        y, s = lab
        gy = ay[g][y]
        gi = G.inv[g]
        return (gy, tuple(aa[g][s[pos[ax[gi][x]]]] for x in fibers[gy]))

    Pi, iso = from_action(G, labels, act)
    inv = [None] * Pi.size
    for lab, k in iso.items():
        inv[k] = lab
    q = GMap(Pi, Y, [lab[0] for lab in inv], check=False)
    W, w_x, w_pi = pullback(f, q)
    ev = GMap(W, A, [inv[w_pi.images[w]][1][pos[w_x.images[w]]] for w in range(W.size)],
              check=False)
    return ExponentialDiagram(Pi, q, W, w_x, w_pi, ev, inv)


def projection(G: FiniteGroup, K, L) -> GMap:
    """G/K → G/L for K ≤ L."""
    K, L = G.sub(K), G.sub(L)
    return GMap.from_orbits(transitive(G, K), transitive(G, L), [0])


def parse_gset(G: FiniteGroup, text: str) -> GSet:
    """Parse forms like ``"C2/e + C2/C2"``, ``"point"``, ``"empty"``.

    Subgroups after ``/`` are ``e``, the group name (whole group), a
    comma-separated generator word list like ``<a^2,x>``, or a preset
    name naming an isomorphism type when that picks a unique subgroup
    up to conjugacy (e.g. ``C3`` in ``S3``).
    """
    text = text.strip()
    if text in ("", "empty", "0"):
        return empty(G)
    if text in ("point", "pt", "*"):
        return point(G)
    orbits = []
    for part in text.split("+"):
        part = part.strip()
        if part in ("point", "pt", "*"):
            orbits.append(G.whole)
            continue
        if part in ("empty", "0"):
            continue
        _, slash, sub = part.partition("/")
        if not slash or not sub.strip():
            raise ValueError(f"expected G/H, got {part!r}")
        orbits.append(parse_subgroup(G, sub.strip()))
    return GSet(G, orbits)


def parse_subgroup(G: FiniteGroup, text: str) -> Subgroup:
    text = text.strip()
    if text in ("e", "1"):
        return G.trivial
    if text in (G.name, "G"):
        return G.whole
    if text.startswith("<") and text.endswith(">"):
        return G.sub(text[1:-1])
    if text.startswith("C") and text[1:].isdigit():
        n = int(text[1:])
        cands = [s for s in G.subgroups() if s.order == n
                 and any(G.element_order(g) == n for g in s.elements)]
        reps = sorted({G.class_rep[s.id] for s in cands})
        if len(reps) == 1:
            return G.sub(reps[0])
        raise ValueError(f"{text} does not name a unique subgroup class of {G.name}")
    return G.sub(text)

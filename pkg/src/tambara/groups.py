"""Finite groups as multiplication tables, with the subgroup lattice and
the coset bookkeeping everything else in the package is built on.

Elements are integers ``0 .. order-1`` and the identity is always ``0``.
Subgroups are identified by their sorted element tuple; the full lattice
is computed once per group and every subgroup gets a small integer id
(its position in the key-sorted list), which is what the bispan code
stores.
"""

from __future__ import annotations

import itertools
import json
import re
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence


class NotAGroup(ValueError):
    """Raised when a table fails a group axiom; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotASubgroupChain(ValueError):
    pass


class UnknownGroup(ValueError):
    pass


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``mul[a][b]`` is the index of ``a*b``.  Construction validates the
    table exhaustively (closure, identity at 0, inverses, associativity).
    """

    def __init__(self, mul: Sequence[Sequence[int]], name: str = "G",
                 labels: Sequence[str] | None = None):
        n = len(mul)
        if n == 0:
            raise NotAGroup("empty table")
        if any(len(row) != n for row in mul):
            raise NotAGroup("table is not square")
        for a in range(n):
            for b in range(n):
                if not 0 <= mul[a][b] < n:
                    raise NotAGroup("entry out of range", (a, b))
        self.order = n
        self.name = name
        self.mul = tuple(tuple(int(v) for v in row) for row in mul)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.identity = 0
        for a in range(n):
            if self.mul[0][a] != a or self.mul[a][0] != a:
                raise NotAGroup("index 0 is not a two-sided identity", (0, a))
        inv = []
        for a in range(n):
            row = self.mul[a]
            try:
                b = row.index(0)
            except ValueError:
                raise NotAGroup(f"element {a} has no inverse", (a,)) from None
            if self.mul[b][a] != 0:
                raise NotAGroup(f"element {a} has no two-sided inverse", (a, b))
            inv.append(b)
        self.inv = tuple(inv)
        m = self.mul
        for a in range(n):
            ma = m[a]
            for b in range(n):
                ab = ma[b]
                mab = m[ab]
                mb = m[b]
                for c in range(n):
                    if mab[c] != ma[mb[c]]:
                        raise NotAGroup("associativity fails", (a, b, c))

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # element arithmetic -------------------------------------------------
    def prod(self, *elems: int) -> int:
        r = 0
        for e in elems:
            r = self.mul[r][e]
        return r

    def conj(self, g: int, h: int) -> int:
        """g h g^-1"""
        return self.mul[self.mul[g][h]][self.inv[g]]

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul[x][g]
            k += 1
        return k

    def element(self, label: str) -> int:
        return self.labels.index(label)

    def word(self, w: str) -> int:
        """Evaluate a word like ``"a^2 x"`` in the generator labels."""
        r = 0
        for tok in w.split():
            m = re.fullmatch(r"(\w+?)(?:\^(-?\d+))?", tok)
            if m is None:
                raise ValueError(f"bad word token {tok!r}")
            g = self.element(m.group(1))
            e = int(m.group(2) or 1)
            if e < 0:
                g, e = self.inv[g], -e
            for _ in range(e):
                r = self.mul[r][g]
        return r

    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a]
                   for a in range(self.order) for b in range(a))

    # subgroups ----------------------------------------------------------
    def closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        elems = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = self.mul[a][g]
                    if b not in elems:
                        elems.add(b)
                        new.append(b)
            frontier = new
        return tuple(sorted(elems))

    @cached_property
    def _lattice(self):
        found = {self.closure([])}
        frontier = list(found)
        while frontier:
            new = []
            for key in frontier:
                for g in range(self.order):
                    if g in key:
                        continue
                    k2 = self.closure(key + (g,))
                    if k2 not in found:
                        found.add(k2)
                        new.append(k2)
            frontier = new
        keys = sorted(found)
        subs = [Subgroup(self, k, i) for i, k in enumerate(keys)]
        return subs, {k: s for k, s in zip(keys, subs)}

    def subgroups(self) -> list["Subgroup"]:
        return list(self._lattice[0])

    @property
    def nsub(self) -> int:
        return len(self._lattice[0])

    def sub(self, key) -> "Subgroup":
        """Look up a subgroup by id, element collection, or generator words."""
        subs, index = self._lattice
        if isinstance(key, Subgroup):
            return key
        if isinstance(key, int):
            return subs[key]
        if isinstance(key, str):
            return self.generated(*[self.word(w) for w in key.split(",") if w.strip()])
        return index[tuple(sorted(set(key)))]

    def generated(self, *gens: int) -> "Subgroup":
        return self._lattice[1][self.closure(gens)]

    @property
    def trivial(self) -> "Subgroup":
        return self._lattice[0][0]

    @property
    def whole(self) -> "Subgroup":
        return self.sub(tuple(range(self.order)))

    @cached_property
    def conj_table(self) -> tuple[tuple[int, ...], ...]:
        """conj_table[g][s] = id of g S g^-1."""
        subs, index = self._lattice
        rows = []
        for g in range(self.order):
            rows.append(tuple(index[tuple(sorted(self.conj(g, h) for h in s.elements))].id
                              for s in subs))
        return tuple(rows)

    @cached_property
    def meet_table(self) -> tuple[tuple[int, ...], ...]:
        subs, index = self._lattice
        sets = [s.elset for s in subs]
        return tuple(tuple(index[tuple(sorted(a & b))].id for b in sets) for a in sets)

    @cached_property
    def leq_table(self) -> tuple[tuple[bool, ...], ...]:
        sets = [s.elset for s in self._lattice[0]]
        return tuple(tuple(a <= b for b in sets) for a in sets)

    @cached_property
    def class_rep(self) -> tuple[int, ...]:
        """Id of the canonical (minimal-key) conjugate of each subgroup."""
        return tuple(min(self.conj_table[g][s] for g in range(self.order))
                     for s in range(self.nsub))

    def conjugacy_classes(self) -> list[list["Subgroup"]]:
        classes: dict[int, list[Subgroup]] = {}
        for s in self.subgroups():
            classes.setdefault(self.class_rep[s.id], []).append(s)
        return [classes[k] for k in sorted(classes)]

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {"order": self.order, "mul": [list(r) for r in self.mul], "name": self.name}

    @classmethod
    def from_json(cls, data) -> "FiniteGroup":
        if isinstance(data, str):
            data = json.loads(data)
        if len(data["mul"]) != data["order"]:
            raise NotAGroup("order does not match table size")
        return cls(data["mul"], data.get("name", "G"))


class Subgroup:
    """A subgroup of a :class:`FiniteGroup`, keyed by its sorted elements."""

    __slots__ = ("parent", "elements", "elset", "id", "__weakref__")

    def __init__(self, parent: FiniteGroup, elements: tuple[int, ...], id: int):
        self.parent = parent
        self.elements = elements
        self.elset = frozenset(elements)
        self.id = id

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elset

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.elements == self.elements)

    def __hash__(self):
        return hash(self.elements)

    def __lt__(self, other):
        return self.elements < other.elements

    def __le__(self, other):
        return self.elset <= other.elset

    def __repr__(self):
        if len(self.elements) <= 8:
            return f"<{','.join(self.parent.labels[e] for e in self.elements)}>"
        return f"Subgroup(order={self.order}, id={self.id})"

    def conjugate(self, g: int) -> "Subgroup":
        return self.parent.sub(self.parent.conj_table[g][self.id])

    def meet(self, other: "Subgroup") -> "Subgroup":
        return self.parent.sub(self.parent.meet_table[self.id][other.id])

    def is_normal(self) -> bool:
        return all(c == self.id for c in (row[self.id] for row in self.parent.conj_table))

    def index_in(self, other: "Subgroup | FiniteGroup") -> int:
        n = other.order
        return n // self.order

    def left_cosets(self, within: "Subgroup | None" = None) -> list[tuple[int, ...]]:
        """Left cosets gS (g in ``within``), each sorted, ordered by min element."""
        G = self.parent
        ambient = within.elements if within is not None else range(G.order)
        seen, out = set(), []
        for g in ambient:
            if g in seen:
                continue
            c = tuple(sorted(G.mul[g][s] for s in self.elements))
            seen.update(c)
            out.append(c)
        return out

    def right_cosets(self, within: "Subgroup | None" = None) -> list[tuple[int, ...]]:
        G = self.parent
        ambient = within.elements if within is not None else range(G.order)
        seen, out = set(), []
        for g in ambient:
            if g in seen:
                continue
            c = tuple(sorted(G.mul[s][g] for s in self.elements))
            seen.update(c)
            out.append(c)
        return out

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """This subgroup as a standalone group, with its embedding (local -> parent)."""
        cache = _AS_GROUP.get(self)
        if cache is not None:
            return cache
        G = self.parent
        emb = self.elements  # identity 0 is first since keys are sorted
        pos = {g: i for i, g in enumerate(emb)}
        table = [[pos[G.mul[a][b]] for b in emb] for a in emb]
        H = FiniteGroup(table, name=f"{G.name}>{self!r}",
                        labels=[G.labels[g] for g in emb])
        _AS_GROUP[self] = (H, emb)
        return H, emb


_AS_GROUP: dict = {}


# ---------------------------------------------------------------------------
# group-level operations

def subgroups(G: FiniteGroup) -> list[Subgroup]:
    return G.subgroups()


def _check_sub(G, *subs):
    for s in subs:
        if s.parent is not G:
            raise NotASubgroupChain("subgroups belong to different groups")


def double_cosets(H: Subgroup, M: Subgroup, within: Subgroup | None = None) -> list[int]:
    """Minimal-index representatives of the double cosets H \\ L / M."""
    G = H.parent
    L = within if within is not None else G.whole
    _check_sub(G, M, L)
    if not (H <= L and M <= L):
        raise NotASubgroupChain("H and M must lie in L")
    seen = set()
    reps = []
    for x in L.elements:
        if x in seen:
            continue
        reps.append(x)
        for h in H.elements:
            hx = G.mul[h][x]
            for m in M.elements:
                seen.add(G.mul[hx][m])
    return reps


def double_coset(H: Subgroup, x: int, M: Subgroup) -> frozenset[int]:
    G = H.parent
    return frozenset(G.mul[G.mul[h][x]][m] for h in H.elements for m in M.elements)


def coset_factorization(H: Subgroup, K: Subgroup, L: Subgroup, M: Subgroup) -> dict:
    """The bijection {(x, y_x)} -> H \\ L / M for H <= K <= L, M <= L.

    ``x`` runs over K\\L/M and ``y_x`` over H\\K/(xMx^-1 ∩ K).  Returns a
    dict mapping each pair to the minimal-index representative of the
    double coset H y_x x M.  Raises if the map fails to be a bijection.
    """
    G = H.parent
    _check_sub(G, K, L, M)
    if not (H <= K <= L and M <= L):
        raise NotASubgroupChain("need H <= K <= L and M <= L")
    targets = {double_coset(H, r, M): r for r in double_cosets(H, M, L)}
    out = {}
    for x in double_cosets(K, M, L):
        xMx = M.conjugate(x).meet(K)
        for y in double_cosets(H, xMx, K):
            dc = double_coset(H, G.mul[y][x], M)
            out[(x, y)] = targets[dc]
    if len(set(out.values())) != len(out) or len(out) != len(targets):
        raise AssertionError("coset factorization is not a bijection")
    return out


def normalizer(H: Subgroup) -> Subgroup:
    G = H.parent
    row = H.id
    return G.sub(tuple(g for g in range(G.order) if G.conj_table[g][row] == row))


def weyl(H: Subgroup) -> list[tuple[int, ...]]:
    """Cosets of H in its normalizer (the Weyl group N(H)/H)."""
    return H.left_cosets(normalizer(H))


def is_normal(H: Subgroup) -> bool:
    return H.is_normal()


class GroupClassification:
    __slots__ = ("kind", "witness")

    def __init__(self, kind: str, witness: str | None = None):
        self.kind = kind
        self.witness = witness

    def __repr__(self):
        return f"GroupClassification({self.kind!r}, witness={self.witness!r})"

    def __eq__(self, other):
        if isinstance(other, str):
            return self.kind == other
        return isinstance(other, GroupClassification) and other.kind == self.kind


def is_dedekind(G: FiniteGroup) -> bool:
    return all(s.is_normal() for s in G.subgroups())


def satisfies_star(G: FiniteGroup) -> bool:
    """Proper nontrivial subgroups are maximal; each subgroup is normal or self-normalizing."""
    subs = G.subgroups()
    proper = [s for s in subs if 1 < s.order < G.order]
    for s in proper:
        if any(s.elset < t.elset and t.order < G.order for t in proper):
            return False
    return all(s.is_normal() or normalizer(s) == s for s in subs)


def is_d8(G: FiniteGroup) -> bool:
    if G.order != 8 or G.is_abelian():
        return False
    involutions = sum(1 for g in range(1, 8) if G.element_order(g) == 2)
    return involutions == 5


def classify(G: FiniteGroup) -> GroupClassification:
    if is_dedekind(G):
        return GroupClassification("dedekind")
    if satisfies_star(G):
        return GroupClassification("star")
    if is_d8(G):
        return GroupClassification("d8")
    for s in G.subgroups():
        if not s.is_normal() and normalizer(s) != s:
            return GroupClassification("other", f"{s!r} is non-normal with N(H) != H")
    for s in G.subgroups():
        if 1 < s.order < G.order:
            return GroupClassification("other", f"{s!r} is proper, nontrivial and not maximal")
    return GroupClassification("other")


# ---------------------------------------------------------------------------
# preset catalog

def group_from_generators(gens: Sequence[Hashable], compose: Callable, identity: Hashable,
                          name: str, gen_names: Sequence[str] | None = None) -> FiniteGroup:
    """Close ``gens`` under ``compose`` (BFS, identity first) and tabulate."""
    gen_names = list(gen_names) if gen_names else [f"g{i}" for i in range(len(gens))]
    elems = [identity]
    words = [""]
    index = {identity: 0}
    i = 0
    while i < len(elems):
        a = elems[i]
        for g, gn in zip(gens, gen_names):
            b = compose(a, g)
            if b not in index:
                index[b] = len(elems)
                elems.append(b)
                words.append((words[i] + " " + gn).strip())
        i += 1
    table = [[index[compose(a, b)] for b in elems] for a in elems]
    labels = ["e"] + [_compact_word(w) for w in words[1:]]
    for g, gn in zip(gens, gen_names):
        labels[index[g]] = gn
    return FiniteGroup(table, name=name, labels=labels)


def _compact_word(w: str) -> str:
    out = []
    for k, grp in itertools.groupby(w.split()):
        n = len(list(grp))
        out.append(k if n == 1 else f"{k}^{n}")
    return "".join(out)


def _perm_compose(a, b):
    # (a*b)(i) = a(b(i))
    return tuple(a[i] for i in b)


def cyclic(n: int) -> FiniteGroup:
    return group_from_generators([1 % n] if n > 1 else [], lambda a, b: (a + b) % n, 0,
                                 f"C{n}", ["a"] if n > 1 else [])


def cyclic_product(m: int, n: int) -> FiniteGroup:
    gens = [(1 % m, 0), (0, 1 % n)]
    return group_from_generators(gens, lambda a, b: ((a[0] + b[0]) % m, (a[1] + b[1]) % n),
                                 (0, 0), f"C{m}xC{n}", ["a", "b"])


def affine(p: int, t: int, name: str) -> FiniteGroup:
    """The group of maps z -> t^j z + i on Z/p (semidirect C_p x| C_q)."""
    def compose(f, g):
        # (f o g)(z) = f.m (g.m z + g.b) + f.b
        return ((f[0] * g[0]) % p, (f[0] * g[1] + f[1]) % p)
    return group_from_generators([(1, 1), (t % p, 0)], compose, (1, 0), name, ["x", "y"])


def dihedral8() -> FiniteGroup:
    a = (1, 2, 3, 0)
    x = (0, 3, 2, 1)
    return group_from_generators([a, x], _perm_compose, (0, 1, 2, 3), "D8", ["a", "x"])


def dihedral(p: int) -> FiniteGroup:
    return affine(p, -1, f"D2p{p}")


def quaternion() -> FiniteGroup:
    # unit quaternions as (sign, unit), unit in 1,i,j,k
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def compose(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)
    return group_from_generators([(1, "i"), (1, "j")], compose, (1, "1"), "Q8", ["i", "j"])


def symmetric3() -> FiniteGroup:
    G = group_from_generators([(1, 0, 2), (1, 2, 0)], _perm_compose, (0, 1, 2), "S3",
                              ["s", "r"])
    return G


def _primitive_root_of_order(p: int, q: int) -> int:
    for t in range(2, p):
        if pow(t, q, p) == 1:
            return t
    raise UnknownGroup(f"no element of order {q} in (Z/{p})^*")


_PRESET_CACHE: dict[str, FiniteGroup] = {}


def preset(name: str) -> FiniteGroup:
    """Build a catalog group: C<n>, C<m>xC<n>, S3, D8, D2p<p>, Q8, CpxCq<p>,<q>."""
    if name in _PRESET_CACHE:
        return _PRESET_CACHE[name]
    if m := re.fullmatch(r"C(\d+)xC(\d+)", name):
        G = cyclic_product(int(m.group(1)), int(m.group(2)))
    elif m := re.fullmatch(r"CpxCq(\d+),(\d+)", name):
        p, q = int(m.group(1)), int(m.group(2))
        if (p - 1) % q:
            raise UnknownGroup(f"C{q} has no faithful action on C{p}")
        G = affine(p, _primitive_root_of_order(p, q), name)
    elif m := re.fullmatch(r"C(\d+)", name):
        G = cyclic(int(m.group(1)))
    elif m := re.fullmatch(r"D2p(\d+)", name):
        G = dihedral(int(m.group(1)))
    elif name == "S3":
        G = symmetric3()
    elif name == "D8":
        G = dihedral8()
    elif name == "Q8":
        G = quaternion()
    else:
        raise UnknownGroup(f"unknown group {name!r}")
    if G.order > 64:
        raise UnknownGroup("groups of order > 64 are not supported")
    G.name = name
    _PRESET_CACHE[name] = G
    return G


def build_group(mul_table, name: str = "G") -> FiniteGroup:
    return FiniteGroup(mul_table, name)


def load_group(source) -> FiniteGroup:
    """A preset name, a path to a JSON table, or an already-built group."""
    if isinstance(source, FiniteGroup):
        return source
    if isinstance(source, dict):
        return FiniteGroup.from_json(source)
    if isinstance(source, str) and source.endswith(".json"):
        with open(source) as fh:
            return FiniteGroup.from_json(json.load(fh))
    return preset(source)

"""Box products of Mackey functors by generators and relations.

Level L of M_1 ⊠ ... ⊠ M_N is the direct sum over H ≤ L of the tensor
products S_H = M_1(G/H) ⊗ ... ⊗ M_N(G/H), read as formal transfers
Tr_H^L(x_1 ⊗ ... ⊗ x_N), modulo the Frobenius and Weyl relations.
Relations are generated exhaustively.  When every factor is graded the
relations are homogeneous, so a level splits by total degree and can be
truncated; each degree block is reduced to Smith form separately and
the output keeps the grading.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .groups import double_cosets
from .gsets import GroupMismatch, disjoint_union
from .mackey import MackeyData, free_truncation
from .zmodule import PresentedZModule, SparsePresentation, free as free_module, is_isomorphism


class LevelMismatch(ValueError):
    pass


class NotGreen(ValueError):
    pass


def _columns(A, ncols):
    cols = [{} for _ in range(ncols)]
    for i, row in enumerate(A):
        for j, v in enumerate(row):
            if v:
                cols[j][i] = int(v)
    return cols


def _apply(cols, v: dict) -> dict:
    out = {}
    for j, c in v.items():
        for i, a in cols[j].items():
            out[i] = out.get(i, 0) + c * a
    return {i: a for i, a in out.items() if a}


def _expand(vecs) -> dict:
    """Multilinear expansion of x_1 ⊗ ... ⊗ x_N for vectors given as dicts."""
    out = {}
    for combo in product(*[list(v.items()) for v in vecs]):
        coef = 1
        for _, c in combo:
            coef *= c
        key = tuple(i for i, _ in combo)
        out[key] = out.get(key, 0) + coef
    return {k: c for k, c in out.items() if c}


def _add_into(acc: dict, v: dict, scale: int = 1):
    for k, c in v.items():
        acc[k] = acc.get(k, 0) + scale * c


class _Factor:
    def __init__(self, M: MackeyData):
        G = M.group
        self.M = M
        self.rk = {h: M.levels[h].rank for h in range(G.nsub)}
        self.deg = M.grading
        self.res = {hk: _columns(A, self.rk[hk[1]]) for hk, A in M.res.items()}
        self.tr = {hk: _columns(A, self.rk[hk[0]]) for hk, A in M.tr.items()}
        self.conj = {gh: _columns(A, self.rk[gh[1]]) for gh, A in M.conj.items()}
        self._prod = {}

    def degree(self, H, i) -> int:
        return self.deg[H][i] if self.deg is not None else 0

    def product(self, H, a: dict, b: dict) -> dict:
        out = {}
        for i, ca in a.items():
            for j, cb in b.items():
                key = (H, min(i, j), max(i, j))
                col = self._prod.get(key)
                if col is None:
                    row = np.asarray(self.M.mult[H])[key[1], key[2]]
                    col = {int(k): int(v) for k, v in enumerate(row) if v}
                    self._prod[key] = col
                for k, v in col.items():
                    out[k] = out.get(k, 0) + ca * cb * v
        return {k: v for k, v in out.items() if v}

    def unit(self, H) -> dict:
        return {i: int(v) for i, v in enumerate(self.M.unit[H]) if v}


class BoxLevel:
    """One level of a box product: generators, relations and reduced basis.

    Generators are pairs (H, index tuple) standing for Tr_H^L of a tensor
    of factor basis elements.  ``coords`` sends a generator vector to the
    reduced coordinates of the level; ``lift`` goes back.
    """

    def __init__(self, factors, L: int, truncation=None, weyl=True):
        self.factors = factors
        G = self.G = factors[0].M.group
        self.L = L
        self.truncation = truncation
        leq = G.leq_table
        self.summands = [H for H in range(G.nsub) if leq[H][L]]
        self.gens, self.index, self.degree = [], {}, []
        for H in self.summands:
            for idx in product(*[range(f.rk[H]) for f in factors]):
                d = self.gen_degree(H, idx)
                if truncation is not None and d > truncation:
                    continue
                self.index[(H, idx)] = len(self.gens)
                self.gens.append((H, idx))
                self.degree.append(d)
        self.relations = []
        self._tensor_relations()
        self._frobenius_relations()
        if weyl:
            self._weyl_relations()
        self._reduce()

    # generators and relations -------------------------------------------
    def gen_degree(self, H, idx) -> int:
        return sum(f.degree(H, i) for f, i in zip(self.factors, idx))

    def vector(self, terms: dict, strict=True) -> dict:
        """Generator-index vector of {(H, idx): coef}; drops terms above the truncation."""
        out = {}
        for key, c in terms.items():
            g = self.index.get(key)
            if g is None:
                if self.truncation is not None and self.gen_degree(*key) > self.truncation:
                    continue
                raise LevelMismatch(f"{key} is not a generator of level {self.L}")
            out[g] = out.get(g, 0) + c
        return {g: c for g, c in out.items() if c}

    def _relation(self, terms: dict):
        if not terms:
            return
        degs = {self.gen_degree(*k) for k in terms}
        if self.truncation is not None and min(degs) > self.truncation:
            return
        if self.truncation is not None and max(degs) > self.truncation:
            raise LevelMismatch("inhomogeneous relation under a truncation")
        v = self.vector(terms)
        if v:
            self.relations.append(v)

    def _tensor_relations(self):
        for H in self.summands:
            for i, f in enumerate(self.factors):
                for r in f.M.levels[H].relations:
                    others = [range(g.rk[H]) for j, g in enumerate(self.factors) if j != i]
                    for rest in product(*others):
                        terms = {}
                        for a, c in enumerate(r):
                            if c:
                                idx = rest[:i] + (a,) + rest[i:]
                                terms[(H, idx)] = c
                        self._relation(terms)

    def _frobenius_relations(self):
        leq, t = self.G.leq_table, self.truncation
        for K in self.summands:
            for H in self.summands:
                if H == K or not leq[H][K]:
                    continue
                for i, f in enumerate(self.factors):
                    ranges = [range(g.rk[H]) if j == i else range(g.rk[K])
                              for j, g in enumerate(self.factors)]
                    for idx in product(*ranges):
                        d = sum(g.degree(H if j == i else K, a)
                                for j, (g, a) in enumerate(zip(self.factors, idx)))
                        if t is not None and d > t:
                            continue
                        top = [f.tr[(H, K)][a] if j == i else {a: 1}
                               for j, (f, a) in enumerate(zip(self.factors, idx))]
                        bot = [{a: 1} if j == i else g.res[(H, K)][a]
                               for j, (g, a) in enumerate(zip(self.factors, idx))]
                        terms = {(K, k): c for k, c in _expand(top).items()}
                        for k, c in _expand(bot).items():
                            terms[(H, k)] = terms.get((H, k), 0) - c
                        self._relation({k: c for k, c in terms.items() if c})

    def _weyl_relations(self):
        G = self.G
        conj = G.conj_table
        Lel = G.sub(self.L).elements
        for (H, idx) in list(self.gens):
            Hset = G.sub(H).elset
            for l in Lel:
                if l in Hset:
                    continue
                lH = conj[l][H]
                img = _expand([f.conj[(l, H)][a] for f, a in zip(self.factors, idx)])
                terms = {(lH, k): -c for k, c in img.items()}
                terms[(H, idx)] = terms.get((H, idx), 0) + 1
                self._relation({k: c for k, c in terms.items() if c})

    # reduction -------------------------------------------------------------
    def _reduce(self):
        P = self.presentation = SparsePresentation(len(self.gens), self.relations)
        by_deg = {}
        for g in P.kept:
            by_deg.setdefault(self.degree[g], []).append(g)
        pos = {g: (d, i) for d, gs in by_deg.items() for i, g in enumerate(gs)}
        rows = {d: [] for d in by_deg}
        for r in P.residual:
            d = self.degree[next(iter(r))]
            row = [0] * len(by_deg[d])
            for g, c in r.items():
                dd, i = pos[g]
                if dd != d:
                    raise LevelMismatch("relation mixes degrees")
                row[i] = c
            rows[d].append(row)
        self.blocks = {d: (gs, PresentedZModule(len(gs), rows[d])) for d, gs in sorted(by_deg.items())}
        self._pos = pos
        self.out = []          # (degree, coordinate slot, torsion order or 0)
        for d, (gs, B) in self.blocks.items():
            slot = 0
            for dv in B.invariant_factors:
                if dv != 1:
                    self.out.append((d, slot, dv))
                    slot += 1
        self.rank = len(self.out)
        self.module = PresentedZModule(
            self.rank, [[dv * int(i == j) for j in range(self.rank)]
                        for i, (_, _, dv) in enumerate(self.out) if dv])
        self._offset = {}
        for i, (d, slot, _) in enumerate(self.out):
            self._offset.setdefault(d, i)

    def block_invariants(self) -> dict:
        return {d: B.invariants for d, (gs, B) in self.blocks.items()}

    def coords(self, v: dict) -> list[int]:
        """Reduced coordinates of a generator-index vector."""
        w = self.presentation.reduce(v)
        dense = {d: [0] * len(gs) for d, (gs, _) in self.blocks.items()}
        for g, c in w.items():
            d, i = self._pos[g]
            dense[d][i] = c
        out = [0] * self.rank
        for d, (gs, B) in self.blocks.items():
            if d not in self._offset:
                continue
            for k, x in enumerate(B.coordinates(dense[d])):
                out[self._offset[d] + k] = x
        return out

    def coords_of(self, terms: dict) -> list[int]:
        return self.coords(self.vector(terms))

    def lift(self, j: int) -> dict:
        """A generator vector representing reduced basis element j."""
        d, slot, _ = self.out[j]
        gs, B = self.blocks[d]
        c = [0] * len(B.coordinates([0] * len(gs)))
        c[slot] = 1
        vec = B.from_coordinates(c)
        return {self.gens[gs[i]]: a for i, a in enumerate(vec) if a}


class BoxProduct(MackeyData):
    """A box product as Mackey data, keeping the generator bookkeeping."""

    def dress_pair(self, L, elements) -> list[int]:
        """f_L(x_1 ⊗ ... ⊗ x_N) for factor coordinate vectors at level L."""
        G = self.group
        L = G.sub(L).id
        if len(elements) != len(self.factors):
            raise LevelMismatch("one element per factor is required")
        vecs = []
        for f, x in zip(self.factors, elements):
            if len(x) != f.rk[L]:
                raise LevelMismatch("element does not live at this level")
            vecs.append({i: int(c) for i, c in enumerate(x) if c})
        return self.box_levels[L].coords_of({(L, k): c for k, c in _expand(vecs).items()})

    def green_mul(self, L, a, b) -> list[int]:
        if not self.is_green:
            raise NotGreen("factors carry no multiplication")
        L = self.group.sub(L).id
        return self.product(L, a, b)

    def summand_image(self, L, H, idx) -> list[int]:
        """Image of the generator Tr_H^L(x_1 ⊗ ... ⊗ x_N) in reduced coordinates."""
        return self.box_levels[L].coords_of({(H, tuple(idx)): 1})


def _gens_res(G, factors, Lsrc, Ltgt, v: dict) -> dict:
    """Res^{Lsrc}_{Ltgt} on a generator vector {(H, idx): c}."""
    conj, meet, inv = G.conj_table, G.meet_table, G.inv
    out = {}
    for (H, idx), c in v.items():
        for g in double_cosets(G.sub(Ltgt), G.sub(H), G.sub(Lsrc)):
            inner = meet[H][conj[inv[g]][Ltgt]]
            J = conj[g][inner]
            vecs = [_apply(f.conj[(g, inner)], f.res[(inner, H)][a]) for f, a in zip(factors, idx)]
            for k, w in _expand(vecs).items():
                out[(J, k)] = out.get((J, k), 0) + c * w
    return out


def _gens_conj(G, factors, g, v: dict) -> dict:
    out = {}
    for (H, idx), c in v.items():
        gH = G.conj_table[g][H]
        for k, w in _expand([f.conj[(g, H)][a] for f, a in zip(factors, idx)]).items():
            out[(gH, k)] = out.get((gH, k), 0) + c * w
    return out


def _gens_mul(G, factors, L, a: dict, b: dict) -> dict:
    """Product at level L by Frobenius reciprocity over H\\L/K."""
    conj, meet, inv = G.conj_table, G.meet_table, G.inv
    out = {}
    for (H, x), ca in a.items():
        for (K, y), cb in b.items():
            for g in double_cosets(G.sub(H), G.sub(K), G.sub(L)):
                J = meet[H][conj[g][K]]
                inner = conj[inv[g]][J]
                vecs = []
                for f, xi, yi in zip(factors, x, y):
                    u = f.res[(J, H)][xi]
                    w = _apply(f.conj[(g, inner)], f.res[(inner, K)][yi])
                    vecs.append(f.product(J, u, w))
                for k, c in _expand(vecs).items():
                    out[(J, k)] = out.get((J, k), 0) + ca * cb * c
    return out


def box(Ms, truncation=None, green=None) -> BoxProduct:
    """M_1 ⊠ ... ⊠ M_N, optionally truncated at total degree ``truncation``."""
    Ms = list(Ms)
    if not Ms:
        raise ValueError("need at least one factor")
    G = Ms[0].group
    for M in Ms:
        if M.group is not G:
            raise GroupMismatch("box product of functors over different groups")
    if truncation is not None and any(M.grading is None for M in Ms):
        raise ValueError("truncation needs graded factors")
    graded = all(M.grading is not None for M in Ms)
    if green is None:
        green = all(M.is_green for M in Ms)
    elif green and not all(M.is_green for M in Ms):
        raise NotGreen("every factor must be a Green functor")
    factors = [_Factor(M) for M in Ms]
    n = G.nsub
    leq = G.leq_table
    lv = {L: BoxLevel(factors, L, truncation) for L in range(n)}
    lifts = {L: [lv[L].lift(j) for j in range(lv[L].rank)] for L in range(n)}

    def matrix(cols, rows):
        A = [[0] * len(cols) for _ in range(rows)]
        for j, col in enumerate(cols):
            for i, c in enumerate(col):
                A[i][j] = c
        return A

    res, tr, conj = {}, {}, {}
    for K in range(n):
        for H in range(n):
            if not leq[H][K]:
                continue
            res[(H, K)] = matrix([lv[H].coords_of(_gens_res(G, factors, K, H, v))
                                  for v in lifts[K]], lv[H].rank)
            tr[(H, K)] = matrix([lv[K].coords_of(v) for v in lifts[H]], lv[K].rank)
    for H in range(n):
        for g in range(G.order):
            gH = G.conj_table[g][H]
            conj[(g, H)] = matrix([lv[gH].coords_of(_gens_conj(G, factors, g, v))
                                   for v in lifts[H]], lv[gH].rank)
    mult = unit = None
    if green:
        mult, unit = {}, {}
        for L in range(n):
            r = lv[L].rank
            T = np.zeros((r, r, r), dtype=np.int64)
            for i in range(r):
                for j in range(i, r):
                    c = lv[L].coords_of(_gens_mul(G, factors, L, lifts[L][i], lifts[L][j]))
                    T[i, j, :] = c
                    T[j, i, :] = c
            mult[L] = T
            u = _expand([f.unit(L) for f in factors])
            unit[L] = lv[L].coords_of({(L, k): c for k, c in u.items()})
    grading = {L: [d for d, _, _ in lv[L].out] for L in range(n)} if graded else None
    prov = {"factors": [M.name for M in Ms], "truncation": truncation,
            "summands": {str(L): {str(H): sum(1 for g in lv[L].gens if g[0] == H)
                                  for H in lv[L].summands} for L in range(n)},
            "relations": {str(L): len(lv[L].relations) for L in range(n)}}
    name = " ⊠ ".join(M.name for M in Ms)
    B = BoxProduct(G, {L: lv[L].module for L in range(n)}, res, tr, conj, mult, unit,
                   name=name, provenance=prov, grading=grading)
    B.factors = factors
    B.box_levels = lv
    B.truncation = truncation
    return B


def abelian_level(Ms, L, truncation=None) -> PresentedZModule:
    """Level L from coinvariants (S_H)_{L/H} modulo Frobenius relations.

    Only valid for abelian groups, where conjugation fixes every subgroup.
    Built with a dense presentation, independently of :class:`BoxLevel`'s
    sparse reduction.
    """
    G = Ms[0].group
    if not G.is_abelian:
        raise ValueError("the coinvariant description needs an abelian group")
    factors = [_Factor(M) for M in Ms]
    L = G.sub(L).id
    lvl = BoxLevel(factors, L, truncation, weyl=False)
    rels = list(lvl.relations)
    Lel = G.sub(L).elements
    for (H, idx) in lvl.gens:
        for l in Lel:
            img = _expand([f.conj[(l, H)][a] for f, a in zip(factors, idx)])
            terms = {(H, k): -c for k, c in img.items()}
            terms[(H, idx)] = terms.get((H, idx), 0) + 1
            v = lvl.vector({k: c for k, c in terms.items() if c})
            if v:
                rels.append(v)
    dense = []
    for r in rels:
        row = [0] * len(lvl.gens)
        for g, c in r.items():
            row[g] = c
        dense.append(row)
    return PresentedZModule(len(lvl.gens), dense)


# ---------------------------------------------------------------------------
# comparison with the free functor on a disjoint union

def compare_free(X, Y, L, max_n: int) -> dict:
    """Check 𝔸[X ⊔ Y](G/L) ≅ (𝔸[X] ⊠ 𝔸[Y])(G/L) through degree max_n.

    Compares the box level with the direct basis census per degree and
    checks that the explicit Dress map, Tr_H^L(R_i(x)·R_j(y)), kills every
    relation and is an isomorphism on each degree block.
    """
    from . import free as fr
    G = X.group
    if Y.group is not G:
        raise GroupMismatch("X and Y over different groups")
    L = G.sub(L).id
    fX = free_truncation(X, max_n, green=False)
    fY = free_truncation(Y, max_n, green=False)
    lvl = BoxLevel([_Factor(fX), _Factor(fY)], L, max_n)
    U, (iX, iY) = disjoint_union(X, Y)
    direct = fr.level_basis(U, L, max_n)
    dindex = {c: i for i, c in enumerate(direct)}
    ddeg = [fr.bs.component_degree(G, c) for c in direct]
    bX = {H: fr.level_basis(X, H, max_n) for H in lvl.summands}
    bY = {H: fr.level_basis(Y, H, max_n) for H in lvl.summands}

    def h(g):
        H, (a, b) = lvl.gens[g]
        x = fr.relabel(fr.LevelElement(X, H, {bX[H][a]: 1}, canonical=True), iX)
        y = fr.relabel(fr.LevelElement(Y, H, {bY[H][b]: 1}, canonical=True), iY)
        return fr.tr(x * y, L).terms

    images = [h(g) for g in range(len(lvl.gens))]
    well_defined = True
    for r in lvl.relations:
        acc = {}
        for g, c in r.items():
            _add_into(acc, images[g], c)
        if any(acc.values()):
            well_defined = False
            break
    strata = {}
    ok = well_defined
    for d in range(max_n + 1):
        count = sum(1 for x in ddeg if x == d)
        gs, B = lvl.blocks.get(d, ([], PresentedZModule(0)))
        rows = [i for i, x in enumerate(ddeg) if x == d]
        rpos = {i: k for k, i in enumerate(rows)}
        A = [[0] * len(gs) for _ in rows]
        for j, g in enumerate(gs):
            for c, v in images[g].items():
                A[rpos[dindex[c]]][j] += v
        iso = B.invariants == (count, ())
        dress = is_isomorphism(A, B, free_module(count)) if well_defined else False
        strata[d] = {"box": [B.invariants[0], list(B.invariants[1])], "direct": count,
                     "iso": iso, "dress_iso": dress}
        ok = ok and iso and dress
    return {"pass": ok, "group": G.name, "X": repr(X), "Y": repr(Y), "level": L,
            "max_n": max_n, "dress_well_defined": well_defined, "strata": strata}


# ---------------------------------------------------------------------------
# the Green counterexample

def indecomposables(M: MackeyData, L) -> PresentedZModule:
    """A_+/(A_+)² at level L of a graded Green functor, A_+ = positive degrees.

    Its minimal number of generators bounds the number of ring
    generators of the level from below (degree-zero part aside).
    """
    G = M.group
    L = G.sub(L).id
    r = M.levels[L].rank
    deg = M.grading[L]
    pos = [i for i in range(r) if deg[i] > 0]
    rels = list(M.levels[L].relations)
    for i in range(r):
        if deg[i] == 0:
            rels.append([int(i == j) for j in range(r)])
    T = np.asarray(M.mult[L])
    for a in pos:
        for b in pos:
            if b >= a:
                rels.append([int(v) for v in T[a, b]])
    return PresentedZModule(r, rels)


def green_example(p: int, d: int) -> dict:
    """Square of the truncated C_p Green example: structure of the top level."""
    from .mackey import green_counterexample
    R = green_counterexample(p, d)
    B = box([R, R])
    G = B.group
    top, e = G.whole.id, G.trivial.id
    lvl = B.box_levels[top]
    trs = [B.summand_image(top, e, idx) for H, idx in lvl.gens if H == e]
    zero = all(not any(B.level(top).coordinates(B.green_mul(top, a, b)))
               for a in trs for b in trs)
    Q = indecomposables(B, top)
    return {"p": p, "d": d, "top": B.level(top).invariants,
            "transfer_products_zero": zero, "generators_lower_bound": Q.ngens_min,
            "box": B}

"""Mackey and Green functors as explicit Lewis diagrams.

A :class:`MackeyData` holds a presented module for every subgroup and
integer matrices for restriction, transfer and conjugation between
them (matrices act on column vectors, so ``res[(H, K)]`` has shape
``rank(H) × rank(K)``).  Green functors additionally carry a structure
tensor per level.  :func:`check_axioms` verifies everything
exhaustively, comparing maps modulo the relations of their targets.
"""

from __future__ import annotations

import json

import numpy as np

from .groups import FiniteGroup, double_cosets, load_group
from .zmodule import PresentedZModule, identity


class MackeyData:
    def __init__(self, group: FiniteGroup, levels: dict, res: dict, tr: dict, conj: dict,
                 mult: dict | None = None, unit: dict | None = None, name: str = "M",
                 provenance: dict | None = None, grading: dict | None = None):
        self.group = group
        self.levels = levels          # subgroup id -> PresentedZModule
        self.res = res                # (H, K) -> matrix M(K) -> M(H)
        self.tr = tr                  # (H, K) -> matrix M(H) -> M(K)
        self.conj = conj              # (g, H) -> matrix M(H) -> M(gHg^-1)
        self.mult = mult              # H -> array (r, r, r) or None
        self.unit = unit              # H -> vector
        self.name = name
        self.provenance = provenance or {}
        self.grading = grading        # H -> numerical degree of each generator

    def __repr__(self):
        return f"MackeyData({self.name!r} over {self.group.name})"

    @property
    def is_green(self) -> bool:
        return self.mult is not None

    def rank(self, H) -> int:
        return self.levels[self.group.sub(H).id].rank

    def level(self, H) -> PresentedZModule:
        return self.levels[self.group.sub(H).id]

    def product(self, H, a, b) -> list[int]:
        """Product of two coordinate vectors at level H (Green data only)."""
        T = self.mult[self.group.sub(H).id]
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        if T.size == 0:
            return []
        return [int(v) for v in np.einsum("i,j,ijk->k", a, b, T.astype(object))]

    def apply(self, kind: str, key, v) -> list[int]:
        A = getattr(self, kind)[key]
        return [sum(a * b for a, b in zip(row, v) if a) for row in A]

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        G = self.group
        data = {
            "name": self.name,
            "group": {"name": G.name, "order": G.order, "mul": [list(r) for r in G.mul]},
            "levels": {str(h): m.to_json() for h, m in sorted(self.levels.items())},
            "res": [[h, k, _lists(m)] for (h, k), m in sorted(self.res.items())],
            "tr": [[h, k, _lists(m)] for (h, k), m in sorted(self.tr.items())],
            "conj": [[g, h, _lists(m)] for (g, h), m in sorted(self.conj.items())],
        }
        if self.mult is not None:
            data["mult"] = {str(h): np.asarray(t).tolist() for h, t in sorted(self.mult.items())}
            data["unit"] = {str(h): list(map(int, u)) for h, u in sorted(self.unit.items())}
        if self.grading is not None:
            data["grading"] = {str(h): list(map(int, d)) for h, d in sorted(self.grading.items())}
        if self.provenance:
            data["provenance"] = self.provenance
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data) -> "MackeyData":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        g = data["group"]
        try:
            G = load_group(g["name"])
            if [list(r) for r in G.mul] != g["mul"]:
                raise ValueError
        except Exception:
            G = FiniteGroup(g["mul"], g["name"])
        levels = {int(h): PresentedZModule.from_json(m) for h, m in data["levels"].items()}
        res = {(h, k): m for h, k, m in data["res"]}
        tr = {(h, k): m for h, k, m in data["tr"]}
        conj = {(a, h): m for a, h, m in data["conj"]}
        mult = unit = None
        if "mult" in data:
            mult = {int(h): np.array(t, dtype=np.int64).reshape((levels[int(h)].rank,) * 3)
                    for h, t in data["mult"].items()}
            unit = {int(h): u for h, u in data["unit"].items()}
        grading = None
        if "grading" in data:
            grading = {int(h): d for h, d in data["grading"].items()}
        return cls(G, levels, res, tr, conj, mult, unit, data.get("name", "M"),
                   data.get("provenance"), grading)


def _lists(m):
    return [list(map(int, r)) for r in m]


# ---------------------------------------------------------------------------
# axiom checker

def _arr(m, rows, cols):
    a = np.array(m, dtype=np.int64) if rows and cols else np.zeros((rows, cols), dtype=np.int64)
    return a.reshape(rows, cols)


class _Checker:
    def __init__(self, M: MackeyData):
        self.M = M
        G = self.G = M.group
        self.rk = {h: M.levels[h].rank for h in range(G.nsub)}
        self.res = {k: _arr(v, self.rk[k[0]], self.rk[k[1]]) for k, v in M.res.items()}
        self.tr = {k: _arr(v, self.rk[k[1]], self.rk[k[0]]) for k, v in M.tr.items()}
        self.conj = {(g, h): _arr(v, self.rk[G.conj_table[g][h]], self.rk[h])
                     for (g, h), v in M.conj.items()}

    def same(self, A, B, target: int):
        """None if A ≡ B modulo relations of level ``target``, else a column index."""
        D = A - B
        if not D.any():
            return None
        lvl = self.M.levels[target]
        if not lvl.relations:
            return int(np.nonzero(D.any(axis=0))[0][0])
        for j in range(D.shape[1]):
            if D[:, j].any() and not lvl.is_zero([int(v) for v in D[:, j]]):
                return j
        return None


def _exact_tensordot(A, B, axes):
    """Integer tensordot through float64 BLAS when that is provably exact."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = 1
    for ax in axes[0]:
        inner *= A.shape[ax]
    bound = float(np.abs(A).max(initial=0)) * float(np.abs(B).max(initial=0)) * max(inner, 1)
    if bound < 2.0 ** 52:
        out = np.tensordot(A.astype(np.float64), B.astype(np.float64), axes=axes)
        return np.rint(out).astype(np.int64)
    return np.tensordot(A.astype(object), B.astype(object), axes=axes)


def _mm(*mats):
    out = mats[0]
    for m in mats[1:]:
        out = _exact_tensordot(out, m, ([1], [0]))
    return out


def _fail(axiom, **where):
    out = {"pass": False, "axiom": axiom}
    out.update({k: v for k, v in where.items()})
    return out


def check_axioms(M: MackeyData, green: bool | None = None) -> dict:
    """Exhaustive check; returns {"pass": True} or the first failing instance."""
    G = M.group
    C = _Checker(M)
    subs = G.subgroups()
    leq = G.leq_table
    n = G.nsub
    # presence of all required maps
    for H in range(n):
        if H not in M.levels:
            return _fail("missing level", H=H)
        for K in range(n):
            if leq[H][K] and ((H, K) not in M.res or (H, K) not in M.tr):
                return _fail("missing map", H=H, K=K)
        for g in range(G.order):
            if (g, H) not in M.conj:
                return _fail("missing conjugation", g=g, H=H)
    # well-definedness: relations go to relations
    for (H, K), A in C.res.items():
        for r in M.levels[K].relations:
            if not M.levels[H].is_zero([int(v) for v in A @ np.array(r, dtype=np.int64)]):
                return _fail("res not well defined", H=H, K=K)
    for (H, K), A in C.tr.items():
        for r in M.levels[H].relations:
            if not M.levels[K].is_zero([int(v) for v in A @ np.array(r, dtype=np.int64)]):
                return _fail("tr not well defined", H=H, K=K)
    for (g, H), A in C.conj.items():
        for r in M.levels[H].relations:
            tgt = G.conj_table[g][H]
            if not M.levels[tgt].is_zero([int(v) for v in A @ np.array(r, dtype=np.int64)]):
                return _fail("conj not well defined", g=g, H=H)
    # (i) identities and functoriality
    for H in range(n):
        I = np.eye(C.rk[H], dtype=np.int64)
        if C.same(C.res[(H, H)], I, H) is not None:
            return _fail("Res_H^H = id", H=H)
        if C.same(C.tr[(H, H)], I, H) is not None:
            return _fail("Tr_H^H = id", H=H)
    for J in range(n):
        for H in range(n):
            if not leq[J][H]:
                continue
            for K in range(n):
                if not leq[H][K]:
                    continue
                if C.same(_mm(C.res[(J, H)], C.res[(H, K)]), C.res[(J, K)], J) is not None:
                    return _fail("Res transitivity", J=J, H=H, K=K)
                if C.same(_mm(C.tr[(H, K)], C.tr[(J, H)]), C.tr[(J, K)], K) is not None:
                    return _fail("Tr transitivity", J=J, H=H, K=K)
    # (ii) conjugations
    conj = G.conj_table
    for H in range(n):
        for h in subs[H].elements:
            if C.same(C.conj[(h, H)], np.eye(C.rk[H], dtype=np.int64), H) is not None:
                return _fail("c_h = id", g=h, H=H)
        for g in range(G.order):
            gH = conj[g][H]
            for g2 in range(G.order):
                lhs = _mm(C.conj[(g2, gH)], C.conj[(g, H)])
                rhs = C.conj[(G.mul[g2][g], H)]
                if C.same(lhs, rhs, conj[g2][gH]) is not None:
                    return _fail("c_g' c_g = c_g'g", g=g, g2=g2, H=H)
    # (iii) conjugation compatibility
    for H in range(n):
        for K in range(n):
            if not leq[H][K]:
                continue
            for g in range(G.order):
                gH, gK = conj[g][H], conj[g][K]
                if C.same(_mm(C.conj[(g, H)], C.res[(H, K)]), _mm(C.res[(gH, gK)], C.conj[(g, K)]),
                          gH) is not None:
                    return _fail("c_g Res = Res c_g", g=g, H=H, K=K)
                if C.same(_mm(C.conj[(g, K)], C.tr[(H, K)]), _mm(C.tr[(gH, gK)], C.conj[(g, H)]),
                          gK) is not None:
                    return _fail("c_g Tr = Tr c_g", g=g, H=H, K=K)
    # (iv) double coset formula
    meet = G.meet_table
    for K in range(n):
        for H in range(n):
            if not leq[H][K]:
                continue
            for J in range(n):
                if not leq[J][K]:
                    continue
                lhs = _mm(C.res[(J, K)], C.tr[(H, K)])
                rhs = np.zeros_like(lhs)
                for x in double_cosets(subs[J], subs[H], subs[K]):
                    inner = meet[H][conj[G.inv[x]][J]]      # H ∩ x⁻¹Jx
                    outer = conj[x][inner]                  # J ∩ xHx⁻¹
                    rhs = rhs + _mm(C.tr[(outer, J)], C.conj[(x, inner)], C.res[(inner, H)])
                if C.same(lhs, rhs, J) is not None:
                    return _fail("double coset formula", H=H, J=J, K=K)
    if green is None:
        green = M.is_green
    if green:
        rep = _check_green(M, C)
        if not rep["pass"]:
            return rep
    return {"pass": True, "checked": "mackey+green" if green else "mackey"}


def _check_green(M: MackeyData, C: _Checker) -> dict:
    G = M.group
    n = G.nsub
    T = {h: np.asarray(M.mult[h], dtype=np.int64).reshape((C.rk[h],) * 3) for h in range(n)}
    U = {h: np.asarray(M.unit[h], dtype=np.int64).reshape(C.rk[h]) for h in range(n)}

    def prod_mat(h, A, B):
        # columnwise products: result[k, a, b] = (A[:, a] * B[:, b])_k
        tmp = _exact_tensordot(A, T[h], ([0], [0]))          # a, j, k
        out = _exact_tensordot(tmp, B, ([1], [0]))           # a, k, b
        return out.transpose(1, 0, 2)

    def eq(h, X, Y):
        D = (X - Y).reshape(C.rk[h], -1)
        return C.same(D, np.zeros_like(D), h) is None

    leq = G.leq_table
    for h in range(n):
        r = C.rk[h]
        I = np.eye(r, dtype=np.int64)
        # unit and commutativity
        left = np.tensordot(U[h], T[h], axes=([0], [0])).T
        if not eq(h, left, I):
            return _fail("unit", H=h)
        P = prod_mat(h, I, I)
        if not eq(h, P, P.transpose(0, 2, 1)):
            return _fail("commutativity", H=h)
        # (ab)c = a(bc) over all basis triples, or over all triples from a
        # fixed sample of 16 basis elements when the rank is larger
        S = np.arange(r) if r <= 16 else np.sort(np.random.default_rng(h).choice(r, 16, replace=False))
        A = I[:, S]
        s = len(S)
        ab = prod_mat(h, A, A).reshape(r, s * s)
        lhs = prod_mat(h, ab, A)                              # ((ab)c)
        rhs = prod_mat(h, A, ab)                              # (a(bc))
        if not eq(h, lhs.reshape(r, -1), rhs.reshape(r, -1)):
            return _fail("associativity", H=h)
    for H in range(n):
        for K in range(n):
            if not leq[H][K]:
                continue
            R, Tr = C.res[(H, K)], C.tr[(H, K)]
            IK = np.eye(C.rk[K], dtype=np.int64)
            IH = np.eye(C.rk[H], dtype=np.int64)
            # Res is a ring map
            if not eq(H, _mm(R, U[K].reshape(-1, 1)), U[H].reshape(-1, 1)):
                return _fail("Res preserves unit", H=H, K=K)
            prodK = prod_mat(K, IK, IK).reshape(C.rk[K], -1)
            lhs = _mm(R, prodK)
            rhs = prod_mat(H, R, R).reshape(C.rk[H], -1)
            if not eq(H, lhs, rhs):
                return _fail("Res multiplicative", H=H, K=K)
            # Frobenius: Tr(a Res b) = Tr(a) b
            lhs = _mm(Tr, prod_mat(H, IH, R).reshape(C.rk[H], -1))
            rhs = prod_mat(K, Tr, IK).reshape(C.rk[K], -1)
            if not eq(K, lhs, rhs):
                return _fail("Frobenius reciprocity", H=H, K=K)
    PH = {H: prod_mat(H, np.eye(C.rk[H], dtype=np.int64),
                      np.eye(C.rk[H], dtype=np.int64)).reshape(C.rk[H], -1) for H in range(n)}
    for H in range(n):
        for g in range(G.order):
            gH = G.conj_table[g][H]
            Cg = C.conj[(g, H)]
            lhs = _mm(Cg, PH[H])
            rhs = prod_mat(gH, Cg, Cg).reshape(C.rk[gH], -1)
            if not eq(gH, lhs, rhs):
                return _fail("c_g multiplicative", g=g, H=H)
    return {"pass": True}


# ---------------------------------------------------------------------------
# catalog

def _class_reps_in(G: FiniteGroup, L: int) -> list[int]:
    """Ids of L-conjugacy class representatives (least id) of subgroups of L."""
    Lsub = G.sub(L)
    reps = set()
    for J in G.subgroups():
        if J <= Lsub:
            reps.add(min(G.conj_table[l][J.id] for l in Lsub.elements))
    return sorted(reps)


def _rep_in(G, L, J) -> int:
    return min(G.conj_table[l][J] for l in G.sub(L).elements)


def burnside(G: FiniteGroup) -> MackeyData:
    """The Burnside Green functor from orbit counting of finite L-sets.

    Level L has basis [L/J] over L-classes of J ≤ L.
    """
    subs = G.subgroups()
    n = G.nsub
    basis = {L: _class_reps_in(G, L) for L in range(n)}
    index = {L: {J: i for i, J in enumerate(b)} for L, b in basis.items()}
    levels = {L: PresentedZModule(len(b)) for L, b in basis.items()}
    leq = G.leq_table
    conj, meet = G.conj_table, G.meet_table
    res, tr, cmat = {}, {}, {}
    for K in range(n):
        for H in range(n):
            if not leq[H][K]:
                continue
            R = [[0] * len(basis[K]) for _ in basis[H]]
            T = [[0] * len(basis[H]) for _ in basis[K]]
            for j, J in enumerate(basis[K]):
                # K/J as an H-set: orbits over H\K/J
                for x in double_cosets(subs[H], subs[J], subs[K]):
                    st = meet[H][conj[x][J]]
                    R[index[H][_rep_in(G, H, st)]][j] += 1
            for i, J in enumerate(basis[H]):
                T[index[K][_rep_in(G, K, J)]][i] += 1
            res[(H, K)] = R
            tr[(H, K)] = T
    for H in range(n):
        for g in range(G.order):
            gH = conj[g][H]
            Cm = [[0] * len(basis[H]) for _ in basis[gH]]
            for i, J in enumerate(basis[H]):
                Cm[index[gH][_rep_in(G, gH, conj[g][J])]][i] += 1
            cmat[(g, H)] = Cm
    mult, unit = {}, {}
    for L in range(n):
        b = basis[L]
        r = len(b)
        T = np.zeros((r, r, r), dtype=np.int64)
        for i, J in enumerate(b):
            for j, J2 in enumerate(b):
                for x in double_cosets(subs[J], subs[J2], subs[L]):
                    st = meet[J][conj[x][J2]]
                    T[i, j, index[L][_rep_in(G, L, st)]] += 1
        mult[L] = T
        u = [0] * r
        u[index[L][L]] = 1
        unit[L] = u
    return MackeyData(G, levels, res, tr, cmat, mult, unit, name=f"Burnside({G.name})",
                      provenance={"basis": {str(L): b for L, b in basis.items()}},
                      grading={L: [0] * len(b) for L, b in basis.items()})


def constant_functor(G: FiniteGroup) -> MackeyData:
    """Z at every level, Res = id, Tr = index, c_g = id (fixed points of trivial Z)."""
    n = G.nsub
    subs = G.subgroups()
    leq = G.leq_table
    levels = {L: PresentedZModule(1) for L in range(n)}
    res = {(H, K): [[1]] for H in range(n) for K in range(n) if leq[H][K]}
    tr = {(H, K): [[subs[K].order // subs[H].order]]
          for H in range(n) for K in range(n) if leq[H][K]}
    conj = {(g, H): [[1]] for g in range(G.order) for H in range(n)}
    mult = {L: np.ones((1, 1, 1), dtype=np.int64) for L in range(n)}
    unit = {L: [1] for L in range(n)}
    return MackeyData(G, levels, res, tr, conj, mult, unit, name=f"Const({G.name})",
                      grading={L: [0] for L in range(n)})


def green_counterexample(p: int, d: int) -> MackeyData:
    """C_p Green functor: F_p on top, F_p[x]/(x^{d+1}) at the bottom, Tr = 0."""
    from .groups import preset
    if d < 1:
        raise ValueError("truncation d must be at least 1")
    G = preset(f"C{p}")
    e, top = G.trivial.id, G.whole.id
    r = d + 1
    levels = {top: PresentedZModule(1, [[p]]),
              e: PresentedZModule(r, [[p * int(i == j) for j in range(r)] for i in range(r)])}
    res = {(top, top): [[1]], (e, e): identity(r),
           (e, top): [[1]] + [[0] for _ in range(r - 1)]}
    tr = {(top, top): [[1]], (e, e): identity(r), (e, top): [[0] * r]}
    conj = {}
    for g in range(G.order):
        conj[(g, top)] = [[1]]
        conj[(g, e)] = identity(r)
    Tb = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            if i + j < r:
                Tb[i, j, i + j] = 1
    mult = {top: np.ones((1, 1, 1), dtype=np.int64), e: Tb}
    unit = {top: [1], e: [1] + [0] * (r - 1)}
    return MackeyData(G, levels, res, tr, conj, mult, unit,
                      name=f"GreenExample(p={p},d={d})", provenance={"p": p, "d": d},
                      grading={top: [0], e: list(range(r))})


def free_truncation(X, max_n: int, green: bool = True) -> MackeyData:
    """𝔸[X] modulo numerical degree > max_n, in the irreducible-class basis."""
    from . import bispan as bs
    from . import free as fr
    G = X.group
    n = G.nsub
    basis = {L: fr.level_basis(X, L, max_n) for L in range(n)}
    index = {L: {c: i for i, c in enumerate(b)} for L, b in basis.items()}
    levels = {L: PresentedZModule(len(b)) for L, b in basis.items()}

    def column_matrix(src, tgt, f):
        A = [[0] * len(basis[src]) for _ in basis[tgt]]
        for j, c in enumerate(basis[src]):
            out = f(fr.LevelElement(X, src, {c: 1}, canonical=True))
            for c2, v in out.terms.items():
                A[index[tgt][c2]][j] += v
        return A

    leq = G.leq_table
    res, tr, conj = {}, {}, {}
    for K in range(n):
        for H in range(n):
            if leq[H][K]:
                res[(H, K)] = column_matrix(K, H, lambda e, H=H: fr.res(e, H))
                tr[(H, K)] = column_matrix(H, K, lambda e, K=K: fr.tr(e, K))
    for H in range(n):
        for g in range(G.order):
            conj[(g, H)] = column_matrix(H, G.conj_table[g][H], lambda e, g=g: fr.cg(e, g))
    mult = unit = None
    if green:
        mult, unit = {}, {}
        for L in range(n):
            b = basis[L]
            r = len(b)
            T = np.zeros((r, r, r), dtype=np.int64)
            for i, c1 in enumerate(b):
                e1 = fr.LevelElement(X, L, {c1: 1}, canonical=True)
                for j in range(i, r):
                    prod = e1 * fr.LevelElement(X, L, {b[j]: 1}, canonical=True)
                    for c, v in prod.terms.items():
                        k = index[L].get(c)
                        if k is not None:
                            T[i, j, k] += v
                            if i != j:
                                T[j, i, k] += v
            mult[L] = T
            u = [0] * r
            u[index[L][fr.unit(X, L).terms and next(iter(fr.unit(X, L).terms))]] = 1
            unit[L] = u
    return MackeyData(G, levels, res, tr, conj, mult, unit,
                      name=f"A[{X!r}]<={max_n}",
                      provenance={"max_n": max_n,
                                  "basis": {str(L): [[k, y, [list(a) for a in at]]
                                                     for k, y, at in b]
                                            for L, b in basis.items()}},
                      grading={L: [bs.component_degree(G, c) for c in b]
                               for L, b in basis.items()})


def corrupt(M: MackeyData, kind: str = "tr", key=None, delta: int = 1) -> MackeyData:
    """A copy of M with one matrix entry changed (negative control)."""
    import copy
    N = copy.deepcopy(M)
    table = getattr(N, kind)
    if key is None:
        key = next(k for k, m in sorted(table.items()) if m and m[0] and k[0] != k[1])
    table[key][0][0] += delta
    return N

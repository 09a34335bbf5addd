"""Finitely generated abelian groups given by integer relation matrices.

Elements are integer vectors in generator coordinates; relation rows
span the submodule that is divided out.  Linear maps are matrices
acting on column vectors (``target_rank × source_rank``).  All
arithmetic uses Python integers.
"""

from __future__ import annotations

from functools import cached_property
from typing import Sequence


class DimensionMismatch(ValueError):
    pass


Matrix = list  # list of rows of ints


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if not A:
        return []
    n = len(B[0]) if B else 0
    k = len(B) if inner is None else inner
    if A and len(A[0]) != k:
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {k}x{n}")
    cols = list(zip(*B)) if B else [()] * n
    return [[sum(a * b for a, b in zip(row, col) if a) for col in cols] for row in A]


def matvec(A: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v) if a) for row in A]


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(r) for r in zip(*A)]


def det(A: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


def smith_normal_form(A: Matrix, ncols: int | None = None):
    """Return (U, D, V) with U·A·V = D diagonal, U and V unimodular.

    The diagonal is nonnegative and each entry divides the next.  Pivots
    are chosen with minimal absolute value to limit entry growth.
    """
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    D = [list(map(int, r)) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q row_src
        rs, rd = D[src], D[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        us, ud = U[src], U[dst]
        for j in range(m):
            if us[j]:
                ud[j] += q * us[j]

    def add_col(dst, src, q):  # col_dst += q col_src
        for r in D:
            if r[src]:
                r[dst] += q * r[src]
        for r in V:
            if r[src]:
                r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        # minimal nonzero pivot in the remaining block
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = -(D[i][t] // p)
                    add_row(i, t, q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = -(D[t][j] // p)
                    add_col(j, t, q)
                    if D[t][j]:
                        done = False
            if not done:
                # move the smallest leftover in row/column t to the pivot
                best = (abs(D[t][t]), t, t)
                for i in range(t + 1, m):
                    if D[i][t] and abs(D[i][t]) < best[0]:
                        best = (abs(D[i][t]), i, t)
                for j in range(t + 1, n):
                    if D[t][j] and abs(D[t][j]) < best[0]:
                        best = (abs(D[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            # divisibility against the rest of the block
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    return U, D, V


def invariant_factors(A: Matrix, ncols: int) -> list[int]:
    """Diagonal of the Smith form padded with zeros to ``ncols`` entries."""
    _, D, _ = smith_normal_form(A, ncols)
    diag = [D[i][i] for i in range(min(len(D), ncols))]
    return diag + [0] * (ncols - len(diag))


def _inverse_unimodular(V: Matrix) -> Matrix:
    """Inverse of a unimodular matrix, read off its Smith form."""
    U, D, W = smith_normal_form(V)
    # U V W = I  =>  V^-1 = W U
    return matmul(W, U)


class PresentedZModule:
    """Z^rank modulo the row span of ``relations``."""

    def __init__(self, rank: int, relations: Sequence[Sequence[int]] = ()):
        self.rank = rank
        rels = []
        for r in relations:
            r = [int(v) for v in r]
            if len(r) != rank:
                raise DimensionMismatch("relation length differs from rank")
            if any(r):
                rels.append(r)
        self.relations = rels

    def __repr__(self):
        f, t = self.invariants
        parts = [f"Z^{f}"] if f else []
        parts += [f"Z/{d}" for d in t]
        return "PresentedZModule(" + (" + ".join(parts) or "0") + ")"

    @cached_property
    def _snf(self):
        U, D, V = smith_normal_form(self.relations, self.rank)
        diag = [D[i][i] for i in range(min(len(D), self.rank))]
        diag += [0] * (self.rank - len(diag))
        return diag, V

    @cached_property
    def _Vinv(self):
        return _inverse_unimodular(self._snf[1]) if self.rank else []

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self._snf[0])

    @cached_property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion factors > 1)."""
        diag = self._snf[0]
        return (sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1))

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of v in Z^f ⊕ ⊕ Z/d_i (unit factors dropped)."""
        if len(v) != self.rank:
            raise DimensionMismatch("vector length differs from rank")
        diag, V = self._snf
        w = [sum(v[i] * V[i][j] for i in range(self.rank) if v[i]) for j in range(self.rank)]
        out = []
        for d, x in zip(diag, w):
            if d == 1:
                continue
            out.append(x % d if d else x)
        return tuple(out)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.coordinates(v))

    def equal(self, v, w) -> bool:
        return self.is_zero([a - b for a, b in zip(v, w)])

    def in_relations(self, v) -> bool:
        return self.is_zero(v)

    def from_coordinates(self, coords: Sequence[int]) -> list[int]:
        """A generator-coordinate vector with the given canonical coordinates."""
        diag = self._snf[0]
        w, it = [], iter(coords)
        for d in diag:
            w.append(0 if d == 1 else next(it))
        Vi = self._Vinv
        return [sum(w[j] * Vi[j][i] for j in range(self.rank) if w[j]) for i in range(self.rank)]

    def coordinate_matrix(self) -> Matrix:
        """Rows: canonical coordinates of each generator (as a map to Z^k)."""
        return [list(self.coordinates([int(i == j) for j in range(self.rank)]))
                for i in range(self.rank)]

    @property
    def ngens_min(self) -> int:
        """Minimal number of generators."""
        return sum(1 for d in self._snf[0] if d != 1)

    def to_json(self) -> dict:
        return {"rank": self.rank, "relations": self.relations}

    @classmethod
    def from_json(cls, data) -> "PresentedZModule":
        return cls(data["rank"], data["relations"])


def free(n: int) -> PresentedZModule:
    return PresentedZModule(n, [])


def cyclic(d: int) -> PresentedZModule:
    return PresentedZModule(1, [[d]])


def direct_sum(modules: Sequence[PresentedZModule]) -> PresentedZModule:
    total = sum(M.rank for M in modules)
    rels, off = [], 0
    for M in modules:
        for r in M.relations:
            rels.append([0] * off + r + [0] * (total - off - M.rank))
        off += M.rank
    return PresentedZModule(total, rels)


def tensor(M: PresentedZModule, N: PresentedZModule):
    """M ⊗ N with generators e_i ⊗ f_j at index i*N.rank + j.

    Returns the module and the bilinear map on coordinate vectors.
    """
    m, n = M.rank, N.rank
    rels = []
    for r in M.relations:
        for j in range(n):
            row = [0] * (m * n)
            for i, v in enumerate(r):
                row[i * n + j] = v
            rels.append(row)
    for s in N.relations:
        for i in range(m):
            row = [0] * (m * n)
            for j, v in enumerate(s):
                row[i * n + j] = v
            rels.append(row)
    T = PresentedZModule(m * n, rels)

    def pair(v, w):
        return [v[i] * w[j] for i in range(m) for j in range(n)]
    return T, pair


def quotient(M: PresentedZModule, vectors: Sequence[Sequence[int]]):
    """M / span(vectors), with the projection matrix (identity on generators)."""
    for v in vectors:
        if len(v) != M.rank:
            raise DimensionMismatch("vector length differs from rank")
    Q = PresentedZModule(M.rank, list(M.relations) + [list(v) for v in vectors])
    return Q, identity(M.rank)


def is_iso(M: PresentedZModule, N: PresentedZModule) -> bool:
    return M.invariants == N.invariants


def map_is_well_defined(A: Matrix, src: PresentedZModule, tgt: PresentedZModule) -> bool:
    """Relations of the source land in the relations of the target."""
    return all(tgt.is_zero(matvec(A, r)) for r in src.relations)


def maps_equal(A: Matrix, B: Matrix, src: PresentedZModule, tgt: PresentedZModule):
    """Compare two maps on every generator modulo target relations.

    Returns None when equal, otherwise the first differing generator index.
    """
    for j in range(src.rank):
        col = [(A[i][j] if A else 0) - (B[i][j] if B else 0) for i in range(tgt.rank)]
        if not tgt.is_zero(col):
            return j
    return None


def is_isomorphism(A: Matrix, src: PresentedZModule, tgt: PresentedZModule) -> bool:
    """Whether the map A: src → tgt is well defined and bijective."""
    if not map_is_well_defined(A, src, tgt):
        return False
    # surjective: image plus target relations spans everything
    img = transpose(A, src.rank) if tgt.rank else []
    cok = PresentedZModule(tgt.rank, list(tgt.relations) + [r for r in img])
    if cok.invariants != (0, ()):
        return False
    # injective: compare sizes of the invariant data (finite generation makes
    # a surjection between isomorphic modules an isomorphism)
    return is_iso(src, tgt)


def in_span(vectors: Sequence[Sequence[int]], v: Sequence[int], rank: int) -> bool:
    """Whether v lies in the Z-span of ``vectors``."""
    return PresentedZModule(rank, vectors).is_zero(v)


class SparsePresentation:
    """Z^rank modulo sparse relations, with unit pivots eliminated first.

    Relations are dicts ``{generator: coefficient}``.  Every relation with
    a coefficient ±1 is used to solve for that generator, which is then
    substituted away.  What remains is a presentation on the surviving
    generators (``kept``) together with an expression of each eliminated
    generator in terms of them.
    """

    def __init__(self, rank: int, relations):
        self.rank = rank
        rels, occ = {}, {}
        for rid, r in enumerate(relations):
            r = {g: c for g, c in r.items() if c}
            if r:
                rels[rid] = r
                for g in r:
                    occ.setdefault(g, set()).add(rid)
        subs = []
        changed = True
        while changed:
            changed = False
            for rid in sorted(rels, key=lambda i: len(rels[i])):
                r = rels.get(rid)
                if r is None:
                    continue
                units = [g for g, c in r.items() if c in (1, -1)]
                if not units:
                    continue
                g = min(units, key=lambda h: (len(occ[h]), h))
                u = r[g]
                expr = {h: -c * u for h, c in r.items() if h != g}
                del rels[rid]
                for h in r:
                    occ[h].discard(rid)
                for other in list(occ[g]):
                    rr = rels[other]
                    a = rr.pop(g)
                    for h, c in expr.items():
                        v = rr.get(h, 0) + a * c
                        if v:
                            rr[h] = v
                            occ.setdefault(h, set()).add(other)
                        else:
                            rr.pop(h, None)
                            occ[h].discard(other)
                    if not rr:
                        del rels[other]
                occ[g] = set()
                subs.append((g, expr))
                changed = True
        final = {}
        for g, expr in reversed(subs):
            acc = {}
            for h, c in expr.items():
                for k, v in (final[h].items() if h in final else ((h, 1),)):
                    acc[k] = acc.get(k, 0) + c * v
            final[g] = {k: v for k, v in acc.items() if v}
        self.eliminated = final
        self.kept = [g for g in range(rank) if g not in final]
        self.residual = list(rels.values())

    def reduce(self, v: dict) -> dict:
        """Rewrite a vector on all generators as one on the kept generators."""
        out = {}
        for g, c in v.items():
            if not c:
                continue
            for k, w in (self.eliminated[g].items() if g in self.eliminated else ((g, 1),)):
                out[k] = out.get(k, 0) + c * w
        return {k: w for k, w in out.items() if w}


class Lattice:
    """A sublattice of Z^n kept as an echelon basis of sparse rows.

    ``add`` inserts a vector (extended-gcd merging on shared pivots);
    ``contains`` decides membership by greedy division on the pivots,
    which is exact because the basis is in echelon form.
    """

    def __init__(self):
        self.rows = {}        # pivot column -> {col: coef}, pivot entry positive

    def __len__(self):
        return len(self.rows)

    @staticmethod
    def _lead(v):
        return min(v) if v else None

    @staticmethod
    def _axpy(v, a, w, b):
        """a·v + b·w for sparse dicts."""
        out = {}
        for k, c in v.items():
            out[k] = a * c
        for k, c in w.items():
            out[k] = out.get(k, 0) + b * c
        return {k: c for k, c in out.items() if c}

    def add(self, v: dict) -> bool:
        """Insert v; returns whether the lattice grew."""
        v = {k: c for k, c in v.items() if c}
        grew = False
        while v:
            c = self._lead(v)
            r = self.rows.get(c)
            if r is None:
                if v[c] < 0:
                    v = {k: -x for k, x in v.items()}
                self.rows[c] = v
                return True
            a, b = r[c], v[c]
            if b % a == 0:
                v = self._axpy(v, 1, r, -(b // a))
                continue
            g, x, y = _egcd(a, b)
            new = self._axpy(r, x, v, y)
            v = self._axpy(r, b // g, v, -(a // g))
            if new[c] < 0:
                new = {k: -t for k, t in new.items()}
            self.rows[c] = new
            grew = True
        return grew

    def contains(self, v: dict) -> bool:
        v = {k: c for k, c in v.items() if c}
        while v:
            c = self._lead(v)
            r = self.rows.get(c)
            if r is None or v[c] % r[c]:
                return False
            v = self._axpy(v, 1, r, -(v[c] // r[c]))
        return True


def _egcd(a: int, b: int):
    """(g, x, y) with x·a + y·b = g = gcd(a, b) > 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0

"""Bispans X <- A -> B -> Y as a semiring, and composition of T, N, R."""

from tambara import bispan as bs
from tambara.groups import preset
from tambara.gsets import parse_gset, point, projection

G = preset("C2")
X, P = parse_gset(G, "C2/e"), point(G)

f = projection(G, G.trivial, G.whole)          # C2/e -> pt
t, n, r = bs.t_of(f), bs.n_of(f), bs.r_of(f)
print("T_f  =", t)
print("N_f  =", n)

print("R_f  =", r)

one = bs.one(X, P)
a = bs.BispanClass(X, P, [(G.whole.id, 0, ((G.trivial.id, 0),))], canonical=True)
print("1 + a =", bs.add(one, a))
print("a * a =", bs.mul(a, a))
print("R_f o N_f =", bs.compose(r, n))

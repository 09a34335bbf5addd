"""Levels of the free functor on X: bases, degrees, Res/Tr/Nm and Dedekind tuples."""

from tambara import bispan as bs
from tambara import free as fr
from tambara.groups import preset
from tambara.gsets import parse_gset

G = preset("C2")
X = parse_gset(G, "C2/e")
top = G.whole

for d, comps in fr.basis_by_degree(X, top, 3).items():
    print(f"degree {d}: {len(comps)} classes")

basis = fr.level_basis(X, top, 2)
a = fr.basis_element(X, top, basis[-1])
print("a =", a, " degree", fr.degree_of(G, basis[-1]))
print("a^2 =", (a * a).truncate(4))

low = fr.res(a, G.trivial)
print("Res a =", low)
print("Tr Res a =", fr.tr(low, top))
print("Nm Res a =", fr.nm(low, top))

# the bottom level is a polynomial ring on |X| generators
print("bottom level through degree 4:", len(fr.level_basis(X, G.trivial, 4)), "classes")

# Dedekind groups multiply in tuple form without building bispans
C4 = preset("C4")
H, K, L = C4.trivial, C4.sub("a^2"), C4.whole
s = fr.make_tuple(C4, K, [(H, 0)], H, L)
print("tuple", s, "squared:", dict(fr.multiply_tuples(C4, s, s)))
print("degree of", s, "=", fr.tuple_degree(C4, s), " irreducible degree",
      bs.component_degree(C4, fr.from_tuple(parse_gset(C4, "C4/e"), s)))

"""Subgroup lattices, double cosets and the generation classification."""

from tambara.groups import classify, coset_factorization, double_cosets, normalizer, preset

D8 = preset("D8")
print(D8.name, "order", D8.order, "subgroups", D8.nsub)
for H in D8.subgroups():
    print(f"  {H!r:28} normal={H.is_normal()}  N(H)={normalizer(H)!r}")

x = D8.sub("x")
print("x\\D8/x double cosets:", [D8.labels[r] for r in double_cosets(x, x)])

# H <= K <= L, M <= L: pairs (x, y_x) biject onto H\L/M
S3 = preset("S3")
e, s, G = S3.trivial, S3.sub("s"), S3.whole
print("coset factorization in S3:", coset_factorization(e, s, G, s))

for name in ["C4", "Q8", "S3", "D8", "D2p5"]:
    k = classify(preset(name))
    print(f"{name}: {k.kind}")

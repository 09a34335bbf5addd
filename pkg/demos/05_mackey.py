"""Mackey and Green functors as explicit data, with the axiom checker."""

from tambara import mackey as mk
from tambara.groups import preset
from tambara.gsets import parse_gset

S3 = preset("S3")
A = mk.burnside(S3)
for H in S3.subgroups():
    print(f"A({H!r}) rank {A.rank(H.id)}")
print("Burnside axioms:", mk.check_axioms(A)["pass"])

M = mk.free_truncation(parse_gset(S3, "S3/<s>"), 2)
print("free truncation, maxdeg 2:", mk.check_axioms(M)["pass"])

# the checker locates a deliberately broken transfer
bad = mk.corrupt(A, "tr")
r = mk.check_axioms(bad)
print("corrupted:", r)

R = mk.green_counterexample(3, 3)
print("C3 example, transfer is zero:", all(v == 0 for row in R.tr[(0, 1)] for v in row))

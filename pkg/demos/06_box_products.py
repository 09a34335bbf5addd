"""Box products, the Dress pairing, and the free-functor coproduct check."""

from tambara import boxprod as bp
from tambara import mackey as mk
from tambara.groups import preset
from tambara.gsets import parse_gset

C4 = preset("C4")
A = mk.burnside(C4)
B = bp.box([A, A])
print("Burnside box Burnside, top level:", B.levels[C4.whole.id].invariants)

X, Y = parse_gset(C4, "C4/C2"), parse_gset(C4, "C4/e")
r = bp.compare_free(X, Y, C4.whole.id, 2)
for d, s in r["strata"].items():
    print(f"degree {d}: box {s['box']} direct {s['direct']} iso {s['iso']}")

# the square of the C_p example needs more generators as the truncation grows
for d in range(2, 5):
    g = bp.green_example(2, d)
    print(f"d={d}: transfer products zero {g['transfer_products_zero']}, "
          f"at least {g['generators_lower_bound']} generators")

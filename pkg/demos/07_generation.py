"""Generation certificates: every class rewritten into generators, then re-checked."""

from collections import Counter

from tambara import genset as gs
from tambara.groups import preset
from tambara.gsets import parse_gset

C4 = preset("C4")
r = gs.certify_generation(C4, C4.trivial, max_n=6)
print(f"C4/e: {r['classes']} classes, {r['generators']} generators, "
      f"{r['product_nodes']} product steps, verified {r['verified']['pass']}")

cert = r["certificate"]
b = next(c for c in cert.targets if len(c[2]) == 3 and cert.nodes[c]["op"] == "mul")
print("target:", b)
print("expression:", cert.expression(b))
print("evaluates back:", gs.evaluate(cert.X, cert.L, cert.expression(b)) == Counter({b: 1}))

Q8 = preset("Q8")
r = gs.certify_generation(Q8, Q8.sub("i"), max_n=6)
for e in r["generator_set"]["escalations"]:
    print("escalation:", e["from"], "->", e["to"], "resolved", e["resolved"])

f = gs.relative_findim_check(C4, C4.trivial, 3)
for L, v in f["levels"].items():
    print(f"level {C4.sub(L)!r}: {v['basis']} classes, {v['module_generators']} module generators")

# norm along C2 <= C4 of the free functor on C2/e is free on C4/e
H = C4.sub("a^2")
Hg, _ = H.as_group()
n = gs.norm_free_check(H, parse_gset(Hg, "C2/e"), C4.whole.id, 2)
print(n["induced"], n["pass"])

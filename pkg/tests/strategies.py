"""Hypothesis strategies for small bispans."""

from hypothesis import strategies as st

from tambara import bispan as bs
from tambara import free as fr
from tambara.groups import preset
from tambara.gsets import GSet


@st.composite
def gsets(draw, G, max_orbits=2, allow_empty=True):
    subs = G.subgroups()
    n = draw(st.integers(0 if allow_empty else 1, max_orbits))
    return GSet(G, [draw(st.sampled_from(subs)) for _ in range(n)])


@st.composite
def components(draw, X, Y, max_atoms=2):
    G = X.group
    y = draw(st.integers(0, Y.size - 1))
    Ky = Y.stabilizer(y)
    K = draw(st.sampled_from([H for H in G.subgroups() if H <= Ky]))
    classes = fr.atom_classes(X, K.id) if X.size else []
    atoms = draw(st.lists(st.sampled_from(classes), max_size=max_atoms)) if classes else []
    return bs.canonical_component(X, Y, K.id, y, atoms)


@st.composite
def classes(draw, X, Y, max_comps=2, max_atoms=2):
    if Y.size == 0:
        return bs.zero(X, Y)
    comps = draw(st.lists(components(X, Y, max_atoms), max_size=max_comps))
    return bs.BispanClass(X, Y, comps, canonical=True)


groups = st.sampled_from(["C2", "C3", "C4", "C2xC2", "S3"]).map(preset)

"""Transitive groupoids as principal group-sets, conjugation and the induced form."""

import numpy as np

from finitegroupoids import (
    conjugation_iso,
    ehresmann_roundtrip,
    groupoid_from_principal_gset,
    principal_gset_from_groupoid,
    to_induced_form,
    validate_principal_gset,
)
from finitegroupoids import corpus
from finitegroupoids.generate import random_principal_gset
from finitegroupoids.theorems import check_gset_iso, reverse_roundtrip

G = corpus.get("S3-on-3")

# Arrows into an object, acted on by its isotropy group and projected by source.
S = principal_gset_from_groupoid(G, 0)
print("star set at 0:", S.size, "points, group of order", S.group.order, "| valid:", validate_principal_gset(S) == [])
print("rebuilt groupoid:", groupoid_from_principal_gset(S))
print("roundtrip iso checks:", ehresmann_roundtrip(G, 0).check() == [])

# The other direction starts from a random principal group-set.
R = random_principal_gset(np.random.default_rng(3))
T, iso = reverse_roundtrip(R)
print("group-set of", R.size, "points over", len(R.base), "base points; roundtrip:", check_gset_iso(R, T, iso) == [])

# Isotropy groups along an arrow are conjugate.
g = int(G.hom(0, 1)[0])
c = conjugation_iso(G, g)
print("conjugation 0 -> 1:", c.f1.tolist())

# A transitive groupoid is isomorphic to one induced from its isotropy group.
iso = to_induced_form(G, 0)
print("induced form:", iso.target, "| iso checks:", iso.check() == [])

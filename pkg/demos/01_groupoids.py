"""Building, checking and comparing finite groupoids."""

import numpy as np

from finitegroupoids import (
    FiniteGroupoid,
    action_groupoid,
    connected_components,
    cyclic_group,
    disjoint_union,
    find_isomorphism,
    is_transitive,
    isotropy_group,
    pair_groupoid,
    symmetric_group,
    validate_groupoid,
)
from finitegroupoids.constructions import natural_permutation_action, regular_action

# The pair groupoid on {a, b, c}: one arrow (x, y) for every ordered pair.
P = pair_groupoid("abc")
print(P, "valid:", validate_groupoid(P) == [])
ab, bc = P.arrow_index[("a", "b")], P.arrow_index[("b", "c")]
print("(a,b) after (b,c) =", P.arrows[P.comp[ab, bc]])

# Corrupt one entry of the composition table; the validator names the axiom and a witness.
comp = np.array(P.comp)
comp[ab, bc] = P.arrow_index[("a", "a")]
bad = FiniteGroupoid(P.objects, P.arrows, P.src, P.tgt, P.identity, comp, P.inv)
for v in validate_groupoid(bad)[:3]:
    print("  violation:", v.axiom, "at", v.witness)

# S3 acting on three points: transitive, each stabilizer has order 2.
S = action_groupoid(symmetric_group(3), *natural_permutation_action(3))
print(S, "transitive:", bool(is_transitive(S)), "isotropy at 0:", isotropy_group(S, 0).order)

# A groupoid with two components is not transitive; the verdict carries a disconnected pair.
U = disjoint_union(pair_groupoid(2), cyclic_group(3))
verdict = is_transitive(U)
print("components:", connected_components(U), "disconnected pair:", verdict.counterexample)

# The regular action of C2 on itself gives a groupoid isomorphic to pair(2).
C2 = cyclic_group(2)
iso = find_isomorphism(action_groupoid(C2, *regular_action(C2)), pair_groupoid(2))
print("regular C2 action ~ pair(2):", iso is not None and iso.check() == [])

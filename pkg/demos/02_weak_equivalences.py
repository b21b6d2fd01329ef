"""Induced groupoids and weak equivalences with checkable certificates."""

from finitegroupoids import (
    check_we_certificate,
    induced_groupoid,
    is_essentially_surjective,
    is_fully_faithful,
    is_weak_equivalence,
)
from finitegroupoids import corpus

G = corpus.get("S3-on-3")

# Inducing along any map into a transitive groupoid gives a weak equivalence.
Gv, phi = induced_groupoid(G, [0, 2])
cert = is_weak_equivalence(phi)
print("induced along [0, 2]:", Gv)
print("  weak equivalence:", cert is not None, "certificate re-check:", check_we_certificate(phi, cert))

# Over two components, a map that misses one of them is fully faithful but not essentially surjective.
H = corpus.get("pair2+pair3")
_, psi = induced_groupoid(H, [0])
es = is_essentially_surjective(psi)
print("pair2+pair3 along [0]: fully faithful", bool(is_fully_faithful(psi)),
      "| essentially surjective", bool(es), "| unreached object", es.counterexample)

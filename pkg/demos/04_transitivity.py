"""Transitivity versus weak equivalences versus principal pull-backs."""

from finitegroupoids import unit_biset, verify_prop_grpd, verify_prop_pb
from finitegroupoids import corpus

for name in ("S3-on-3", "pair2+C2"):
    G = corpus.get(name)
    r = verify_prop_grpd(G, max_x=3)
    print(f"{name}: transitive={r.transitive} all_we={r.all_we} all_principal={r.all_principal} "
          f"maps={len(r.records)} consistent={r.consistent}")
    for rec in r.records[:3]:
        print("   ", rec.varsigma, "WE" if rec.weak_equivalence else "not WE",
              "| right principal" if rec.right_principal else f"| right fails {rec.right_reason}")

# A two-sided principal biset gives two weak equivalences out of its translation groupoid.
res = verify_prop_pb(unit_biset(corpus.get("Q8")))
print("Q8 unit biset:", res.to_dict())

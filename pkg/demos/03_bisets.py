"""Bisets: the unit biset, pull-backs, principality, opposites and tensor products."""

from finitegroupoids import (
    check_left_principal,
    check_principality_witness,
    check_right_principal,
    find_biset_isomorphism,
    induced_groupoid,
    iter_equivariant_maps,
    opposite_biset,
    pullback_biset,
    tensor_biset,
    unit_biset,
    validate_biset,
)
from finitegroupoids import corpus

G = corpus.get("pair2+C2")
U = unit_biset(G)
print("unit biset:", U, "valid:", validate_biset(U) == [])

# Pull the unit biset back along the canonical morphism of an induced groupoid.
_, phi = induced_groupoid(G, [0])
P = pullback_biset(U, phi)
left, right = check_left_principal(P), check_right_principal(P)
print("pull-back along [0]: left principal", bool(left), "| right principal", bool(right), right.reason,
      right.counterexample)
print("  left division map re-checks:", check_principality_witness(P, left.evidence) == [])

# The opposite biset swaps the two sides.
O = opposite_biset(P)
print("opposite: left principal", bool(check_left_principal(O)), "| right principal", bool(check_right_principal(O)))

# The unit biset is a unit for the contracted product.
UU = tensor_biset(U, U)
print("U (x) U ~ U:", find_biset_isomorphism(UU, U) is not None)

# Every morphism between left principal bisets is a bijection.
maps = list(iter_equivariant_maps(P, tensor_biset(U, P)))
print(len(maps), "equivariant maps P -> U (x) P, all bijective:", all(F.is_bijective() for F in maps))

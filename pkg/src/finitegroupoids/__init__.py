"""Finite groupoids, groupoid-sets, principal bisets and weak equivalences.

Groupoids are stored as dense integer tables; ``comp[g, f]`` is "g after f"
and is defined exactly when ``src[g] == tgt[f]``.
"""

from .bisets import (
    ActionDomainError,
    Biset,
    EquivariantMap,
    LeftGroupoidSet,
    PrincipalityWitness,
    RightGroupoidSet,
    check_left_principal,
    check_orbit_bijection,
    check_principality_witness,
    check_right_principal,
    find_biset_isomorphism,
    iter_equivariant_maps,
    opposite_biset,
    orbit_set,
    pullback_biset,
    regular_right_set,
    sigma_morphism,
    tensor_biset,
    theta_morphism,
    translation_groupoid,
    two_sided_translation_groupoid,
    unit_biset,
    validate_biset,
    validate_biset_morphism,
    validate_left_action,
    validate_right_action,
)
from .constructions import (
    action_groupoid,
    cyclic_group,
    dihedral_group,
    direct_product,
    discrete_groupoid,
    disjoint_union,
    empty_groupoid,
    equivalence_relation_groupoid,
    induced_groupoid,
    pair_groupoid,
    quaternion_group,
    symmetric_group,
    trivial_group,
)
from .core import (
    CompositionError,
    FiniteGroup,
    FiniteGroupoid,
    GroupoidError,
    GroupoidMorphism,
    PreconditionError,
    SearchRefused,
    StructuralError,
    Verdict,
    Violation,
    compose,
    connected_components,
    inverse_of,
    is_transitive,
    isotropy_group,
    orbit_of,
    validate_groupoid,
    validate_morphism,
)
from .generate import GenerationRefused, RandomSpec, generate
from .isomorphism import DEFAULT_MAX_ARROWS, GroupoidIso, find_isomorphism
from .morphisms import (
    WeCertificate,
    check_we_certificate,
    factor_through_induced,
    is_essentially_surjective,
    is_fully_faithful,
    is_weak_equivalence,
    isotropy_restriction,
)
from .serialization import DocumentError, deserialize, serialize
from .theorems import (
    PrincipalGroupSet,
    PropGrpdReport,
    conjugation_iso,
    ehresmann_roundtrip,
    groupoid_from_principal_gset,
    principal_gset_from_groupoid,
    to_induced_form,
    validate_principal_gset,
    verify_prop_grpd,
    verify_prop_pb,
)

__version__ = "0.1.0"

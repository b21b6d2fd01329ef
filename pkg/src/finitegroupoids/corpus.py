"""A named, curated set of small groupoids used by the test and demo suites.

Members are chosen to cover transitive groupoids, groupoids with several
components, and groupoids whose isotropy groups are not trivial, while
keeping every two-sided translation groupoid built from them small enough
for exhaustive checks.  A few members are deliberately isomorphic to others
(for instance the regular action of a cyclic group of order 4 and the pair
groupoid on four points) so that different presentations get exercised.
"""

from __future__ import annotations

from functools import lru_cache

from .constructions import (
    action_groupoid,
    coset_action,
    cyclic_group,
    dihedral_group,
    direct_product,
    discrete_groupoid,
    disjoint_union,
    equivalence_closure,
    equivalence_relation_groupoid,
    induced_groupoid,
    kernel_pair_groupoid,
    natural_permutation_action,
    pair_groupoid,
    quaternion_group,
    regular_action,
    symmetric_group,
    trivial_action,
)
from .core import FiniteGroupoid


def _s3_on_four():
    S3 = symmetric_group(3)
    return action_groupoid(S3, range(4), lambda x, p: x if x == 3 else p.index(x))


def _s3_two_orbits():
    S3 = symmetric_group(3)
    c2 = [S3.arrow_index[(1, 0, 2)], S3.neutral]
    c3 = [S3.arrow_index[(1, 2, 0)], S3.arrow_index[(2, 0, 1)], S3.neutral]
    X2, a2 = coset_action(S3, c2)
    X3, a3 = coset_action(S3, c3)
    X = [(0, c) for c in X2] + [(1, c) for c in X3]
    return action_groupoid(S3, X, lambda x, g: (x[0], (a2 if x[0] == 0 else a3)(x[1], g)))


def _s3_on_c3_cosets():
    S3 = symmetric_group(3)
    c3 = [S3.arrow_index[(1, 2, 0)], S3.arrow_index[(2, 0, 1)], S3.neutral]
    return action_groupoid(S3, *coset_action(S3, c3))


def _c4_on_two_plus_fixed():
    C4 = cyclic_group(4)
    return action_groupoid(C4, range(3), lambda x, g: x if x == 2 else (x + g) % 2)


_BUILDERS = {
    # transitive
    "pair1": lambda: pair_groupoid(1),
    "pair2": lambda: pair_groupoid(2),
    "pair3": lambda: pair_groupoid(3),
    "pair4": lambda: pair_groupoid(4),
    "C2": lambda: cyclic_group(2),
    "C3": lambda: cyclic_group(3),
    "C2xC2": lambda: direct_product(cyclic_group(2), cyclic_group(2)),
    "S3": lambda: symmetric_group(3),
    "D4": lambda: dihedral_group(4),
    "Q8": quaternion_group,
    "S3-on-3": lambda: action_groupoid(symmetric_group(3), *natural_permutation_action(3)),
    "S3-on-C3-cosets": _s3_on_c3_cosets,
    "C4-regular": lambda: action_groupoid(cyclic_group(4), *regular_action(cyclic_group(4))),
    "C2-induced-2": lambda: induced_groupoid(cyclic_group(2), [0, 0])[0],
    "C3-induced-2": lambda: induced_groupoid(cyclic_group(3), [0, 0])[0],
    "C2-induced-3": lambda: induced_groupoid(cyclic_group(2), [0, 0, 0])[0],
    "C4": lambda: cyclic_group(4),
    "C5": lambda: cyclic_group(5),
    # several components
    "discrete2": lambda: discrete_groupoid(2),
    "discrete3": lambda: discrete_groupoid(3),
    "pair2+pair3": lambda: disjoint_union(pair_groupoid(2), pair_groupoid(3)),
    "C2+C3": lambda: disjoint_union(cyclic_group(2), cyclic_group(3)),
    "pair2+C2": lambda: disjoint_union(pair_groupoid(2), cyclic_group(2)),
    "S3-on-4": _s3_on_four,
    "C4-on-2+fixed": _c4_on_two_plus_fixed,
    "equivalence-2-1-2": lambda: equivalence_relation_groupoid(
        range(5), equivalence_closure(range(5), [(0, 1), (3, 4)])),
    "kernel-pair-mod2": lambda: kernel_pair_groupoid(range(5), lambda x: x % 2),
    "C2-trivial-on-2": lambda: action_groupoid(cyclic_group(2), *trivial_action(range(2))),
    "S3-two-orbits": _s3_two_orbits,
    "Q8+pair2": lambda: disjoint_union(quaternion_group(), pair_groupoid(2)),
    "S3+C2xC2": lambda: disjoint_union(symmetric_group(3), direct_product(cyclic_group(2), cyclic_group(2))),
    "pair2+C2-induced": lambda: induced_groupoid(disjoint_union(pair_groupoid(2), cyclic_group(2)), [0, 0, 2])[0],
    "C2-induced-2+pair1": lambda: disjoint_union(induced_groupoid(cyclic_group(2), [0, 0])[0], pair_groupoid(1)),
    "C3+discrete1": lambda: disjoint_union(cyclic_group(3), discrete_groupoid(1)),
    "pair3+C2": lambda: disjoint_union(pair_groupoid(3), cyclic_group(2)),
    "C2-induced-2+C3": lambda: disjoint_union(induced_groupoid(cyclic_group(2), [0, 0])[0], cyclic_group(3)),
    "discrete1+pair2+C2": lambda: disjoint_union(disjoint_union(discrete_groupoid(1), pair_groupoid(2)), cyclic_group(2)),
}


def names() -> list[str]:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get(name: str) -> FiniteGroupoid:
    return _BUILDERS[name]()


def corpus() -> list[tuple[str, FiniteGroupoid]]:
    """All curated groupoids as ``(name, groupoid)`` pairs, in a fixed order."""
    return [(n, get(n)) for n in _BUILDERS]

import itertools

import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from finitegroupoids import (
    SearchRefused,
    action_groupoid,
    cyclic_group,
    dihedral_group,
    direct_product,
    discrete_groupoid,
    disjoint_union,
    find_isomorphism,
    induced_groupoid,
    pair_groupoid,
    quaternion_group,
    symmetric_group,
)
from finitegroupoids import corpus
from finitegroupoids.constructions import regular_action, trivial_action
from finitegroupoids.core import is_transitive, relabel
from finitegroupoids.generate import RandomSpec, generate
from finitegroupoids.isomorphism import (
    canonical_form,
    deduplicate,
    find_group_isomorphism,
    iter_group_homomorphisms,
)
from strategies import groupoids


def small_groupoids():
    C2 = cyclic_group(2)
    named = [
        pair_groupoid(1), pair_groupoid(2), discrete_groupoid(2), cyclic_group(2),
        cyclic_group(3), cyclic_group(4), direct_product(C2, C2), cyclic_group(5),
        disjoint_union(pair_groupoid(2), pair_groupoid(1)),
        disjoint_union(C2, pair_groupoid(1)),
        action_groupoid(C2, *regular_action(C2)),
        action_groupoid(C2, *trivial_action("pq")),
        induced_groupoid(C2, [0, 0])[0],
        disjoint_union(C2, C2),
        discrete_groupoid(4),
        disjoint_union(cyclic_group(3), discrete_groupoid(2)),
    ]
    drawn = [generate(RandomSpec(seed, max_objects=4, max_arrows=8, max_group_order=4)) for seed in range(12)]
    return named + drawn


def test_identity_iso():
    G = corpus.get("S3-on-3")
    iso = find_isomorphism(G, G)
    assert iso is not None and iso.check() == []


def test_pair2_vs_regular_action():
    C2 = cyclic_group(2)
    iso = find_isomorphism(pair_groupoid(2), action_groupoid(C2, *regular_action(C2)))
    assert iso is not None and iso.check() == []


def test_pair2_vs_group_has_none():
    assert find_isomorphism(pair_groupoid(2), cyclic_group(2)) is None


def test_complete_against_brute_force():
    Gs = small_groupoids()
    for G, H in itertools.combinations_with_replacement(Gs, 2):
        iso = find_isomorphism(G, H)
        assert (iso is not None) == oracles.isomorphic(G, H)
        if iso is not None:
            assert iso.check() == []


@given(groupoids(max_objects=4, max_arrows=8))
@settings(max_examples=40, deadline=None)
def test_relabelled_copy_found(G):
    rng = np.random.default_rng(len(G.arrows))
    H = relabel(G, rng.permutation(G.n_objects), rng.permutation(G.n_arrows))
    assert oracles.isomorphic(G, H)
    iso = find_isomorphism(G, H)
    assert iso is not None and iso.check() == []


def test_refusal_above_bound():
    G = pair_groupoid(5)
    with pytest.raises(SearchRefused):
        find_isomorphism(G, G, max_arrows=10)


def test_group_isomorphism_against_oracle():
    C2 = cyclic_group(2)
    groups = [cyclic_group(4), direct_product(C2, C2), cyclic_group(6), symmetric_group(3),
              dihedral_group(4), quaternion_group(), cyclic_group(8)]
    for A, B in itertools.combinations_with_replacement(groups, 2):
        assert (find_group_isomorphism(A, B) is not None) == oracles.groups_isomorphic(A, B)


def test_d4_and_q8_not_isomorphic():
    assert find_group_isomorphism(dihedral_group(4), quaternion_group()) is None
    assert len(list(iter_group_homomorphisms(dihedral_group(4), dihedral_group(4)))) == 36


def test_group_homomorphisms_are_homomorphisms():
    A, B = symmetric_group(3), cyclic_group(2)
    homs = list(iter_group_homomorphisms(A, B))
    assert len(homs) == 2
    for phi in homs:
        assert np.array_equal(phi[A.comp], B.comp[phi[:, None], phi[None, :]])


def test_canonical_form_is_invariant():
    G = corpus.get("S3-two-orbits")
    rng = np.random.default_rng(3)
    H = relabel(G, rng.permutation(G.n_objects), rng.permutation(G.n_arrows))
    assert canonical_form(G) == canonical_form(H)
    assert canonical_form(cyclic_group(4)) != canonical_form(direct_product(cyclic_group(2), cyclic_group(2)))


def test_canonical_form_refuses_many_objects():
    with pytest.raises(SearchRefused):
        canonical_form(discrete_groupoid(8))


def test_corpus_has_at_least_thirty_distinct_classes():
    Gs = [G for _, G in corpus.corpus()]
    keep = deduplicate(Gs)
    assert len(keep) >= 30
    distinct = [Gs[i] for i in keep]
    assert sum(bool(is_transitive(G)) for G in distinct) >= 10
    assert sum(not is_transitive(G) for G in distinct) >= 10
    assert sum(any(G.hom(x, x).size > 1 for x in range(G.n_objects)) for G in distinct) >= 5

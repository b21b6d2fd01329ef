import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from finitegroupoids import (
    GroupoidMorphism,
    action_groupoid,
    check_we_certificate,
    cyclic_group,
    discrete_groupoid,
    disjoint_union,
    factor_through_induced,
    induced_groupoid,
    is_essentially_surjective,
    is_fully_faithful,
    is_weak_equivalence,
    isotropy_restriction,
    pair_groupoid,
    symmetric_group,
    trivial_group,
    validate_morphism,
)
from finitegroupoids import corpus
from finitegroupoids.constructions import natural_permutation_action
from finitegroupoids.core import compose_morphisms, identity_morphism, is_transitive
from finitegroupoids.isomorphism import find_isomorphism
from finitegroupoids.morphisms import hom_kernel, is_bijective, isotropy_inclusion, iter_morphisms
from strategies import groupoid_with_map, groupoids


def constant(H, G, x=0):
    return GroupoidMorphism(H, G, [x] * H.n_objects, [int(G.identity[x])] * H.n_arrows)


# -- validate_morphism ---------------------------------------------------------


def test_identity_is_functor():
    G = corpus.get("S3-two-orbits")
    assert validate_morphism(identity_morphism(G)) == []


def test_canonical_induced_morphism_is_functor():
    G = corpus.get("C4-on-2+fixed")
    _, phi = induced_groupoid(G, [0, 2, 1, 0])
    assert validate_morphism(phi) == []
    assert oracles.is_functor(phi.source, phi.target, phi.f0, phi.f1)


def test_broken_inverse_compatibility_is_reported():
    G = action_groupoid(symmetric_group(3), *natural_permutation_action(3))
    f1 = np.arange(G.n_arrows)
    loops = G.hom(0, 0)
    a = int(loops[loops != G.identity[0]][0])
    f1[a] = int(G.identity[0])
    m = GroupoidMorphism(G, G, np.arange(3), f1)
    viol = validate_morphism(m)
    assert viol
    assert {"preserves-inverse", "preserves-composition"} & {v.axiom for v in viol}
    assert not oracles.is_functor(G, G, m.f0, m.f1)


@given(groupoid_with_map())
@settings(max_examples=40, deadline=None)
def test_induced_morphism_always_functor(data):
    G, vs = data
    _, phi = induced_groupoid(G, vs)
    assert validate_morphism(phi) == []


# -- WE-1 ----------------------------------------------------------------------


def test_essential_surjectivity_examples():
    G = corpus.get("S3-on-3")
    assert is_essentially_surjective(identity_morphism(G))
    assert is_essentially_surjective(isotropy_inclusion(G, 1))
    two = disjoint_union(pair_groupoid(2), pair_groupoid(2))
    point = GroupoidMorphism(trivial_group(), two, [0], [int(two.identity[0])])
    v = is_essentially_surjective(point)
    assert not v and v.counterexample == 2


@given(groupoid_with_map(max_objects=4, max_arrows=30))
@settings(max_examples=60, deadline=None)
def test_both_formulations_agree(data):
    G, vs = data
    _, phi = induced_groupoid(G, vs)
    target = is_essentially_surjective(phi, "target")
    source = is_essentially_surjective(phi, "source")
    assert bool(target) == bool(source) == oracles.essentially_surjective(phi.source, G, phi.f0)


# -- WE-2 ----------------------------------------------------------------------


def test_identity_fully_faithful_with_canonical_gamma():
    G = corpus.get("C2-induced-2")
    v = is_fully_faithful(identity_morphism(G))
    assert v
    gamma, _ = v.evidence
    assert list(gamma) == [(int(G.src[h]), h, int(G.tgt[h])) for h in range(G.n_arrows)]


def test_induced_over_transitive_is_fully_faithful():
    G = corpus.get("S3-on-3")
    _, phi = induced_groupoid(G, [0, 2])
    assert is_fully_faithful(phi)


def test_collapsing_pair_groupoid_is_a_weak_equivalence():
    # every hom-set of pair(2) has one arrow, so the collapse is bijective on hom-sets
    P = pair_groupoid(2)
    m = constant(P, trivial_group())
    assert is_fully_faithful(m)
    cert = is_weak_equivalence(m)
    assert cert is not None and check_we_certificate(m, cert) == []
    assert oracles.weak_equivalence(P, trivial_group(), m.f0, m.f1)


def test_collapsing_group_is_not_fully_faithful():
    m = constant(cyclic_group(2), trivial_group())
    v = is_fully_faithful(m)
    assert not v
    assert not oracles.fully_faithful(m.source, m.target, m.f0, m.f1)


def test_discrete_into_point_misses_arrows():
    D = discrete_groupoid(2)
    P = pair_groupoid(2)
    m = GroupoidMorphism(D, P, [0, 1], [int(P.identity[0]), int(P.identity[1])])
    assert is_essentially_surjective(m)
    assert not is_fully_faithful(m)


def test_weak_equivalence_examples():
    G = corpus.get("S3-on-3")
    cert = is_weak_equivalence(identity_morphism(G))
    assert cert is not None and check_we_certificate(identity_morphism(G), cert) == []
    inc = isotropy_inclusion(G, 0)
    cert = is_weak_equivalence(inc)
    assert cert is not None and check_we_certificate(inc, cert) == []
    two = corpus.get("pair2+pair3")
    assert is_weak_equivalence(isotropy_inclusion(two, 0)) is None


@given(groupoid_with_map(max_objects=4, max_arrows=30))
@settings(max_examples=60, deadline=None)
def test_we_is_conjunction_and_matches_oracle(data):
    G, vs = data
    Gv, phi = induced_groupoid(G, vs)
    cert = is_weak_equivalence(phi)
    both = bool(is_essentially_surjective(phi)) and bool(is_fully_faithful(phi))
    assert (cert is not None) == both == oracles.weak_equivalence(Gv, G, phi.f0, phi.f1)
    if cert is not None:
        assert check_we_certificate(phi, cert) == []


def test_tampered_certificate_is_rejected():
    G = corpus.get("S3-on-3")
    m = isotropy_inclusion(G, 0)
    cert = is_weak_equivalence(m)
    gamma = list(cert.gamma)
    a, g, b = gamma[1]
    gamma[1] = (a, int(m.f1[0]), b)
    bad = type(cert)(cert.we1, tuple(gamma), cert.gamma_inv)
    assert check_we_certificate(m, bad)
    we1 = dict(cert.we1)
    we1.pop(2)
    assert check_we_certificate(m, type(cert)(we1, cert.gamma, cert.gamma_inv))


@given(groupoids(max_objects=3, max_arrows=20), st.data())
@settings(max_examples=30, deadline=None)
def test_weak_equivalences_compose(G, data):
    if not is_transitive(G) or G.n_objects == 0:
        return
    k1 = data.draw(st.integers(1, 3))
    vs1 = data.draw(st.lists(st.integers(0, G.n_objects - 1), min_size=k1, max_size=k1))
    G1, phi1 = induced_groupoid(G, vs1)
    k2 = data.draw(st.integers(1, 3))
    vs2 = data.draw(st.lists(st.integers(0, G1.n_objects - 1), min_size=k2, max_size=k2))
    _, phi2 = induced_groupoid(G1, vs2)
    both = compose_morphisms(phi1, phi2)
    cert = is_weak_equivalence(both)
    assert cert is not None and check_we_certificate(both, cert) == []


# -- factorization and isotropy --------------------------------------------------


def test_factor_identity_gives_iso():
    G = corpus.get("C3+discrete1")
    first, second = factor_through_induced(identity_morphism(G))
    assert is_bijective(first) and validate_morphism(first) == []
    assert find_isomorphism(first.source, first.target) is not None


def test_factor_canonical_morphism_first_factor_is_iso():
    G = corpus.get("S3-on-3")
    _, phi = induced_groupoid(G, [1, 1, 0])
    first, second = factor_through_induced(phi)
    assert is_bijective(first)
    assert compose_morphisms(second, first).same_tables(phi)


def test_factorization_composite_is_exact():
    for name in ("pair2+C2", "C4-on-2+fixed", "S3-two-orbits"):
        G = corpus.get(name)
        for m in iter_morphisms(corpus.get("C2-induced-2"), G):
            first, second = factor_through_induced(m)
            assert np.array_equal(first.f0, np.arange(m.source.n_objects))
            both = compose_morphisms(second, first)
            assert np.array_equal(both.f0, m.f0) and np.array_equal(both.f1, m.f1)


def test_isotropy_restriction_examples():
    G = corpus.get("S3-on-3")
    r = isotropy_restriction(identity_morphism(G), 0)
    assert np.array_equal(r.f1, np.arange(2))
    _, phi = induced_groupoid(G, [0, 1])
    for u in range(2):
        r = isotropy_restriction(phi, u)
        assert validate_morphism(r) == [] and is_bijective(r)
    m = constant(cyclic_group(2), trivial_group())
    r = isotropy_restriction(m, 0)
    assert hom_kernel(r) == [0, 1]


def test_iter_morphisms_are_functors():
    H, G = corpus.get("C2-induced-2"), corpus.get("C4-on-2+fixed")
    ms = list(iter_morphisms(H, G))
    assert ms
    for m in ms:
        assert oracles.is_functor(H, G, m.f0, m.f1)
    assert len({(tuple(m.f0), tuple(m.f1)) for m in ms}) == len(ms)

import json

import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from finitegroupoids import (
    PreconditionError,
    PrincipalGroupSet,
    SearchRefused,
    action_groupoid,
    conjugation_iso,
    cyclic_group,
    discrete_groupoid,
    ehresmann_roundtrip,
    find_isomorphism,
    groupoid_from_principal_gset,
    induced_groupoid,
    is_transitive,
    pair_groupoid,
    principal_gset_from_groupoid,
    pullback_biset,
    symmetric_group,
    to_induced_form,
    trivial_group,
    two_sided_translation_groupoid,
    unit_biset,
    validate_morphism,
    validate_principal_gset,
    verify_prop_grpd,
    verify_prop_pb,
)
from finitegroupoids import corpus
from finitegroupoids.constructions import natural_permutation_action, regular_action, trivial_action
from finitegroupoids.core import isotropy_arrows
from finitegroupoids.generate import random_principal_gset
from finitegroupoids.morphisms import is_bijective
from finitegroupoids.theorems import (
    base_family,
    check_gset_iso,
    find_gset_isomorphism,
    find_principal_biset,
    orbit_lemma_holds,
    reverse_roundtrip,
)
from strategies import groupoids


def regular_gset(G):
    return PrincipalGroupSet(G, G.arrows, ["*"], [0] * G.order, G.comp)


# -- transitivity characterization ---------------------------------------------


def test_pair3_is_consistent():
    r = verify_prop_grpd(pair_groupoid(3), max_x=2)
    assert r.consistent and r.transitive and r.all_we and r.all_principal
    assert len(r.records) == 3 + 9


def test_discrete2_is_consistent_and_refuted():
    r = verify_prop_grpd(discrete_groupoid(2), max_x=1)
    assert r.consistent and not r.transitive
    assert not r.all_we and not r.all_principal
    assert any(not rec.weak_equivalence for rec in r.records)
    assert any(not rec.right_principal for rec in r.records)
    assert all(rec.left_principal for rec in r.records)


def test_empty_domain_disallowed():
    with pytest.raises(PreconditionError):
        verify_prop_grpd(pair_groupoid(2), max_x=0)


def test_size_refusal():
    with pytest.raises(SearchRefused):
        verify_prop_grpd(corpus.get("Q8"), max_x=3, max_arrows=50)


@given(groupoids(max_objects=3, max_arrows=12))
@settings(max_examples=25, deadline=None)
def test_records_match_oracle(G):
    r = verify_prop_grpd(G, max_x=2)
    assert r.consistent
    assert r.transitive == oracles.is_transitive(G)
    U = unit_biset(G)
    for rec in r.records:
        Gv, phi = induced_groupoid(G, rec.varsigma)
        P = pullback_biset(U, phi)
        assert rec.weak_equivalence == oracles.weak_equivalence(Gv, G, phi.f0, phi.f1)
        assert rec.left_principal == oracles.left_principal(P)
        assert rec.right_principal == oracles.right_principal(P)


def test_report_independent_of_workers():
    G = corpus.get("C4-on-2+fixed")
    a = json.dumps(verify_prop_grpd(G, max_x=2, workers=1).to_dict(), sort_keys=True)
    b = json.dumps(verify_prop_grpd(G, max_x=2, workers=4).to_dict(), sort_keys=True)
    assert a == b


# -- principal bisets give weak equivalences -------------------------------------


def expected_sigma_gamma(B, T):
    out = []
    for h, x, g in T.arrows:
        xg = oracles.right_act(B, x, int(B.right.inv[g]))
        out.append((x, g, oracles.left_act(B, h, xg)))
    return out


@pytest.mark.parametrize("name", ["pair3", "S3-on-3", "C2-induced-2", "Q8", "C3"])
def test_unit_biset_certificates(name):
    B = unit_biset(corpus.get(name))
    res = verify_prop_pb(B)
    assert res.ok
    T = two_sided_translation_groupoid(B)
    assert list(res.sigma.gamma) == expected_sigma_gamma(B, T)


def test_pullback_over_transitive_certificates():
    G = corpus.get("S3-on-3")
    for vs in ([0], [1, 2], [0, 0, 2]):
        _, phi = induced_groupoid(G, vs)
        P = pullback_biset(unit_biset(G), phi)
        res = verify_prop_pb(P)
        assert res.ok, res.to_dict()
        assert orbit_lemma_holds(P)


def test_non_principal_biset_is_refused():
    G = corpus.get("pair2+C2")
    _, phi = induced_groupoid(G, [0])
    with pytest.raises(PreconditionError, match="right principal"):
        verify_prop_pb(pullback_biset(unit_biset(G), phi))


def test_find_principal_biset():
    assert find_principal_biset(pair_groupoid(2), trivial_group()) is not None
    assert find_principal_biset(discrete_groupoid(2), trivial_group()) is None
    B = find_principal_biset(corpus.get("C2-induced-2"), cyclic_group(2))
    assert B is not None and verify_prop_pb(B).ok


# -- conjugation -----------------------------------------------------------------


def test_conjugation_by_identity():
    G = corpus.get("S3-two-orbits")
    for x in range(G.n_objects):
        iso = conjugation_iso(G, int(G.identity[x]))
        assert np.array_equal(iso.f1, np.arange(iso.source.n_arrows))


def test_conjugation_in_pair_groupoid():
    G = pair_groupoid(3)
    iso = conjugation_iso(G, G.arrow_index[(0, 1)])
    assert iso.source.order == iso.target.order == 1


def test_conjugation_between_stabilizers():
    G = action_groupoid(symmetric_group(3), *natural_permutation_action(3))
    g = next(a for a in range(G.n_arrows) if G.src[a] == 0 and G.tgt[a] == 1)
    iso = conjugation_iso(G, g)
    assert iso.check() == []
    assert iso.source.order == iso.target.order == 2
    la, lb = oracles.isotropy(G, 0), oracles.isotropy(G, 1)
    for i, h in enumerate(la):
        conj = oracles.comp(G, oracles.comp(G, g, h), int(G.inv[g]))
        assert lb[iso.f1[i]] == conj


def test_conjugation_is_functorial():
    G = corpus.get("S3-on-C3-cosets")
    for g1 in range(G.n_arrows):
        for g2 in G.arrows_from(int(G.tgt[g1])):
            a, b = conjugation_iso(G, g1), conjugation_iso(G, int(g2))
            both = conjugation_iso(G, int(G.comp[g2, g1]))
            assert np.array_equal(b.f1[a.f1], both.f1)


# -- induced form ----------------------------------------------------------------


def check_induced_form(G, x):
    iso = to_induced_form(G, x)
    assert iso.check() == []
    assert np.array_equal(iso.f0, np.arange(G.n_objects))
    back = iso.inverse()
    assert np.array_equal(back.f1[iso.f1], np.arange(G.n_arrows))
    return iso


def test_induced_form_of_pair_groupoid():
    iso = check_induced_form(pair_groupoid(3), 1)
    assert all(e == 0 for _, e, _ in iso.target.arrows)


def test_induced_form_of_group():
    C3 = cyclic_group(3)
    iso = check_induced_form(C3, 0)
    assert iso.target.n_arrows == 3


def test_induced_form_of_swap_groupoid():
    C2 = cyclic_group(2)
    G = action_groupoid(C2, *regular_action(C2))
    iso = check_induced_form(G, 0)
    assert iso.target.n_arrows == 4


def test_induced_form_everywhere_on_transitive_corpus():
    for name in ("S3-on-3", "C2-induced-3", "S3-on-C3-cosets", "C4-regular"):
        G = corpus.get(name)
        for x in range(G.n_objects):
            check_induced_form(G, x)
            f = base_family(G, x)
            assert f[x] == G.identity[x]
            for y in range(G.n_objects):
                assert G.src[f[y]] == y and G.tgt[f[y]] == x
                assert f[y] == min(oracles.hom(G, y, x))


def test_induced_form_refuses_non_transitive():
    with pytest.raises(PreconditionError) as err:
        to_induced_form(discrete_groupoid(2), 0)
    assert err.value.witness is not None


# -- principal group-sets ----------------------------------------------------------


def test_regular_gset_validates():
    assert validate_principal_gset(regular_gset(symmetric_group(3))) == []


def test_non_free_action_fails_p3():
    C2 = cyclic_group(2)
    S = PrincipalGroupSet(C2, ["p"], ["*"], [0], [[0], [0]])
    assert {v.axiom for v in validate_principal_gset(S)} == {"P'3"}


def test_non_surjective_projection_fails_p1():
    C2 = cyclic_group(2)
    S = PrincipalGroupSet(C2, C2.arrows, ["*", "unused"], [0, 0], C2.comp)
    assert {v.axiom for v in validate_principal_gset(S)} == {"P'1"}


def test_non_invariant_projection_fails_p2():
    C2 = cyclic_group(2)
    S = PrincipalGroupSet(C2, C2.arrows, ["a", "b"], [0, 1], C2.comp)
    kinds = {v.axiom for v in validate_principal_gset(S)}
    assert "P'2" in kinds and "formulations-disagree" not in kinds


def test_groupoid_from_regular_gset_is_the_group():
    for G in (symmetric_group(3), cyclic_group(4), corpus.get("Q8")):
        H = groupoid_from_principal_gset(regular_gset(G))
        assert H.n_objects == 1 and find_isomorphism(H, G) is not None


def test_groupoid_from_trivial_group_is_pair_groupoid():
    T = trivial_group()
    X = ["a", "b", "c"]
    S = PrincipalGroupSet(T, X, X, [0, 1, 2], [[0, 1, 2]])
    assert validate_principal_gset(S) == []
    assert find_isomorphism(groupoid_from_principal_gset(S), pair_groupoid(X)) is not None


def test_random_gsets_give_transitive_groupoids():
    rng = np.random.default_rng(11)
    for _ in range(10):
        S = random_principal_gset(rng)
        assert validate_principal_gset(S) == []
        G = groupoid_from_principal_gset(S)
        assert is_transitive(G) and G.n_objects == len(S.base)
        assert G.n_arrows * S.group.order == S.size * S.size


def test_star_set_of_pair_groupoid():
    G = pair_groupoid(3)
    S = principal_gset_from_groupoid(G, 0)
    assert S.group.order == 1 and S.size == 3
    assert sorted(S.pi.tolist()) == [0, 1, 2]
    assert validate_principal_gset(S) == []


def test_star_set_of_group_is_regular():
    G = symmetric_group(3)
    S = principal_gset_from_groupoid(G, 0)
    assert validate_principal_gset(S) == []
    assert find_gset_isomorphism(S, regular_gset(G)) is not None


def test_star_set_of_s3_action():
    G = action_groupoid(symmetric_group(3), *natural_permutation_action(3))
    S = principal_gset_from_groupoid(G, 0)
    assert S.size == 6 == sum(1 for g in range(G.n_arrows) if G.tgt[g] == 0)
    assert validate_principal_gset(S) == []


def test_ehresmann_examples():
    for G in (pair_groupoid(4), cyclic_group(5), action_groupoid(symmetric_group(3), *natural_permutation_action(3))):
        for x in range(G.n_objects):
            iso = ehresmann_roundtrip(G, x)
            assert iso.check() == [] and is_bijective(iso)


def test_ehresmann_refuses_non_transitive():
    C2 = cyclic_group(2)
    with pytest.raises(PreconditionError):
        ehresmann_roundtrip(action_groupoid(C2, *trivial_action("pq")), 0)


def test_reverse_roundtrip():
    rng = np.random.default_rng(5)
    for _ in range(10):
        S = random_principal_gset(rng, max_carrier=16)
        T, iso = reverse_roundtrip(S)
        assert iso is not None and check_gset_iso(S, T, iso) == []
        T2, iso2 = reverse_roundtrip(S, explicit=True)
        assert iso2 is not None and check_gset_iso(S, T2, iso2) == []


def test_different_base_objects_give_isomorphic_outputs():
    G = corpus.get("S3-on-C3-cosets")
    sets = [principal_gset_from_groupoid(G, x) for x in range(G.n_objects)]
    built = [groupoid_from_principal_gset(S) for S in sets]
    for S, H in zip(sets[1:], built[1:]):
        iso = find_gset_isomorphism(sets[0], S)
        assert iso is not None and check_gset_iso(sets[0], S, iso) == []
        assert find_isomorphism(built[0], H) is not None
        assert isotropy_arrows(H, 0).size == isotropy_arrows(G, 0).size


def test_conjugation_maps_are_functors():
    G = corpus.get("S3-two-orbits")
    for g in range(G.n_arrows):
        assert validate_morphism(conjugation_iso(G, g)) == []

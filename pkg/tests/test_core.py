import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from finitegroupoids import (
    CompositionError,
    FiniteGroupoid,
    PreconditionError,
    StructuralError,
    action_groupoid,
    compose,
    connected_components,
    cyclic_group,
    discrete_groupoid,
    disjoint_union,
    empty_groupoid,
    equivalence_relation_groupoid,
    find_isomorphism,
    induced_groupoid,
    inverse_of,
    is_transitive,
    isotropy_group,
    orbit_of,
    pair_groupoid,
    symmetric_group,
    validate_groupoid,
)
from finitegroupoids.constructions import (
    equivalence_closure,
    natural_permutation_action,
    regular_action,
    trivial_action,
)
from finitegroupoids.core import confirms_violation, orbit_of_by_sources, relabel
from strategies import corpus_groupoids, groupoids


def ids(G, *keys):
    return [G.arrow_index[k] for k in keys]


def mutated(G, name, index, value):
    tables = {k: np.array(getattr(G, k)) for k in ("src", "tgt", "identity", "comp", "inv")}
    tables[name][index] = value
    return FiniteGroupoid(G.objects, G.arrows, **tables)


# -- validate_groupoid ---------------------------------------------------------


def test_pair_groupoid_validates():
    G = pair_groupoid("abc")
    assert validate_groupoid(G) == []
    assert oracles.is_groupoid(G)


def test_redirected_composite_is_caught_with_witness():
    G = pair_groupoid("abc")
    ab, bc, aa = ids(G, ("a", "b"), ("b", "c"), ("a", "a"))
    bad = mutated(G, "comp", (ab, bc), aa)
    viol = validate_groupoid(bad)
    assert not oracles.is_groupoid(bad)
    assert viol
    assert {v.axiom for v in viol} >= {"composition-typing"}
    assert all(confirms_violation(bad, v) for v in viol)
    assert any(v.witness == (ab, bc, aa) for v in viol if v.axiom == "composition-typing")


def test_empty_groupoid_validates():
    E = empty_groupoid()
    assert validate_groupoid(E) == []
    assert E.n_objects == 0 and E.n_arrows == 0


def test_out_of_range_entry_is_structural_error():
    G = pair_groupoid(2)
    with pytest.raises(StructuralError):
        mutated(G, "inv", 0, 9)
    with pytest.raises(StructuralError):
        mutated(G, "src", 1, 5)


def test_wrong_inverse_reports_inverse_axioms():
    G = pair_groupoid(2)
    bad = mutated(G, "inv", 1, 0)
    viol = validate_groupoid(bad)
    assert {v.axiom for v in viol} <= {"inverse-typing", "inverse-law"}
    assert viol


@pytest.mark.parametrize("name", ["src", "tgt", "identity", "inv", "comp"])
def test_every_table_mutation_detected(name):
    G = action_groupoid(symmetric_group(3), *natural_permutation_action(3))
    rng = np.random.default_rng(7)
    for _ in range(10):
        table = getattr(G, name)
        idx = tuple(int(rng.integers(s)) for s in table.shape)
        hi = G.n_objects if name in ("src", "tgt") else G.n_arrows
        new = (int(table[idx]) + 1 + int(rng.integers(hi - 1))) % hi
        bad = mutated(G, name, idx, new)
        viol = validate_groupoid(bad)
        assert viol and all(confirms_violation(bad, v) for v in viol)
        assert not oracles.is_groupoid(bad)


@given(groupoids(max_objects=3, max_arrows=16))
@settings(max_examples=40, deadline=None)
def test_validator_agrees_with_oracle(G):
    assert validate_groupoid(G) == []
    assert oracles.is_groupoid(G)


# -- compose and inverse ------------------------------------------------------


def test_pair_composition():
    G = pair_groupoid("abc")
    ab, bc, ac = ids(G, ("a", "b"), ("b", "c"), ("a", "c"))
    assert compose(G, ab, bc) == ac


def test_compose_identity_is_neutral():
    G = pair_groupoid("abc")
    for f in range(G.n_arrows):
        assert compose(G, int(G.identity[G.tgt[f]]), f) == f


def test_compose_not_composable():
    G = pair_groupoid("abc")
    ab, ca = ids(G, ("a", "b"), ("c", "a"))
    with pytest.raises(CompositionError, match="not composable"):
        compose(G, ab, ca)


def test_action_groupoid_composition():
    C2 = cyclic_group(2)
    G = action_groupoid(C2, *regular_action(C2))
    a, b, c = ids(G, (0, 1), (1, 1), (0, 0))
    assert compose(G, a, b) == c


def test_inverses():
    G = pair_groupoid("abc")
    ab, ba = ids(G, ("a", "b"), ("b", "a"))
    assert inverse_of(G, ab) == ba
    for x in range(3):
        assert inverse_of(G, int(G.identity[x])) == G.identity[x]
    S3 = symmetric_group(3)
    A = action_groupoid(S3, *natural_permutation_action(3))
    for x, p in A.arrows:
        pinv = S3.arrows[S3.inv[S3.arrow_index[p]]]
        xp = p.index(x)
        assert A.arrows[inverse_of(A, A.arrow_index[(x, p)])] == (xp, pinv)


# -- isotropy, orbits, components ---------------------------------------------


def test_isotropy_examples():
    P = pair_groupoid("abc")
    assert all(isotropy_group(P, x).order == 1 for x in range(3))
    T = action_groupoid(cyclic_group(2), *trivial_action("pq"))
    assert isotropy_group(T, 0).order == 2
    S = action_groupoid(symmetric_group(3), *natural_permutation_action(3))
    assert isotropy_group(S, 0).order == len(oracles.isotropy(S, 0)) == 2


def test_orbit_examples():
    assert orbit_of(pair_groupoid("abc"), 0) == {0, 1, 2}
    assert orbit_of(discrete_groupoid(3), 1) == {1}
    C2 = cyclic_group(2)
    swap = action_groupoid(C2, "ab", lambda x, g: x if g == 0 else "ba"["ab".index(x)])
    assert orbit_of(swap, 0) == oracles.orbit(swap, 0) == {0, 1}


def test_components_examples():
    assert connected_components(pair_groupoid(3)) == [(0, 1, 2)]
    assert len(connected_components(disjoint_union(pair_groupoid(2), pair_groupoid(3)))) == 2
    T = action_groupoid(cyclic_group(2), *trivial_action("pq"))
    assert connected_components(T) == [(0,), (1,)]
    assert {frozenset(b) for b in connected_components(T)} == oracles.components(T)


def test_transitivity_examples():
    assert is_transitive(pair_groupoid(3))
    v = is_transitive(discrete_groupoid(2))
    assert not v and v.counterexample in {(0, 1), (1, 0)}
    assert is_transitive(action_groupoid(symmetric_group(3), *natural_permutation_action(3)))
    assert is_transitive(empty_groupoid())
    assert is_transitive(cyclic_group(4))


@given(corpus_groupoids())
@settings(max_examples=40, deadline=None)
def test_structural_queries_against_oracle(G):
    assert {frozenset(b) for b in connected_components(G)} == oracles.components(G)
    assert bool(is_transitive(G)) == oracles.is_transitive(G) == (len(connected_components(G)) <= 1)
    for x in range(G.n_objects):
        assert orbit_of(G, x) == orbit_of_by_sources(G, x) == oracles.orbit(G, x)
        assert x in orbit_of(G, x)
        assert isotropy_group(G, x).order == len(oracles.isotropy(G, x))


@given(groupoids(max_objects=4, max_arrows=40))
@settings(max_examples=40, deadline=None)
def test_transitive_iff_one_component(G):
    assert bool(is_transitive(G)) == (len(connected_components(G)) <= 1)


# -- constructors ---------------------------------------------------------------


def test_pair_sizes():
    G = pair_groupoid(3)
    assert (G.n_objects, G.n_arrows) == (3, 9)
    assert pair_groupoid(0).n_arrows == 0
    one = pair_groupoid(1)
    assert (one.n_objects, one.n_arrows) == (1, 1)
    assert list(G.src) == [G.object_index[b] for a, b in G.arrows]
    assert list(G.tgt) == [G.object_index[a] for a, b in G.arrows]


def test_equivalence_relation_examples():
    X = [1, 2, 3]
    diag = equivalence_relation_groupoid(X, [(x, x) for x in X])
    assert find_isomorphism(diag, discrete_groupoid(3)) is not None
    full = equivalence_relation_groupoid(X, [(a, b) for a in X for b in X])
    assert find_isomorphism(full, pair_groupoid(3)) is not None
    R = equivalence_closure(X, [(1, 2)])
    G = equivalence_relation_groupoid(X, R)
    assert connected_components(G) == [(0, 1), (2,)]


def test_equivalence_relation_rejects_non_equivalence():
    with pytest.raises(PreconditionError) as err:
        equivalence_relation_groupoid([1, 2], [(1, 1), (2, 2), (1, 2)])
    assert err.value.witness == (2, 1)
    with pytest.raises(PreconditionError):
        equivalence_relation_groupoid([1, 2], [(1, 1)])


def test_action_groupoid_examples():
    C2 = cyclic_group(2)
    R = action_groupoid(C2, *regular_action(C2))
    assert R.n_arrows == 4 and is_transitive(R)
    assert all(isotropy_group(R, x).order == 1 for x in range(2))
    assert oracles.isomorphic(R, pair_groupoid(2))
    assert find_isomorphism(R, pair_groupoid(2)) is not None
    S3 = symmetric_group(3)
    point = action_groupoid(S3, *trivial_action(["p"]))
    assert find_isomorphism(point, S3) is not None
    T = action_groupoid(C2, *trivial_action("pq"))
    assert len(connected_components(T)) == 2 and isotropy_group(T, 1).order == 2


def test_action_groupoid_rejects_bad_action():
    C2 = cyclic_group(2)
    with pytest.raises(PreconditionError):
        action_groupoid(C2, "ab", lambda x, g: "a")


def test_induced_from_group():
    C3 = cyclic_group(3)
    G, phi = induced_groupoid(C3, [0, 0, 0, 0])
    assert G.n_arrows == 4 * 4 * 3
    assert validate_groupoid(G) == []


def test_induced_along_identity_is_isomorphic():
    G = disjoint_union(pair_groupoid(2), cyclic_group(3))
    Gv, _ = induced_groupoid(G, range(G.n_objects))
    assert find_isomorphism(Gv, G) is not None


def test_induced_pair_groupoid():
    Y = pair_groupoid(3)
    for vs in ([0, 0], [2, 1, 2], [0, 1, 2, 2]):
        Gv, _ = induced_groupoid(Y, vs)
        assert Gv.n_arrows == len(vs) ** 2
        assert find_isomorphism(Gv, pair_groupoid(len(vs))) is not None


def test_disjoint_union_examples():
    P2, P3 = pair_groupoid(2), pair_groupoid(3)
    U = disjoint_union(P2, P3)
    assert U.n_arrows == 13 and len(connected_components(U)) == 2
    assert not is_transitive(U)
    assert disjoint_union(P2, empty_groupoid()).same_tables(P2)


@given(groupoids(max_objects=4, max_arrows=30))
@settings(max_examples=30, deadline=None)
def test_relabel_gives_isomorphic_groupoid(G):
    rng = np.random.default_rng(G.n_arrows)
    H = relabel(G, rng.permutation(G.n_objects), rng.permutation(G.n_arrows))
    assert validate_groupoid(H) == []
    assert find_isomorphism(G, H) is not None


def test_tables_are_frozen():
    G = pair_groupoid(2)
    with pytest.raises(ValueError):
        G.comp[0, 0] = 1

import numpy as np
import pytest

import oracles
from finitegroupoids import (
    GenerationRefused,
    RandomSpec,
    generate,
    is_transitive,
    serialize,
    validate_groupoid,
    validate_morphism,
    validate_principal_gset,
)
from finitegroupoids.bisets import check_left_principal, validate_biset
from finitegroupoids.generate import (
    SHAPES,
    random_induced_morphism,
    random_left_principal_biset,
    random_principal_gset,
)
from finitegroupoids.serialization import dumps


def test_seeded_pair_has_sixteen_arrows():
    G = generate(RandomSpec(1, shape="pair", objects=4))
    assert (G.n_objects, G.n_arrows) == (4, 16)
    assert dumps(serialize(G)) == dumps(serialize(generate(RandomSpec(1, shape="pair", objects=4))))


@pytest.mark.parametrize("shape", SHAPES)
def test_same_spec_same_bytes(shape):
    for seed in range(5):
        spec = RandomSpec(seed, shape=shape, max_objects=5, max_arrows=60)
        assert dumps(serialize(generate(spec))) == dumps(serialize(generate(spec)))


@pytest.mark.parametrize("shape", SHAPES)
def test_every_shape_is_valid_and_bounded(shape):
    for seed in range(15):
        G = generate(RandomSpec(seed, shape=shape, max_objects=5, max_arrows=60))
        assert validate_groupoid(G) == []
        assert 1 <= G.n_objects <= 5 and G.n_arrows <= 60


def test_two_hundred_arbitrary_draws_are_valid():
    seen_multi = seen_transitive = 0
    for seed in range(200):
        G = generate(RandomSpec(seed, max_arrows=64))
        assert G.n_arrows <= 64
        assert validate_groupoid(G) == []
        if is_transitive(G):
            seen_transitive += 1
        else:
            seen_multi += 1
    assert seen_multi > 20 and seen_transitive > 20


def test_small_draws_pass_oracle():
    for seed in range(30):
        assert oracles.is_groupoid(generate(RandomSpec(seed, max_objects=3, max_arrows=16)))


def test_unsatisfiable_bounds_are_refused():
    with pytest.raises(GenerationRefused):
        generate(RandomSpec(0, max_arrows=0))
    with pytest.raises(GenerationRefused):
        generate(RandomSpec(0, shape="pair", objects=5, max_arrows=10))
    with pytest.raises(GenerationRefused):
        generate(RandomSpec(0, shape="disjoint-union", max_objects=1))
    with pytest.raises(ValueError):
        RandomSpec(0, shape="cube")


def test_random_maps_bisets_and_gsets():
    rng = np.random.default_rng(9)
    for seed in range(10):
        G = generate(RandomSpec(seed, max_objects=4, max_arrows=30))
        assert validate_morphism(random_induced_morphism(rng, G, 3)) == []
        B = random_left_principal_biset(rng, G, 3)
        assert validate_biset(B) == [] and check_left_principal(B)
        S = random_principal_gset(rng, max_carrier=24)
        assert S.size <= 24 and validate_principal_gset(S) == []


def test_gset_refusal():
    with pytest.raises(GenerationRefused):
        random_principal_gset(np.random.default_rng(0), max_group_order=0)

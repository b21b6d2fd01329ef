"""Seeded random generation of groupoids, maps, bisets and group-sets.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64 seeded
through ``SeedSequence``), consumed in a fixed order, so a spec determines
its output exactly.  Draws that overshoot the size bounds are discarded and
redrawn from the same stream; after :data:`MAX_ATTEMPTS` failures the
request is refused.

Shapes:

``pair``
    pair groupoid on ``n`` points.
``equivalence``
    groupoid of an equivalence relation given by random block labels.
``action``
    action groupoid of a group from a small catalogue acting on a union
    of coset spaces of randomly generated subgroups.
``induced``
    groupoid induced from a random group, pair or action groupoid along a
    random map.
``disjoint-union``
    coproduct of two or three random pieces.
``arbitrary-valid``
    disjoint union of random pieces, optionally induced along a random map,
    with objects and arrows randomly renumbered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bisets import Biset, pullback_biset, unit_biset
from .constructions import (
    action_groupoid,
    coset_action,
    cyclic_group,
    dihedral_group,
    direct_product,
    disjoint_union,
    equivalence_relation_groupoid,
    generated_subgroup,
    induced_groupoid,
    pair_groupoid,
    quaternion_group,
    symmetric_group,
    trivial_group,
)
from .core import FiniteGroup, FiniteGroupoid, GroupoidError, GroupoidMorphism, relabel
from .theorems import PrincipalGroupSet

SHAPES = ("pair", "action", "equivalence", "induced", "disjoint-union", "arbitrary-valid")
MAX_ATTEMPTS = 200


class GenerationRefused(GroupoidError):
    """The requested bounds cannot be met."""


@dataclass(frozen=True)
class RandomSpec:
    seed: int
    shape: str = "arbitrary-valid"
    objects: int | None = None
    max_objects: int = 6
    max_arrows: int = 100
    max_group_order: int = 8

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")


_CATALOGUE = (
    ("C1", 1, trivial_group),
    ("C2", 2, lambda: cyclic_group(2)),
    ("C3", 3, lambda: cyclic_group(3)),
    ("C4", 4, lambda: cyclic_group(4)),
    ("C2xC2", 4, lambda: direct_product(cyclic_group(2), cyclic_group(2))),
    ("C5", 5, lambda: cyclic_group(5)),
    ("C6", 6, lambda: cyclic_group(6)),
    ("S3", 6, lambda: symmetric_group(3)),
    ("C8", 8, lambda: cyclic_group(8)),
    ("D4", 8, lambda: dihedral_group(4)),
    ("Q8", 8, quaternion_group),
)
_GROUP_CACHE: dict[str, FiniteGroup] = {}


def catalogue_group(name: str) -> FiniteGroup:
    if name not in _GROUP_CACHE:
        factory = {n: f for n, _, f in _CATALOGUE}[name]
        _GROUP_CACHE[name] = factory()
    return _GROUP_CACHE[name]


def random_group(rng: np.random.Generator, max_order: int) -> FiniteGroup:
    names = [n for n, k, _ in _CATALOGUE if k <= max_order]
    if not names:
        raise GenerationRefused(f"no catalogue group of order <= {max_order}")
    return catalogue_group(names[int(rng.integers(len(names)))])


def _pair(rng, spec, budget_objects, budget_arrows):
    top = min(budget_objects, int(np.sqrt(budget_arrows)))
    if top < 1:
        return None
    n = int(rng.integers(1, top + 1))
    return pair_groupoid(n)


def _equivalence(rng, spec, budget_objects, budget_arrows):
    n = int(rng.integers(1, budget_objects + 1))
    labels = rng.integers(0, n, size=n)
    sizes = np.bincount(labels)
    if int((sizes * sizes).sum()) > budget_arrows:
        return None
    R = [(i, j) for i in range(n) for j in range(n) if labels[i] == labels[j]]
    return equivalence_relation_groupoid(range(n), R, check=False)


def _action(rng, spec, budget_objects, budget_arrows):
    grp = random_group(rng, min(spec.max_group_order, budget_arrows))
    k = grp.order
    points = int(rng.integers(1, min(budget_objects, budget_arrows // k) + 1)) if budget_arrows >= k else 0
    if points < 1:
        return None
    orbits = []
    left = points
    tries = 0
    while left > 0:
        tries += 1
        gens = [int(g) for g in rng.integers(0, k, size=int(rng.integers(0, 3)))]
        sub = generated_subgroup(grp, gens) if tries < 50 else list(range(k))
        if k // len(sub) > left:
            continue
        labels, act = coset_action(grp, sub)
        orbits.append((labels, act))
        left -= len(labels)
    X = [(i, c) for i, (labels, _) in enumerate(orbits) for c in labels]

    def act(x, g):
        i, c = x
        return (i, orbits[i][1](c, g))

    return action_groupoid(grp, X, act)


def _group(rng, spec, budget_objects, budget_arrows):
    return random_group(rng, min(spec.max_group_order, budget_arrows))


def random_varsigma(rng: np.random.Generator, G: FiniteGroupoid, k: int) -> list[int]:
    return [int(v) for v in rng.integers(0, G.n_objects, size=k)]


def _induced(rng, spec, budget_objects, budget_arrows):
    base = [_group, _pair, _action][int(rng.integers(3))](rng, spec, budget_objects, budget_arrows)
    if base is None or base.n_objects == 0:
        return None
    k = int(rng.integers(1, budget_objects + 1))
    vs = random_varsigma(rng, base, k)
    counts = np.zeros((base.n_objects, base.n_objects), dtype=np.int64)
    np.add.at(counts, (base.src, base.tgt), 1)
    if int(counts[np.ix_(vs, vs)].sum()) > budget_arrows:
        return None
    return induced_groupoid(base, vs)[0]


def _union(rng, spec, budget_objects, budget_arrows):
    parts = int(rng.integers(2, 4))
    if budget_objects < parts:
        return None
    G = None
    objs, arrs = budget_objects, budget_arrows
    for i in range(parts):
        remaining = parts - i - 1
        maker = [_pair, _equivalence, _action, _group, _induced][int(rng.integers(5))]
        piece = maker(rng, spec, objs - remaining, arrs - remaining)
        if piece is None:
            return None
        G = piece if G is None else disjoint_union(G, piece)
        objs -= piece.n_objects
        arrs -= piece.n_arrows
        if objs < remaining or arrs < remaining:
            return None
    return G


def _arbitrary(rng, spec, budget_objects, budget_arrows):
    if rng.random() < 0.25:
        G = [_pair, _equivalence, _action, _induced][int(rng.integers(4))](rng, spec, budget_objects, budget_arrows)
    else:
        G = _union(rng, spec, budget_objects, budget_arrows)
    if G is None:
        return None
    if rng.random() < 0.5:
        k = int(rng.integers(1, budget_objects + 1))
        vs = random_varsigma(rng, G, k)
        counts = np.zeros((G.n_objects, G.n_objects), dtype=np.int64)
        np.add.at(counts, (G.src, G.tgt), 1)
        if int(counts[np.ix_(vs, vs)].sum()) <= budget_arrows:
            G = induced_groupoid(G, vs)[0]
    return relabel(G, rng.permutation(G.n_objects), rng.permutation(G.n_arrows))


_MAKERS = {
    "pair": _pair,
    "equivalence": _equivalence,
    "action": _action,
    "induced": _induced,
    "disjoint-union": _union,
    "arbitrary-valid": _arbitrary,
}


def generate(spec: RandomSpec) -> FiniteGroupoid:
    """A random groupoid of the requested shape within the bounds."""
    if spec.max_objects < 1 or spec.max_arrows < 1 or spec.max_group_order < 1:
        raise GenerationRefused("bounds must be positive")
    if spec.shape == "disjoint-union" and (spec.max_objects < 2 or spec.max_arrows < 2):
        raise GenerationRefused("a disjoint union needs room for two pieces")
    rng = np.random.default_rng(spec.seed)
    if spec.objects is not None:
        n = spec.objects
        if spec.shape != "pair":
            raise GenerationRefused("an exact object count is only supported for the pair shape")
        if n < 1 or n * n > spec.max_arrows:
            raise GenerationRefused(f"pair groupoid on {n} points exceeds the bounds")
        return pair_groupoid(n)
    maker = _MAKERS[spec.shape]
    for _ in range(MAX_ATTEMPTS):
        G = maker(rng, spec, spec.max_objects, spec.max_arrows)
        if G is not None and 1 <= G.n_objects <= spec.max_objects and G.n_arrows <= spec.max_arrows:
            return G
    raise GenerationRefused(f"no {spec.shape} groupoid within bounds after {MAX_ATTEMPTS} draws")


# -- maps, bisets and group-sets ----------------------------------------------


def random_induced_morphism(rng: np.random.Generator, G: FiniteGroupoid, max_x: int) -> GroupoidMorphism:
    """The canonical morphism out of the groupoid induced along a random map."""
    k = int(rng.integers(1, max_x + 1))
    return induced_groupoid(G, random_varsigma(rng, G, k))[1]


def random_left_principal_biset(rng: np.random.Generator, G: FiniteGroupoid, max_x: int = 3) -> Biset:
    """Pull-back of the unit biset of ``G`` along a random induced morphism."""
    return pullback_biset(unit_biset(G), random_induced_morphism(rng, G, max_x))


def random_principal_gset(rng: np.random.Generator, max_group_order: int = 8, max_base: int = 3,
                          max_carrier: int = 24) -> PrincipalGroupSet:
    """``group x M`` under left multiplication, with the carrier shuffled."""
    for _ in range(MAX_ATTEMPTS):
        grp = random_group(rng, max_group_order)
        m = int(rng.integers(1, max_base + 1))
        if grp.order * m <= max_carrier:
            break
    else:
        raise GenerationRefused("no principal group-set within bounds")
    k = grp.order
    perm = rng.permutation(k * m)  # new position of (g, i) = perm[g*m + i]
    carrier = [None] * (k * m)
    pi = np.empty(k * m, dtype=np.int64)
    for g in range(k):
        for i in range(m):
            carrier[perm[g * m + i]] = (grp.arrows[g], i)
            pi[perm[g * m + i]] = i
    action = np.empty((k, k * m), dtype=np.int64)
    for h in range(k):
        for g in range(k):
            for i in range(m):
                action[h, perm[g * m + i]] = perm[int(grp.comp[h, g]) * m + i]
    return PrincipalGroupSet(grp, carrier, list(range(m)), pi, action)

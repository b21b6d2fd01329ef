"""Canonical constructors: groups, pair and equivalence-relation groupoids,
action groupoids, induced groupoids and disjoint unions."""

from __future__ import annotations

from itertools import permutations, product
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .core import (
    FiniteGroup,
    FiniteGroupoid,
    GroupoidMorphism,
    PreconditionError,
    UNDEFINED,
)

# -- groups -------------------------------------------------------------------


def group_from_elements(elements: Sequence[Hashable], mul: Callable, name: Hashable = "*") -> FiniteGroup:
    """Build a group from a list of element keys and a multiplication on keys.

    ``mul(a, b)`` is the product "a then-applied-after b", i.e. the composite
    ``a∘b``.  The neutral element and inverses are found by search.
    """
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    k = len(elements)
    table = np.empty((k, k), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            try:
                table[i, j] = index[mul(a, b)]
            except KeyError:
                raise PreconditionError(f"product {a!r}*{b!r} is not an element", (a, b)) from None
    neutral = [i for i in range(k) if (table[i] == np.arange(k)).all() and (table[:, i] == np.arange(k)).all()]
    if not neutral:
        raise PreconditionError("no neutral element")
    e = neutral[0]
    inv = np.empty(k, dtype=np.int64)
    for i in range(k):
        cand = np.flatnonzero(table[i] == e)
        if cand.size != 1 or table[cand[0], i] != e:
            raise PreconditionError(f"element {elements[i]!r} has no two-sided inverse", (elements[i],))
        inv[i] = cand[0]
    return FiniteGroup((name,), elements, np.zeros(k, np.int64), np.zeros(k, np.int64), [e], table, inv)


def trivial_group() -> FiniteGroup:
    return group_from_elements([0], lambda a, b: 0)


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_elements(range(n), lambda a, b: (a + b) % n)


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``range(n)`` as tuples; the product is composition ``(p∘q)(i) = p[q[i]]``."""
    perms = sorted(permutations(range(n)))
    return group_from_elements(perms, lambda p, q: tuple(p[i] for i in q))


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon as ``(r, f)`` meaning rotation r then optional flip f."""
    def mul(a, b):
        r1, f1 = a
        r2, f2 = b
        return ((r1 + (-r2 if f1 else r2)) % n, f1 ^ f2)

    return group_from_elements([(r, f) for f in (0, 1) for r in range(n)], mul)


def quaternion_group() -> FiniteGroup:
    """The quaternion group; elements ``(sign, unit)`` with unit in ``"1ijk"``."""
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, u = table[a[1], b[1]]
        return (a[0] * b[0] * s, u)

    return group_from_elements([(s, u) for s in (1, -1) for u in "1ijk"], mul)


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    def mul(x, y):
        return (A.arrows[A.comp[A.arrow_index[x[0]], A.arrow_index[y[0]]]],
                B.arrows[B.comp[B.arrow_index[x[1]], B.arrow_index[y[1]]]])

    return group_from_elements(list(product(A.arrows, B.arrows)), mul)


def as_group(G: FiniteGroupoid) -> FiniteGroup:
    return FiniteGroup.from_groupoid(G)


# -- groupoids of pairs and relations --------------------------------------


def _points(X) -> list:
    if isinstance(X, int):
        return list(range(X))
    return list(X)


def pair_groupoid(X) -> FiniteGroupoid:
    """Arrows are pairs ``(x, x')`` from ``x'`` to ``x``; ``X`` may be a size."""
    X = _points(X)
    return equivalence_relation_groupoid(X, list(product(X, X)), check=False)


def discrete_groupoid(X) -> FiniteGroupoid:
    X = _points(X)
    return equivalence_relation_groupoid(X, [(x, x) for x in X], check=False)


def equivalence_closure(X, pairs: Iterable[tuple]) -> list[tuple]:
    """Smallest equivalence relation on ``X`` containing ``pairs``, as sorted-by-``X`` pairs."""
    X = _points(X)
    parent = {x: x for x in X}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    return [(a, b) for a in X for b in X if find(a) == find(b)]


def equivalence_relation_groupoid(X, R: Iterable[tuple], check: bool = True) -> FiniteGroupoid:
    """Groupoid with arrows the pairs of ``R``; source is the second entry.

    ``R`` must be an equivalence relation on ``X``; a missing pair required by
    reflexivity, symmetry or transitivity raises :class:`PreconditionError`.
    """
    X = _points(X)
    oid = {x: i for i, x in enumerate(X)}
    R = [tuple(p) for p in R]
    rel = set(R)
    if len(rel) != len(R):
        R = list(dict.fromkeys(R))
    if check:
        for a, b in R:
            if a not in oid or b not in oid:
                raise PreconditionError(f"pair {(a, b)!r} leaves the set", (a, b))
        for x in X:
            if (x, x) not in rel:
                raise PreconditionError(f"not reflexive: missing {(x, x)!r}", (x, x))
        for a, b in R:
            if (b, a) not in rel:
                raise PreconditionError(f"not symmetric: missing {(b, a)!r}", (b, a))
        for a, b in R:
            for c in X:
                if (b, c) in rel and (a, c) not in rel:
                    raise PreconditionError(f"not transitive: missing {(a, c)!r}", (a, c))
    # order arrows by (target, source) position for stable ids
    R = sorted(R, key=lambda p: (oid[p[0]], oid[p[1]]))
    aid = {p: i for i, p in enumerate(R)}
    return FiniteGroupoid.from_rules(
        X, R,
        src=[oid[b] for a, b in R],
        tgt=[oid[a] for a, b in R],
        identity=[aid[(x, x)] for x in X],
        inv=[aid[(b, a)] for a, b in R],
        mul=lambda g, f: aid[(R[g][0], R[f][1])],
    )


def kernel_pair_groupoid(X, nu: Callable) -> FiniteGroupoid:
    """Arrows ``(x, x')`` with ``nu(x) == nu(x')``."""
    X = _points(X)
    return equivalence_relation_groupoid(X, [(a, b) for a in X for b in X if nu(a) == nu(b)], check=False)


# -- actions ------------------------------------------------------------------


def _action_table(group: FiniteGroup, X: list, action) -> np.ndarray:
    oid = {x: i for i, x in enumerate(X)}
    table = np.empty((len(X), group.order), dtype=np.int64)
    for i, x in enumerate(X):
        for g in range(group.order):
            if callable(action):
                y = action(x, group.arrows[g])
            else:
                y = action[x, group.arrows[g]]
            if y not in oid:
                raise PreconditionError(f"{x!r}·{group.arrows[g]!r} = {y!r} is not a point", (x, group.arrows[g]))
            table[i, g] = oid[y]
    return table


def check_right_group_action(group: FiniteGroup, table: np.ndarray):
    """Raise :class:`PreconditionError` unless ``table[x, g]`` is a right action."""
    e = group.neutral
    for x in range(table.shape[0]):
        if table[x, e] != x:
            raise PreconditionError(f"unit law fails at point {x}", (x,))
    for g in range(group.order):
        for h in range(group.order):
            lhs = table[table[:, g], h]
            rhs = table[:, group.comp[g, h]]
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                raise PreconditionError(
                    f"(x·g)·h != x·(gh) for x={bad[0]}, g={group.arrows[g]!r}, h={group.arrows[h]!r}",
                    (int(bad[0]), g, h),
                )


def action_groupoid(group: FiniteGroup, X, action) -> FiniteGroupoid:
    """Groupoid of a right group action: arrows ``(x, g)`` from ``x·g`` to ``x``.

    ``action`` is a callable ``(x, g_key) -> x`` or a mapping keyed by
    ``(x, g_key)``.  It is validated as a right action.
    """
    X = _points(X)
    table = _action_table(group, X, action)
    check_right_group_action(group, table)
    k = group.order
    keys = [(x, group.arrows[g]) for x in X for g in range(k)]
    aid = lambda i, g: i * k + g  # noqa: E731
    return FiniteGroupoid.from_rules(
        X, keys,
        src=[table[i, g] for i in range(len(X)) for g in range(k)],
        tgt=[i for i in range(len(X)) for g in range(k)],
        identity=[aid(i, group.neutral) for i in range(len(X))],
        inv=[aid(table[i, g], group.inv[g]) for i in range(len(X)) for g in range(k)],
        mul=lambda a, b: aid(a // k, group.comp[a % k, b % k]),
    )


def regular_action(group: FiniteGroup):
    """Right multiplication of the group on its own elements."""
    return list(group.arrows), lambda x, g: group.arrows[group.comp[group.arrow_index[x], group.arrow_index[g]]]


def trivial_action(points):
    return _points(points), lambda x, g: x


def natural_permutation_action(n: int):
    """Points ``range(n)`` under ``x·p = p^{-1}(x)``, a right action of :func:`symmetric_group`."""
    return list(range(n)), lambda x, p: p.index(x)


def coset_action(group: FiniteGroup, subgroup: Iterable[int]):
    """Right cosets ``Hg`` of a subgroup (given by element ids) under right multiplication."""
    H = sorted(set(int(h) for h in subgroup))
    cosets = []
    seen = {}
    for g in range(group.order):
        c = frozenset(int(group.comp[h, g]) for h in H)
        if c not in seen:
            seen[c] = len(cosets)
            cosets.append(c)
    labels = [tuple(sorted(c)) for c in cosets]
    lookup = {}
    for i, c in enumerate(cosets):
        for g in c:
            lookup[g] = i

    def act(x, gkey):
        g = group.arrow_index[gkey]
        return labels[lookup[int(group.comp[x[0], g])]]

    return labels, act


def generated_subgroup(group: FiniteGroup, gens: Iterable[int]) -> list[int]:
    elems = {group.neutral}
    frontier = [group.neutral]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = int(group.comp[a, s])
                if b not in elems:
                    elems.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(elems)


# -- induced groupoid and disjoint union -------------------------------------


def induced_groupoid(G: FiniteGroupoid, varsigma: Sequence[int], X: Sequence[Hashable] | None = None):
    """The groupoid induced by a map ``varsigma: X -> objects(G)``.

    Arrows are triples ``(x, g, x')`` with ``varsigma[x] = tgt(g)`` and
    ``varsigma[x'] = src(g)``; the triple runs from ``x'`` to ``x``.
    Keys store ``x``, ``x'`` as positions in ``X`` and ``g`` as an arrow id.
    Returns the groupoid and the canonical morphism ``(x, g, x') -> g``.
    """
    vs = [int(v) for v in varsigma]
    X = list(range(len(vs))) if X is None else list(X)
    if len(X) != len(vs):
        raise PreconditionError("map and domain have different lengths")
    fibre: dict[int, list[int]] = {}
    for i, v in enumerate(vs):
        fibre.setdefault(v, []).append(i)
    keys = []
    for x in range(len(vs)):
        for g in G.arrows_to(vs[x]):
            for y in fibre.get(int(G.src[g]), ()):
                keys.append((x, int(g), y))
    aid = {k: i for i, k in enumerate(keys)}
    ident = [aid[(x, int(G.identity[vs[x]]), x)] for x in range(len(vs))]
    Gv = FiniteGroupoid.from_rules(
        X, keys,
        src=[k[2] for k in keys],
        tgt=[k[0] for k in keys],
        identity=ident,
        inv=[aid[(k[2], int(G.inv[k[1]]), k[0])] for k in keys],
        mul=lambda a, b: aid[(keys[a][0], int(G.comp[keys[a][1], keys[b][1]]), keys[b][2])],
    )
    phi = GroupoidMorphism(Gv, G, vs, [k[1] for k in keys])
    return Gv, phi


def disjoint_union(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    """Coproduct; keys are tagged ``(0, key)`` and ``(1, key)``."""
    n, m = G.n_objects, G.n_arrows
    mh = H.n_arrows
    comp = np.full((m + mh, m + mh), UNDEFINED, dtype=np.int64)
    comp[:m, :m] = G.comp
    comp[m:, m:] = np.where(H.comp >= 0, H.comp + m, UNDEFINED)
    return FiniteGroupoid(
        [(0, k) for k in G.objects] + [(1, k) for k in H.objects],
        [(0, k) for k in G.arrows] + [(1, k) for k in H.arrows],
        np.concatenate([G.src, H.src + n]),
        np.concatenate([G.tgt, H.tgt + n]),
        np.concatenate([G.identity, H.identity + m]),
        comp,
        np.concatenate([G.inv, H.inv + m]),
    )


def empty_groupoid() -> FiniteGroupoid:
    return FiniteGroupoid((), (), [], [], [], np.zeros((0, 0), np.int64), [])

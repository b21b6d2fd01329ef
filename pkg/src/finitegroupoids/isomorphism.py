"""Isomorphisms of finite groups and groupoids.

Groupoid isomorphism is decided component by component: a connected
groupoid is determined up to isomorphism by its number of objects and one
isotropy group, so the search reduces to matching components and finding
group isomorphisms by backtracking over generator images.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterator

import numpy as np

from .core import (
    FiniteGroup,
    FiniteGroupoid,
    GroupoidMorphism,
    SearchRefused,
    StructuralError,
    connected_components,
    isotropy_arrows,
    subgroup_on,
    validate_morphism,
)

DEFAULT_MAX_ARROWS = 4096


class GroupoidIso(GroupoidMorphism):
    """A morphism whose object and arrow maps are bijections."""

    def __post_init__(self):
        super().__post_init__()
        if self.source.n_objects != self.target.n_objects or self.source.n_arrows != self.target.n_arrows:
            raise StructuralError("isomorphism between groupoids of different sizes")

    def is_bijective(self) -> bool:
        return (
            np.unique(self.f0).size == self.f0.size
            and np.unique(self.f1).size == self.f1.size
        )

    def check(self) -> list:
        """Violations of the isomorphism invariants (empty when valid)."""
        viol = list(validate_morphism(self))
        if not self.is_bijective():
            viol.append(("bijective", ()))
        return viol

    def inverse(self) -> "GroupoidIso":
        g0 = np.empty_like(self.f0)
        g1 = np.empty_like(self.f1)
        g0[self.f0] = np.arange(self.f0.size)
        g1[self.f1] = np.arange(self.f1.size)
        return GroupoidIso(self.target, self.source, g0, g1)


def element_orders(G: FiniteGroup) -> np.ndarray:
    return np.array([G.element_order(a) for a in range(G.order)], dtype=np.int64)


def _generators(G: FiniteGroup, orders: np.ndarray) -> list[int]:
    # greedy: prefer high-order elements so few generators are needed
    gens: list[int] = []
    span = {G.neutral}
    for a in sorted(range(G.order), key=lambda a: (-orders[a], a)):
        if a in span:
            continue
        gens.append(a)
        span = _closure(G, gens)
        if len(span) == G.order:
            break
    return gens


def _closure(G: FiniteGroup, gens: list[int]) -> set:
    elems = {G.neutral}
    frontier = [G.neutral]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = int(G.comp[a, s])
                if b not in elems:
                    elems.add(b)
                    nxt.append(b)
        frontier = nxt
    return elems


def _extend(A: FiniteGroup, B: FiniteGroup, gens: list[int], images: list[int]) -> np.ndarray | None:
    phi = np.full(A.order, -1, dtype=np.int64)
    phi[A.neutral] = B.neutral
    frontier = [A.neutral]
    while frontier:
        nxt = []
        for a in frontier:
            for s, t in zip(gens, images):
                b = int(A.comp[a, s])
                img = int(B.comp[phi[a], t])
                if phi[b] < 0:
                    phi[b] = img
                    nxt.append(b)
                elif phi[b] != img:
                    return None
        frontier = nxt
    return phi


def iter_group_homomorphisms(A: FiniteGroup, B: FiniteGroup, bijective: bool = False) -> Iterator[np.ndarray]:
    """Yield arrow tables of all homomorphisms ``A -> B`` (isomorphisms if ``bijective``)."""
    if bijective and A.order != B.order:
        return
    oa, ob = element_orders(A), element_orders(B)
    if bijective and sorted(oa) != sorted(ob):
        return
    gens = _generators(A, oa)
    cands = []
    for s in gens:
        if bijective:
            cands.append([t for t in range(B.order) if ob[t] == oa[s]])
        else:
            cands.append([t for t in range(B.order) if oa[s] % ob[t] == 0])

    def rec(i, images):
        if i == len(gens):
            phi = _extend(A, B, gens, images)
            if phi is None:
                return
            if bijective and np.unique(phi).size != A.order:
                return
            yield phi
            return
        for t in cands[i]:
            yield from rec(i + 1, images + [t])

    yield from rec(0, [])


def find_group_isomorphism(A: FiniteGroup, B: FiniteGroup) -> GroupoidIso | None:
    for phi in iter_group_homomorphisms(A, B, bijective=True):
        return GroupoidIso(A, B, [0], phi)
    return None


def _component_data(G: FiniteGroupoid, block: tuple):
    base = block[0]
    loops = isotropy_arrows(G, base)
    # f[y]: least arrow from y to the base; identity at the base
    f = {}
    for y in block:
        if y == base:
            f[y] = int(G.identity[base])
        else:
            f[y] = int(G.hom(y, base).min())
    return base, loops, subgroup_on(G, loops), f


def find_isomorphism(G: FiniteGroupoid, H: FiniteGroupoid, max_arrows: int = DEFAULT_MAX_ARROWS) -> GroupoidIso | None:
    """An isomorphism ``G -> H`` or ``None`` when none exists.

    The search is exhaustive; inputs with more than ``max_arrows`` arrows
    raise :class:`SearchRefused` rather than returning an unreliable answer.
    """
    if max(G.n_arrows, H.n_arrows) > max_arrows:
        raise SearchRefused(f"isomorphism search refused: more than {max_arrows} arrows")
    if G.n_objects != H.n_objects or G.n_arrows != H.n_arrows:
        return None
    cg, ch = connected_components(G), connected_components(H)
    if len(cg) != len(ch):
        return None

    def signature(K, block):
        return (len(block), K.hom(block[0], block[0]).size)

    if sorted(signature(G, b) for b in cg) != sorted(signature(H, b) for b in ch):
        return None

    hdata = [_component_data(H, b) for b in ch]
    used = [False] * len(ch)
    f0 = np.empty(G.n_objects, dtype=np.int64)
    f1 = np.empty(G.n_arrows, dtype=np.int64)
    for block in cg:
        base, loops, grp, fam = _component_data(G, block)
        match = None
        for j, hb in enumerate(ch):
            if used[j] or signature(H, hb) != signature(G, block):
                continue
            alpha = find_group_isomorphism(grp, hdata[j][2])
            if alpha is not None:
                match = (j, alpha)
                break
        if match is None:
            return None
        j, alpha = match
        used[j] = True
        hbase, hloops, _, hfam = hdata[j]
        beta = dict(zip(block, ch[j]))
        loop_pos = {int(a): i for i, a in enumerate(loops)}
        for y in block:
            f0[y] = beta[y]
        for a in block:
            for g in G.arrows_from(a):
                b = int(G.tgt[g])
                # k = f_b ∘ g ∘ f_a^{-1} lies in the isotropy group at the base
                k = int(G.comp[fam[b], G.comp[g, G.inv[fam[a]]]])
                kk = int(hloops[alpha.f1[loop_pos[k]]])
                fa, fb = hfam[beta[a]], hfam[beta[b]]
                f1[g] = H.comp[H.inv[fb], H.comp[kk, fa]]
    iso = GroupoidIso(G, H, f0, f1)
    if iso.check():
        raise AssertionError("internal error: constructed isomorphism fails validation")
    return iso


def canonical_form(G: FiniteGroupoid, max_objects: int = 7) -> tuple:
    """Least hom-count matrix over all object orderings, with the sorted
    element orders of each component's isotropy group.

    Isomorphic groupoids share a canonical form.  The converse can fail
    (non-isomorphic groups may have the same element orders), so corpus
    deduplication confirms equal forms with :func:`find_isomorphism`.
    """
    n = G.n_objects
    if n > max_objects:
        raise SearchRefused(f"canonical form refused for {n} > {max_objects} objects")
    counts = np.zeros((n, n), dtype=np.int64)
    np.add.at(counts, (G.src, G.tgt), 1)
    best = None
    for perm in permutations(range(n)):
        p = list(perm)
        enc = tuple(counts[np.ix_(p, p)].reshape(-1).tolist())
        if best is None or enc < best:
            best = enc
    isotropy = sorted(
        (len(block), tuple(sorted(element_orders(subgroup_on(G, isotropy_arrows(G, block[0]))).tolist())))
        for block in connected_components(G)
    )
    return (n, G.n_arrows, best or (), tuple(isotropy))


def deduplicate(groupoids: list, max_objects: int = 7) -> list:
    """Indices of the first member of each isomorphism class."""
    kept: dict[tuple, list[int]] = {}
    out = []
    for i, G in enumerate(groupoids):
        key = canonical_form(G, max_objects)
        bucket = kept.setdefault(key, [])
        if any(find_isomorphism(groupoids[j], G) is not None for j in bucket):
            continue
        bucket.append(i)
        out.append(i)
    return out

"""Groupoid-sets, bisets and principal bisets.

Anchors and actions are stored as integer tables:

* a right ``G``-set has ``anchor: X -> G0`` and ``action[x, g]`` defined
  (``>= 0``) exactly when ``anchor[x] == tgt(g)``;
* a left ``H``-set has ``anchor: X -> H0`` and ``action[h, x]`` defined
  exactly when ``src(h) == anchor[x]``;
* an ``(H, G)``-biset carries both, with ``left_anchor`` into ``H0`` and
  ``right_anchor`` into ``G0``.

For the unit biset of ``G`` the carrier is the arrow set, the right anchor
is ``src`` and the left anchor is ``tgt``; both actions are composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .constructions import trivial_group
from .core import (
    UNDEFINED,
    FiniteGroupoid,
    GroupoidMorphism,
    StructuralError,
    Verdict,
    Violation,
    _frozen,
    connected_components,
)


class ActionDomainError(StructuralError):
    """An action is defined where it should not be, or undefined where it should be."""

    def __init__(self, message: str, pairs):
        super().__init__(message)
        self.pairs = pairs


def _check_table(name, arr, shape, hi):
    if arr.shape != shape:
        raise StructuralError(f"{name} has shape {arr.shape}, expected {shape}")
    if arr.size and (arr.min() < UNDEFINED or arr.max() >= hi):
        raise StructuralError(f"{name} has entries out of range")


def _check_anchor(name, arr, size, hi):
    if arr.shape != (size,):
        raise StructuralError(f"{name} has shape {arr.shape}, expected ({size},)")
    if arr.size and (arr.min() < 0 or arr.max() >= hi):
        raise StructuralError(f"{name} leaves the object range")


@dataclass(frozen=True, eq=False)
class RightGroupoidSet:
    groupoid: FiniteGroupoid
    carrier: tuple
    anchor: np.ndarray
    action: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "anchor", _frozen(np.asarray(self.anchor).reshape(-1)))
        object.__setattr__(self, "action", _frozen(np.asarray(self.action).reshape(len(self.carrier), -1)
                                                   if len(self.carrier) else np.zeros((0, self.groupoid.n_arrows))))
        _check_anchor("anchor", self.anchor, len(self.carrier), self.groupoid.n_objects)
        _check_table("action", self.action, (len(self.carrier), self.groupoid.n_arrows), len(self.carrier))

    @property
    def size(self) -> int:
        return len(self.carrier)


@dataclass(frozen=True, eq=False)
class LeftGroupoidSet:
    groupoid: FiniteGroupoid
    carrier: tuple
    anchor: np.ndarray
    action: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "anchor", _frozen(np.asarray(self.anchor).reshape(-1)))
        object.__setattr__(self, "action", _frozen(np.asarray(self.action).reshape(self.groupoid.n_arrows, len(self.carrier))))
        _check_anchor("anchor", self.anchor, len(self.carrier), self.groupoid.n_objects)
        _check_table("action", self.action, (self.groupoid.n_arrows, len(self.carrier)), len(self.carrier))

    @property
    def size(self) -> int:
        return len(self.carrier)


@dataclass(frozen=True, eq=False)
class Biset:
    """An ``(H, G)``-biset: ``H = left`` acts on the left, ``G = right`` on the right."""

    left: FiniteGroupoid
    right: FiniteGroupoid
    carrier: tuple
    left_anchor: np.ndarray
    right_anchor: np.ndarray
    left_action: np.ndarray
    right_action: np.ndarray

    def __post_init__(self):
        X = len(self.carrier)
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "left_anchor", _frozen(np.asarray(self.left_anchor).reshape(-1)))
        object.__setattr__(self, "right_anchor", _frozen(np.asarray(self.right_anchor).reshape(-1)))
        object.__setattr__(self, "left_action", _frozen(np.asarray(self.left_action).reshape(self.left.n_arrows, X)))
        object.__setattr__(self, "right_action", _frozen(np.asarray(self.right_action).reshape(X, self.right.n_arrows)))
        _check_anchor("left_anchor", self.left_anchor, X, self.left.n_objects)
        _check_anchor("right_anchor", self.right_anchor, X, self.right.n_objects)
        _check_table("left_action", self.left_action, (self.left.n_arrows, X), X)
        _check_table("right_action", self.right_action, (X, self.right.n_arrows), X)

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def left_set(self) -> LeftGroupoidSet:
        return LeftGroupoidSet(self.left, self.carrier, self.left_anchor, self.left_action)

    @property
    def right_set(self) -> RightGroupoidSet:
        return RightGroupoidSet(self.right, self.carrier, self.right_anchor, self.right_action)

    def same_tables(self, other: "Biset") -> bool:
        return (
            self.left.same_tables(other.left)
            and self.right.same_tables(other.right)
            and np.array_equal(self.left_anchor, other.left_anchor)
            and np.array_equal(self.right_anchor, other.right_anchor)
            and np.array_equal(self.left_action, other.left_action)
            and np.array_equal(self.right_action, other.right_action)
        )

    def __repr__(self) -> str:
        return f"Biset({self.left!r}, {self.right!r}, carrier={self.size})"


@dataclass(frozen=True)
class PrincipalityWitness:
    """Inverse of the canonical map and the derived division map.

    For ``side == "left"``: ``delta[x, y]`` is the unique ``h`` with
    ``h·y = x`` (defined when the right anchors of ``x`` and ``y`` agree) and
    ``nabla_inv[(x, y)] = (delta[x, y], y)``.

    For ``side == "right"``: ``delta[x, y]`` is the unique ``g`` with
    ``x·g = y`` (defined when the left anchors agree) and
    ``nabla_inv[(x, y)] = (x, delta[x, y])``.
    """

    side: str
    nabla_inv: dict
    delta: np.ndarray


@dataclass(frozen=True, eq=False)
class EquivariantMap:
    source: Biset
    target: Biset
    mapping: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mapping", _frozen(np.asarray(self.mapping).reshape(-1)))
        if self.mapping.shape != (self.source.size,):
            raise StructuralError("mapping length differs from the source carrier")
        if self.mapping.size and (self.mapping.min() < 0 or self.mapping.max() >= self.target.size):
            raise StructuralError("mapping leaves the target carrier")

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and np.unique(self.mapping).size == self.mapping.size


# -- one-sided actions --------------------------------------------------------


def _domain_errors(defined, should, kind):
    bad = np.argwhere(defined != should)
    if bad.size:
        pairs = [tuple(int(v) for v in p) for p in bad[:25]]
        raise ActionDomainError(f"{kind} action domain mismatch at {pairs[:5]}", pairs)


def validate_right_action(S: RightGroupoidSet, max_per_axiom: int = 25) -> list[Violation]:
    """Check the right-action axioms: anchor of ``x·g`` is ``src(g)``, units act
    trivially, and ``(x·g)·h = x·(gh)``.

    Raises :class:`ActionDomainError` when the table is defined off the fibre
    product or undefined on it.
    """
    G, a, act = S.groupoid, S.anchor, S.action
    viol: list[Violation] = []
    if S.size == 0 or G.n_arrows == 0:
        return viol
    should = a[:, None] == G.tgt[None, :]
    _domain_errors(act >= 0, should, "right")
    xs, gs = np.nonzero(should)
    xg = act[xs, gs]
    bad = np.flatnonzero(a[xg] != G.src[gs])
    viol += [Violation("anchor", (int(xs[i]), int(gs[i]))) for i in bad[:max_per_axiom]]
    xr = np.arange(S.size)
    bad = np.flatnonzero(act[xr, G.identity[a]] != xr)
    viol += [Violation("unit", (int(x),)) for x in bad[:max_per_axiom]]
    found = []
    for g in range(G.n_arrows):
        xs_g = np.flatnonzero(should[:, g])
        hs = G.arrows_to(int(G.src[g]))
        if xs_g.size == 0 or hs.size == 0:
            continue
        y = act[xs_g, g]
        lhs = np.where((a[y] == G.src[g])[:, None], act[y][:, hs], UNDEFINED)
        rhs = act[xs_g][:, G.comp[g, hs]]
        for i, j in np.argwhere(lhs != rhs):
            found.append((int(xs_g[i]), g, int(hs[j])))
    found.sort()
    viol += [Violation("associativity", w) for w in found[:max_per_axiom]]
    return viol


def validate_left_action(S: LeftGroupoidSet, max_per_axiom: int = 25) -> list[Violation]:
    """Mirror of :func:`validate_right_action` for left actions."""
    H, a, act = S.groupoid, S.anchor, S.action
    viol: list[Violation] = []
    if S.size == 0 or H.n_arrows == 0:
        return viol
    should = H.src[:, None] == a[None, :]
    _domain_errors(act >= 0, should, "left")
    hs, xs = np.nonzero(should)
    hx = act[hs, xs]
    bad = np.flatnonzero(a[hx] != H.tgt[hs])
    viol += [Violation("anchor", (int(hs[i]), int(xs[i]))) for i in bad[:max_per_axiom]]
    xr = np.arange(S.size)
    bad = np.flatnonzero(act[H.identity[a], xr] != xr)
    viol += [Violation("unit", (int(x),)) for x in bad[:max_per_axiom]]
    found = []
    for h in range(H.n_arrows):
        xs_h = np.flatnonzero(should[h])
        ks = H.arrows_from(int(H.tgt[h]))
        if xs_h.size == 0 or ks.size == 0:
            continue
        y = act[h, xs_h]
        lhs = np.where((a[y] == H.tgt[h])[None, :], act[ks][:, y], UNDEFINED)
        rhs = act[H.comp[ks, h]][:, xs_h]
        for i, j in np.argwhere(lhs != rhs):
            found.append((int(ks[i]), h, int(xs_h[j])))
    found.sort()
    viol += [Violation("associativity", w) for w in found[:max_per_axiom]]
    return viol


def regular_right_set(G: FiniteGroupoid) -> RightGroupoidSet:
    """The arrows of ``G`` anchored by ``src``, acted on by right composition."""
    return RightGroupoidSet(G, G.arrows, G.src, G.comp)


def regular_left_set(G: FiniteGroupoid) -> LeftGroupoidSet:
    return LeftGroupoidSet(G, G.arrows, G.tgt, G.comp)


def translation_groupoid(S: RightGroupoidSet) -> FiniteGroupoid:
    """Objects ``X``; arrows ``(x, g)`` with ``anchor(x) = tgt(g)`` running from ``x·g`` to ``x``."""
    G, a, act = S.groupoid, S.anchor, S.action
    xs, gs = np.nonzero(a[:, None] == G.tgt[None, :])
    M = xs.size
    lookup = np.full((S.size, G.n_arrows), UNDEFINED, dtype=np.int64)
    lookup[xs, gs] = np.arange(M)
    keys = [(int(x), int(g)) for x, g in zip(xs, gs)]
    return FiniteGroupoid.from_blocks(
        S.carrier, keys,
        src=act[xs, gs],
        tgt=xs,
        identity=lookup[np.arange(S.size), G.identity[a]] if S.size else [],
        inv=lookup[act[xs, gs], G.inv[gs]],
        mul_block=lambda A, B: lookup[xs[A][:, None], G.comp[gs[A][:, None], gs[B][None, :]]],
    )


def _partition(n: int, edges_a, edges_b) -> list[tuple[int, ...]]:
    if n == 0:
        return []
    graph = coo_matrix((np.ones(len(edges_a)), (edges_a, edges_b)), shape=(n, n))
    _, labels = _cc(graph, directed=False)
    blocks: dict[int, list[int]] = {}
    for x, lab in enumerate(labels):
        blocks.setdefault(int(lab), []).append(x)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])


def orbit_set(S: RightGroupoidSet) -> list[tuple[int, ...]]:
    """Orbits of a right groupoid-set, read off its translation groupoid."""
    return connected_components(translation_groupoid(S))


def left_orbits(B: Biset) -> list[tuple[int, ...]]:
    hs, xs = np.nonzero(B.left_action >= 0)
    return _partition(B.size, xs, B.left_action[hs, xs])


def right_orbits(B: Biset) -> list[tuple[int, ...]]:
    xs, gs = np.nonzero(B.right_action >= 0)
    return _partition(B.size, xs, B.right_action[xs, gs])


def two_sided_orbits(B: Biset) -> list[tuple[int, ...]]:
    hs, xs = np.nonzero(B.left_action >= 0)
    ys, gs = np.nonzero(B.right_action >= 0)
    return _partition(B.size, np.concatenate([xs, ys]),
                      np.concatenate([B.left_action[hs, xs], B.right_action[ys, gs]]))


# -- bisets -------------------------------------------------------------------


def validate_biset(B: Biset, max_per_axiom: int = 25) -> list[Violation]:
    """Check both one-sided actions, then the compatibility conditions.

    One-sided failures are returned (prefixed ``left-``/``right-``) without
    checking compatibility.
    """
    viol = [Violation("left-" + v.axiom, v.witness) for v in validate_left_action(B.left_set, max_per_axiom)]
    viol += [Violation("right-" + v.axiom, v.witness) for v in validate_right_action(B.right_set, max_per_axiom)]
    if viol:
        return viol
    H, G = B.left, B.right
    L, R = B.left_action, B.right_action
    xs, gs = np.nonzero(R >= 0)
    bad = np.flatnonzero(B.left_anchor[R[xs, gs]] != B.left_anchor[xs])
    viol += [Violation("left-anchor-invariance", (int(xs[i]), int(gs[i]))) for i in bad[:max_per_axiom]]
    hs, ys = np.nonzero(L >= 0)
    bad = np.flatnonzero(B.right_anchor[L[hs, ys]] != B.right_anchor[ys])
    viol += [Violation("right-anchor-invariance", (int(hs[i]), int(ys[i]))) for i in bad[:max_per_axiom]]
    if viol:
        return viol
    found = []
    for x in range(B.size):
        hs = H.arrows_from(int(B.left_anchor[x]))
        gs = G.arrows_to(int(B.right_anchor[x]))
        if hs.size == 0 or gs.size == 0:
            continue
        lhs = L[hs][:, R[x, gs]]  # h·(x·g)
        rhs = R[L[hs, x]][:, gs]  # (h·x)·g
        for i, j in np.argwhere(lhs != rhs):
            found.append((int(hs[i]), x, int(gs[j])))
    found.sort()
    viol += [Violation("commutation", w) for w in found[:max_per_axiom]]
    return viol


def unit_biset(G: FiniteGroupoid) -> Biset:
    """``G`` acting on its own arrows by composition on both sides."""
    return Biset(G, G, G.arrows, G.tgt, G.src, G.comp, G.comp)


def biset_from_left_set(S: LeftGroupoidSet) -> Biset:
    """View a left set as a biset with the trivial group acting trivially on the right."""
    T = trivial_group()
    return Biset(S.groupoid, T, S.carrier, S.anchor, np.zeros(S.size, np.int64), S.action,
                 np.arange(S.size).reshape(-1, 1))


def biset_from_right_set(S: RightGroupoidSet) -> Biset:
    T = trivial_group()
    return Biset(T, S.groupoid, S.carrier, np.zeros(S.size, np.int64), S.anchor,
                 np.arange(S.size).reshape(1, -1), S.action)


def two_sided_translation_groupoid(B: Biset) -> FiniteGroupoid:
    """Objects ``X``; arrows ``(h, x, g)`` with ``src(h) = left_anchor(x)`` and
    ``src(g) = right_anchor(x)``, running from ``x`` to ``h·x·g^{-1}``.
    """
    H, G = B.left, B.right
    L, R = B.left_action, B.right_action
    triples = []
    for x in range(B.size):
        hs = H.arrows_from(int(B.left_anchor[x]))
        gs = G.arrows_from(int(B.right_anchor[x]))
        if hs.size and gs.size:
            hh, gg = np.meshgrid(hs, gs, indexing="ij")
            triples.append(np.stack([hh.ravel(), np.full(hh.size, x), gg.ravel()], 1))
    if triples:
        T = np.concatenate(triples)
    else:
        T = np.zeros((0, 3), dtype=np.int64)
    Ah, Ax, Ag = T[:, 0], T[:, 1], T[:, 2]
    M = T.shape[0]
    lookup = np.full((H.n_arrows, B.size, G.n_arrows), UNDEFINED, dtype=np.int64)
    lookup[Ah, Ax, Ag] = np.arange(M)
    tgt = L[Ah, R[Ax, G.inv[Ag]]] if M else np.zeros(0, np.int64)
    xr = np.arange(B.size)
    ident = lookup[H.identity[B.left_anchor], xr, G.identity[B.right_anchor]] if B.size else []
    keys = [(int(h), int(x), int(g)) for h, x, g in T]
    return FiniteGroupoid.from_blocks(
        B.carrier, keys,
        src=Ax,
        tgt=tgt,
        identity=ident,
        inv=lookup[H.inv[Ah], tgt, G.inv[Ag]] if M else [],
        mul_block=lambda P, Q: lookup[H.comp[Ah[P][:, None], Ah[Q][None, :]],
                                      Ax[Q][None, :].repeat(P.size, 0),
                                      G.comp[Ag[P][:, None], Ag[Q][None, :]]],
    )


def sigma_morphism(B: Biset, T: FiniteGroupoid | None = None) -> GroupoidMorphism:
    """Projection of the two-sided translation groupoid onto the right groupoid."""
    T = two_sided_translation_groupoid(B) if T is None else T
    return GroupoidMorphism(T, B.right, B.right_anchor, [k[2] for k in T.arrows])


def theta_morphism(B: Biset, T: FiniteGroupoid | None = None) -> GroupoidMorphism:
    """Projection of the two-sided translation groupoid onto the left groupoid."""
    T = two_sided_translation_groupoid(B) if T is None else T
    return GroupoidMorphism(T, B.left, B.left_anchor, [k[0] for k in T.arrows])


# -- principality -------------------------------------------------------------


def left_division(B: Biset):
    """Invert ``(h, x) -> (h·x, x)`` by enumeration.

    Returns ``(delta, nabla_inv, None)`` when the map is a bijection onto
    pairs with equal right anchors, else ``(None, None, counterexample)``.
    """
    H = B.left
    delta = np.full((B.size, B.size), UNDEFINED, dtype=np.int64)
    nabla_inv = {}
    ra = B.right_anchor
    for y in range(B.size):
        hs = H.arrows_from(int(B.left_anchor[y]))
        xs = B.left_action[hs, y]
        order = np.argsort(xs, kind="stable")
        dup = np.flatnonzero(np.diff(xs[order]) == 0)
        if dup.size:
            i, j = order[dup[0]], order[dup[0] + 1]
            return None, None, ("not injective", (int(hs[i]), y), (int(hs[j]), y))
        missing = np.setdiff1d(np.flatnonzero(ra == ra[y]), xs)
        if missing.size:
            return None, None, ("not surjective", (int(missing[0]), y))
        delta[xs, y] = hs
        for x, h in zip(xs, hs):
            nabla_inv[(int(x), y)] = (int(h), y)
    return delta, nabla_inv, None


def right_division(B: Biset):
    """Invert ``(x, g) -> (x, x·g)`` by enumeration; mirror of :func:`left_division`."""
    G = B.right
    delta = np.full((B.size, B.size), UNDEFINED, dtype=np.int64)
    nabla_inv = {}
    la = B.left_anchor
    for x in range(B.size):
        gs = G.arrows_to(int(B.right_anchor[x]))
        ys = B.right_action[x, gs]
        order = np.argsort(ys, kind="stable")
        dup = np.flatnonzero(np.diff(ys[order]) == 0)
        if dup.size:
            i, j = order[dup[0]], order[dup[0] + 1]
            return None, None, ("not injective", (x, int(gs[i])), (x, int(gs[j])))
        missing = np.setdiff1d(np.flatnonzero(la == la[x]), ys)
        if missing.size:
            return None, None, ("not surjective", (x, int(missing[0])))
        delta[x, ys] = gs
        for y, g in zip(ys, gs):
            nabla_inv[(x, int(y))] = (x, int(g))
    return delta, nabla_inv, None


def _principal(B: Biset, side: str) -> Verdict:
    anchor, n = (B.right_anchor, B.right.n_objects) if side == "left" else (B.left_anchor, B.left.n_objects)
    hit = np.zeros(n, dtype=bool)
    hit[anchor] = True
    if not hit.all():
        y = int(np.flatnonzero(~hit)[0])
        return Verdict(False, counterexample=("object not in the image", y), reason="P-1")
    delta, nabla_inv, bad = (left_division if side == "left" else right_division)(B)
    if bad is not None:
        return Verdict(False, counterexample=bad, reason="P-2")
    W = PrincipalityWitness(side, nabla_inv, delta)
    problems = check_principality_witness(B, W)
    if problems:
        raise AssertionError(f"internal error: division map fails re-check: {problems[:3]}")
    return Verdict(True, evidence=W)


def check_left_principal(B: Biset) -> Verdict:
    """Right anchor surjective and ``(h, x) -> (h·x, x)`` bijective onto pairs
    with equal right anchors.

    On success the evidence is a :class:`PrincipalityWitness` whose division
    map has been re-verified.  On failure ``reason`` is ``"P-1"`` or
    ``"P-2"`` and ``counterexample`` locates the defect.
    """
    return _principal(B, "left")


def check_right_principal(B: Biset) -> Verdict:
    """Left anchor surjective and ``(x, g) -> (x, x·g)`` bijective onto pairs
    with equal left anchors."""
    return _principal(B, "right")


def is_principal(B: Biset) -> bool:
    return bool(check_left_principal(B)) and bool(check_right_principal(B))


def check_principality_witness(B: Biset, W: PrincipalityWitness) -> list[str]:
    """Re-verify a division map from the biset tables alone.

    Left side: ``src(delta(x,y)) = left_anchor(y)``, ``delta(x,y)·y = x`` and
    ``delta(h·x, x) = h``; plus freeness of the action.  The right side is
    the mirror image.
    """
    problems = []
    H, G = B.left, B.right
    L, R = B.left_action, B.right_action
    d = W.delta
    if W.side == "left":
        same = B.right_anchor[:, None] == B.right_anchor[None, :]
        if not np.array_equal(d >= 0, same):
            problems.append("delta is not defined exactly on pairs with equal right anchor")
            return problems
        xs, ys = np.nonzero(same)
        h = d[xs, ys]
        if (H.src[h] != B.left_anchor[ys]).any():
            problems.append("d1: src(delta(x,y)) != left_anchor(y)")
        if (L[h, ys] != xs).any():
            problems.append("d2: delta(x,y)·y != x")
        hs, zs = np.nonzero(L >= 0)
        if (d[L[hs, zs], zs] != hs).any():
            problems.append("d3: delta(h·x, x) != h")
        fixed = L[hs, zs] == zs
        if (hs[fixed] != H.identity[B.left_anchor[zs[fixed]]]).any():
            problems.append("left action is not free")
        for (x, y), (hh, yy) in W.nabla_inv.items():
            if yy != y or d[x, y] != hh:
                problems.append(f"nabla_inv disagrees with delta at {(x, y)}")
                break
        if len(W.nabla_inv) != xs.size:
            problems.append("nabla_inv is not total")
    else:
        same = B.left_anchor[:, None] == B.left_anchor[None, :]
        if not np.array_equal(d >= 0, same):
            problems.append("delta is not defined exactly on pairs with equal left anchor")
            return problems
        xs, ys = np.nonzero(same)
        g = d[xs, ys]
        if (G.tgt[g] != B.right_anchor[xs]).any():
            problems.append("d1: tgt(delta(x,y)) != right_anchor(x)")
        if (R[xs, g] != ys).any():
            problems.append("d2: x·delta(x,y) != y")
        zs, gs = np.nonzero(R >= 0)
        if (d[zs, R[zs, gs]] != gs).any():
            problems.append("d3: delta(x, x·g) != g")
        fixed = R[zs, gs] == zs
        if (gs[fixed] != G.identity[B.right_anchor[zs[fixed]]]).any():
            problems.append("right action is not free")
        for (x, y), (xx, gg) in W.nabla_inv.items():
            if xx != x or d[x, y] != gg:
                problems.append(f"nabla_inv disagrees with delta at {(x, y)}")
                break
        if len(W.nabla_inv) != xs.size:
            problems.append("nabla_inv is not total")
    return problems


def check_orbit_bijection(B: Biset, side: str = "left") -> bool:
    """For a left principal biset the right anchor induces a bijection from
    left orbits onto the right groupoid's objects (mirror for ``"right"``)."""
    if side == "left":
        orbits, anchor, n = left_orbits(B), B.right_anchor, B.right.n_objects
    else:
        orbits, anchor, n = right_orbits(B), B.left_anchor, B.left.n_objects
    images = []
    for orb in orbits:
        vals = set(int(anchor[x]) for x in orb)
        if len(vals) != 1:
            return False
        images.append(vals.pop())
    return sorted(images) == list(range(n))


# -- constructions on bisets --------------------------------------------------


def pullback_biset(B: Biset, psi: GroupoidMorphism) -> Biset:
    """Pull an ``(H, G)``-biset back along ``psi: K -> G``.

    The carrier is the pairs ``(x, u)`` with ``right_anchor(x) = psi0(u)``;
    ``h·(x, u) = (h·x, u)`` and ``(x, u)·f = (x·psi1(f), src(f))``.
    """
    if not psi.target.same_tables(B.right):
        raise StructuralError("pull-back morphism does not land in the right groupoid")
    K = psi.source
    pairs = [(x, u) for x in range(B.size) for u in range(K.n_objects) if B.right_anchor[x] == psi.f0[u]]
    idx = np.full((B.size, K.n_objects), UNDEFINED, dtype=np.int64)
    for i, (x, u) in enumerate(pairs):
        idx[x, u] = i
    P = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    px, pu = P[:, 0], P[:, 1]
    Y = len(pairs)
    left = np.full((B.left.n_arrows, Y), UNDEFINED, dtype=np.int64)
    hx = B.left_action[:, px]
    ok = hx >= 0
    left[ok] = idx[hx[ok], np.broadcast_to(pu, hx.shape)[ok]]
    right = np.full((Y, K.n_arrows), UNDEFINED, dtype=np.int64)
    ys, fs = np.nonzero(pu[:, None] == K.tgt[None, :])
    right[ys, fs] = idx[B.right_action[px[ys], psi.f1[fs]], K.src[fs]]
    return Biset(B.left, K, pairs, B.left_anchor[px], pu, left, right)


def opposite_biset(B: Biset) -> Biset:
    """The ``(G, H)``-biset on the same carrier with actions through inverses:
    ``g ⋆ x = x·g^{-1}`` and ``x ⋆ h = h^{-1}·x``."""
    return Biset(
        B.right, B.left, B.carrier, B.right_anchor, B.left_anchor,
        B.right_action[:, B.right.inv].T, B.left_action[B.left.inv, :].T,
    )


def tensor_biset(B1: Biset, B2: Biset) -> Biset:
    """Contracted product of an ``(H, G)``-biset and a ``(G, K)``-biset.

    Pairs ``(x, x')`` with ``right_anchor(x) = left_anchor(x')`` are
    identified along ``(x, x')·g = (x·g, g^{-1}·x')``; each class is
    represented by its least pair.
    """
    if not B1.right.same_tables(B2.left):
        raise StructuralError("middle groupoids differ")
    G = B1.right
    xs, zs = np.nonzero(B1.right_anchor[:, None] == B2.left_anchor[None, :])
    N = xs.size
    idx = np.full((B1.size, B2.size), UNDEFINED, dtype=np.int64)
    idx[xs, zs] = np.arange(N)
    # G-action edges on the fibre product
    pi, gi = np.nonzero(B1.right_anchor[xs][:, None] == G.tgt[None, :])
    a = idx[B1.right_action[xs[pi], gi], B2.left_action[G.inv[gi], zs[pi]]]
    classes = _partition(N, pi, a)
    cls_of = np.empty(N, dtype=np.int64)
    for c, block in enumerate(classes):
        cls_of[list(block)] = c
    reps = np.array([b[0] for b in classes], dtype=np.int64)
    C = len(classes)
    rx, rz = xs[reps], zs[reps]
    left = np.full((B1.left.n_arrows, C), UNDEFINED, dtype=np.int64)
    hx = B1.left_action[:, rx]
    ok = hx >= 0
    left[ok] = cls_of[idx[hx[ok], np.broadcast_to(rz, hx.shape)[ok]]]
    right = np.full((C, B2.right.n_arrows), UNDEFINED, dtype=np.int64)
    zk = B2.right_action[rz, :]
    ok = zk >= 0
    right[ok] = cls_of[idx[np.broadcast_to(rx[:, None], zk.shape)[ok], zk[ok]]]
    keys = [(int(x), int(z)) for x, z in zip(rx, rz)]
    return Biset(B1.left, B2.right, keys, B1.left_anchor[rx], B2.right_anchor[rz], left, right)


# -- equivariant maps ---------------------------------------------------------


def validate_biset_morphism(F: EquivariantMap, max_per_axiom: int = 25) -> list[Violation]:
    """Check that ``F`` preserves both anchors and both actions.

    When source and target are both left principal, a non-bijective ``F``
    is reported as ``"not-bijective"``: every morphism between left
    principal bisets must be an isomorphism.
    """
    S, T, f = F.source, F.target, F.mapping
    if not (S.left.same_tables(T.left) and S.right.same_tables(T.right)):
        raise StructuralError("source and target bisets are over different groupoids")
    viol: list[Violation] = []
    xr = np.arange(S.size)
    for x in xr[T.right_anchor[f] != S.right_anchor][:max_per_axiom]:
        viol.append(Violation("right-anchor", (int(x),)))
    for x in xr[T.left_anchor[f] != S.left_anchor][:max_per_axiom]:
        viol.append(Violation("left-anchor", (int(x),)))
    anchors_ok = not viol
    xs, gs = np.nonzero(S.right_action >= 0)
    if xs.size:
        img = T.right_action[f[xs], gs]
        bad = np.flatnonzero(img != f[S.right_action[xs, gs]])
        viol += [Violation("right-action", (int(xs[i]), int(gs[i]))) for i in bad[:max_per_axiom]]
    hs, ys = np.nonzero(S.left_action >= 0)
    if hs.size:
        img = T.left_action[hs, f[ys]]
        bad = np.flatnonzero(img != f[S.left_action[hs, ys]])
        viol += [Violation("left-action", (int(hs[i]), int(ys[i]))) for i in bad[:max_per_axiom]]
    if anchors_ok and not viol and not F.is_bijective():
        if check_left_principal(S) and check_left_principal(T):
            viol.append(Violation("not-bijective", ()))
    return viol


def _orbit_propagate(S: Biset, T: Biset, orbit: Sequence[int], rep: int, image: int) -> dict | None:
    H, G = S.left, S.right
    fmap = {rep: image}
    stack = [rep]
    while stack:
        x = stack.pop()
        y = fmap[x]
        for h in H.arrows_from(int(S.left_anchor[x])):
            a, b = int(S.left_action[h, x]), int(T.left_action[h, y])
            if b < 0:
                return None
            if a in fmap:
                if fmap[a] != b:
                    return None
            else:
                fmap[a] = b
                stack.append(a)
        for g in G.arrows_to(int(S.right_anchor[x])):
            a, b = int(S.right_action[x, g]), int(T.right_action[y, g])
            if b < 0:
                return None
            if a in fmap:
                if fmap[a] != b:
                    return None
            else:
                fmap[a] = b
                stack.append(a)
    for x, y in fmap.items():
        if S.left_anchor[x] != T.left_anchor[y] or S.right_anchor[x] != T.right_anchor[y]:
            return None
    return fmap


def iter_equivariant_maps(S: Biset, T: Biset, injective: bool = False) -> Iterator[EquivariantMap]:
    """Enumerate every biset morphism ``S -> T``.

    A morphism is fixed on each two-sided orbit by the image of one point,
    so the search tries each anchor-compatible image per orbit and
    propagates it through the actions.
    """
    if not (S.left.same_tables(T.left) and S.right.same_tables(T.right)):
        raise StructuralError("bisets over different groupoids")
    orbits = two_sided_orbits(S)
    options = []
    for orb in orbits:
        rep = orb[0]
        cands = np.flatnonzero((T.left_anchor == S.left_anchor[rep]) & (T.right_anchor == S.right_anchor[rep]))
        opts = []
        for y in cands:
            fm = _orbit_propagate(S, T, orb, rep, int(y))
            if fm is not None and (not injective or len(set(fm.values())) == len(fm)):
                opts.append(fm)
        if not opts:
            return
        options.append(opts)

    mapping = np.empty(S.size, dtype=np.int64)

    def rec(i, used):
        if i == len(options):
            yield EquivariantMap(S, T, mapping.copy())
            return
        for fm in options[i]:
            vals = set(fm.values())
            if injective and vals & used:
                continue
            for x, y in fm.items():
                mapping[x] = y
            yield from rec(i + 1, used | vals if injective else used)

    yield from rec(0, set())


def find_biset_isomorphism(S: Biset, T: Biset) -> EquivariantMap | None:
    if S.size != T.size:
        return None
    for F in iter_equivariant_maps(S, T, injective=True):
        return F
    return None

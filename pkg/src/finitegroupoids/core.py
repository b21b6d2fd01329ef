"""Finite groupoids as explicit tables.

A groupoid is stored with dense integer ids for objects and arrows.  The
composition table follows one orientation everywhere: ``comp[g, f]`` is the
composite "g after f" and is defined exactly when ``src[g] == tgt[f]``.
Undefined entries hold ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Hashable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

UNDEFINED = -1


class GroupoidError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(GroupoidError, ValueError):
    """A table has the wrong shape or an index out of range."""


class CompositionError(GroupoidError, ValueError):
    """Two arrows that are not composable were composed."""


class PreconditionError(GroupoidError, ValueError):
    """An input violates the precondition of an operation."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class SearchRefused(GroupoidError):
    """An exhaustive computation was refused because the input is too large."""


class Violation(NamedTuple):
    axiom: str
    witness: tuple


@dataclass(frozen=True)
class Verdict:
    """Outcome of a yes/no check together with its evidence.

    ``evidence`` is populated when the property holds, ``counterexample``
    when it fails.  Truthiness follows ``holds``.
    """

    holds: bool
    evidence: Any = None
    counterexample: Any = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _frozen(a, dtype=np.int64) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """A finite groupoid given by its structure tables.

    ``objects`` and ``arrows`` are display keys (any hashables, unique);
    every semantic operation works with the integer position of a key.
    """

    objects: tuple
    arrows: tuple
    src: np.ndarray
    tgt: np.ndarray
    identity: np.ndarray
    comp: np.ndarray
    inv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        n, m = len(self.objects), len(self.arrows)
        for name in ("src", "tgt", "identity", "inv"):
            object.__setattr__(self, name, _frozen(np.asarray(getattr(self, name)).reshape(-1)))
        comp = np.asarray(self.comp)
        if comp.size == 0:
            comp = np.full((m, m), UNDEFINED)
        object.__setattr__(self, "comp", _frozen(comp))

        def check(name, arr, shape, lo, hi):
            if arr.shape != shape:
                raise StructuralError(f"{name} has shape {arr.shape}, expected {shape}")
            if arr.size and (arr.min() < lo or arr.max() >= hi):
                bad = int(np.flatnonzero((arr.reshape(-1) < lo) | (arr.reshape(-1) >= hi))[0])
                raise StructuralError(
                    f"{name} entry {np.unravel_index(bad, shape)} = {arr.reshape(-1)[bad]} out of range [{lo}, {hi})"
                )

        check("src", self.src, (m,), 0, n)
        check("tgt", self.tgt, (m,), 0, n)
        check("identity", self.identity, (n,), 0, m)
        check("inv", self.inv, (m,), 0, m)
        check("comp", self.comp, (m, m), UNDEFINED, m)
        if len(set(self.objects)) != n:
            raise StructuralError("object keys are not unique")
        if len(set(self.arrows)) != m:
            raise StructuralError("arrow keys are not unique")

    # -- sizes and lookups -------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @cached_property
    def object_index(self) -> dict:
        return {k: i for i, k in enumerate(self.objects)}

    @cached_property
    def arrow_index(self) -> dict:
        return {k: i for i, k in enumerate(self.arrows)}

    @cached_property
    def _out(self) -> tuple:
        # arrows grouped by source object, ascending ids
        order = np.argsort(self.src, kind="stable")
        bounds = np.searchsorted(self.src[order], np.arange(self.n_objects + 1))
        return tuple(order[bounds[i]:bounds[i + 1]] for i in range(self.n_objects))

    @cached_property
    def _in(self) -> tuple:
        order = np.argsort(self.tgt, kind="stable")
        bounds = np.searchsorted(self.tgt[order], np.arange(self.n_objects + 1))
        return tuple(order[bounds[i]:bounds[i + 1]] for i in range(self.n_objects))

    def arrows_from(self, x: int) -> np.ndarray:
        """Arrow ids with source ``x``."""
        return self._out[x]

    def arrows_to(self, x: int) -> np.ndarray:
        """Arrow ids with target ``x``."""
        return self._in[x]

    def hom(self, x: int, y: int) -> np.ndarray:
        """Arrow ids from ``x`` to ``y``."""
        out = self._out[x]
        return out[self.tgt[out] == y]

    def __len__(self) -> int:
        return self.n_arrows

    def __repr__(self) -> str:
        return f"{type(self).__name__}(objects={self.n_objects}, arrows={self.n_arrows})"

    # -- table-level equality ----------------------------------------------

    def same_tables(self, other: "FiniteGroupoid") -> bool:
        if self is other:
            return True
        return (
            self.n_objects == other.n_objects
            and self.n_arrows == other.n_arrows
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.tgt, other.tgt)
            and np.array_equal(self.identity, other.identity)
            and np.array_equal(self.inv, other.inv)
            and np.array_equal(self.comp, other.comp)
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            self.same_tables(other)
            and [str(k) for k in self.objects] == [str(k) for k in other.objects]
            and [str(k) for k in self.arrows] == [str(k) for k in other.arrows]
        )

    def __hash__(self):
        return hash((self.n_objects, self.n_arrows, self.comp.tobytes()))

    # -- building ----------------------------------------------------------

    @classmethod
    def from_rules(cls, objects: Sequence[Hashable], arrows: Sequence[Hashable], src, tgt,
                   identity, inv, mul) -> "FiniteGroupoid":
        """Assemble a groupoid from per-arrow data and a multiplication rule.

        ``src``, ``tgt``, ``inv`` are sequences of ids, ``identity`` maps each
        object id to an arrow id and ``mul(g, f)`` returns the id of the
        composite for every composable pair.
        """
        m = len(arrows)
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        tgt = np.asarray(tgt, dtype=np.int64).reshape(-1)
        comp = np.full((m, m), UNDEFINED, dtype=np.int64)
        by_src: dict[int, list[int]] = {}
        for g in range(m):
            by_src.setdefault(int(src[g]), []).append(g)
        by_tgt: dict[int, list[int]] = {}
        for f in range(m):
            by_tgt.setdefault(int(tgt[f]), []).append(f)
        for x, gs in by_src.items():
            fs = by_tgt.get(x, ())
            for g in gs:
                row = comp[g]
                for f in fs:
                    row[f] = mul(g, f)
        return cls(objects, arrows, src, tgt, identity, comp, inv)

    @classmethod
    def from_blocks(cls, objects: Sequence[Hashable], arrows: Sequence[Hashable], src, tgt,
                    identity, inv, mul_block) -> "FiniteGroupoid":
        """Vectorized variant of :meth:`from_rules`.

        ``mul_block(gs, fs)`` receives the arrays of arrows leaving and
        entering one object and returns the ``len(gs) x len(fs)`` block of
        composites.
        """
        m = len(arrows)
        n = len(objects)
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        tgt = np.asarray(tgt, dtype=np.int64).reshape(-1)
        comp = np.full((m, m), UNDEFINED, dtype=np.int64)
        out_order = np.argsort(src, kind="stable")
        out_b = np.searchsorted(src[out_order], np.arange(n + 1))
        in_order = np.argsort(tgt, kind="stable")
        in_b = np.searchsorted(tgt[in_order], np.arange(n + 1))
        for x in range(n):
            gs = out_order[out_b[x]:out_b[x + 1]]
            fs = in_order[in_b[x]:in_b[x + 1]]
            if gs.size and fs.size:
                comp[np.ix_(gs, fs)] = mul_block(gs, fs)
        return cls(objects, arrows, src, tgt, identity, comp, inv)


@dataclass(frozen=True, eq=False, repr=False)
class FiniteGroup(FiniteGroupoid):
    """A groupoid with exactly one object."""

    def __post_init__(self):
        super().__post_init__()
        if self.n_objects != 1:
            raise StructuralError(f"a group has one object, got {self.n_objects}")

    @property
    def neutral(self) -> int:
        return int(self.identity[0])

    @property
    def order(self) -> int:
        return self.n_arrows

    def mul(self, a: int, b: int) -> int:
        return int(self.comp[a, b])

    def element_order(self, a: int) -> int:
        k, p = 1, a
        while p != self.neutral:
            p = int(self.comp[p, a])
            k += 1
        return k

    @classmethod
    def from_groupoid(cls, G: FiniteGroupoid) -> "FiniteGroup":
        return cls(G.objects, G.arrows, G.src, G.tgt, G.identity, G.comp, G.inv)


@dataclass(frozen=True, eq=False)
class GroupoidMorphism:
    """A functor between finite groupoids given by its object and arrow maps."""

    source: FiniteGroupoid
    target: FiniteGroupoid
    f0: np.ndarray
    f1: np.ndarray

    def __post_init__(self):
        f0 = _frozen(np.asarray(self.f0).reshape(-1))
        f1 = _frozen(np.asarray(self.f1).reshape(-1))
        object.__setattr__(self, "f0", f0)
        object.__setattr__(self, "f1", f1)
        if f0.shape != (self.source.n_objects,):
            raise StructuralError(f"object map has length {f0.size}, expected {self.source.n_objects}")
        if f1.shape != (self.source.n_arrows,):
            raise StructuralError(f"arrow map has length {f1.size}, expected {self.source.n_arrows}")
        if f0.size and (f0.min() < 0 or f0.max() >= self.target.n_objects):
            raise StructuralError("object map leaves the target object range")
        if f1.size and (f1.min() < 0 or f1.max() >= self.target.n_arrows):
            raise StructuralError("arrow map leaves the target arrow range")

    def same_tables(self, other: "GroupoidMorphism") -> bool:
        return (
            np.array_equal(self.f0, other.f0)
            and np.array_equal(self.f1, other.f1)
            and self.source.same_tables(other.source)
            and self.target.same_tables(other.target)
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.source!r} -> {self.target!r})"


# -- validation --------------------------------------------------------------


def _cap(viol: list, axiom: str, rows, limit: int):
    for row in rows[:limit]:
        viol.append(Violation(axiom, tuple(int(v) for v in row)))


def validate_groupoid(G: FiniteGroupoid, max_per_axiom: int = 25) -> list[Violation]:
    """Check every groupoid axiom and return the violations found.

    Each axiom contributes at most ``max_per_axiom`` witnesses, the
    lexicographically smallest first.  An empty list means ``G`` is a groupoid.
    """
    viol: list[Violation] = []
    n, m = G.n_objects, G.n_arrows
    src, tgt, ident, comp, inv = G.src, G.tgt, G.identity, G.comp, G.inv
    objs = np.arange(n)
    arr = np.arange(m)

    bad = objs[(src[ident] != objs) | (tgt[ident] != objs)] if n else objs
    _cap(viol, "identity-typing", [(x, ident[x]) for x in bad], max_per_axiom)
    if m == 0:
        return viol

    composable = src[:, None] == tgt[None, :]
    defined = comp >= 0
    _cap(viol, "composition-domain", np.argwhere(composable != defined), max_per_axiom)

    gs, fs = np.nonzero(composable & defined)
    gf = comp[gs, fs]
    wrong = (src[gf] != src[fs]) | (tgt[gf] != tgt[gs])
    _cap(viol, "composition-typing", np.stack([gs, fs, gf], 1)[wrong], max_per_axiom)

    li = ident[tgt]
    left = comp[li, arr]
    _cap(viol, "left-unit", np.stack([li, arr], 1)[left != arr], max_per_axiom)
    ri = ident[src]
    right = comp[arr, ri]
    _cap(viol, "right-unit", np.stack([arr, ri], 1)[right != arr], max_per_axiom)

    inv_typed = (src[inv] == tgt) & (tgt[inv] == src)
    _cap(viol, "inverse-typing", np.stack([arr, inv], 1)[~inv_typed], max_per_axiom)
    ok = (comp[arr, inv] == ident[tgt]) & (comp[inv, arr] == ident[src])
    _cap(viol, "inverse-law", np.stack([arr, inv], 1)[~ok], max_per_axiom)

    found = []
    for g in range(m):
        hs = np.flatnonzero(src == tgt[g])
        fs_ = np.flatnonzero(tgt == src[g])
        if hs.size == 0 or fs_.size == 0:
            continue
        hg = comp[hs, g]
        gfs = comp[g, fs_]
        lhs = np.where((hg >= 0)[:, None], comp[np.maximum(hg, 0)][:, fs_], UNDEFINED)
        rhs = np.where((gfs >= 0)[None, :], comp[hs[:, None], np.maximum(gfs, 0)[None, :]], UNDEFINED)
        diff = np.argwhere((lhs != rhs) | (lhs < 0))
        for i, j in diff:
            found.append((int(hs[i]), g, int(fs_[j])))
    found.sort()
    _cap(viol, "associativity", found, max_per_axiom)
    return viol


def confirms_violation(G: FiniteGroupoid, v: Violation) -> bool:
    """Re-evaluate a single reported violation from scratch.

    Returns True when the witness really does break the named axiom.
    """
    src, tgt, ident, comp, inv = G.src, G.tgt, G.identity, G.comp, G.inv

    def c(g, f):
        if g < 0 or f < 0:
            return UNDEFINED
        return int(comp[g, f])

    w = v.witness
    if v.axiom == "identity-typing":
        x, i = w
        return int(ident[x]) == i and (src[i] != x or tgt[i] != x)
    if v.axiom == "composition-domain":
        g, f = w
        return (src[g] == tgt[f]) != (comp[g, f] >= 0)
    if v.axiom == "composition-typing":
        g, f, gf = w
        return c(g, f) == gf and src[g] == tgt[f] and (src[gf] != src[f] or tgt[gf] != tgt[g])
    if v.axiom == "left-unit":
        i, f = w
        return int(ident[tgt[f]]) == i and c(i, f) != f
    if v.axiom == "right-unit":
        f, i = w
        return int(ident[src[f]]) == i and c(f, i) != f
    if v.axiom == "inverse-typing":
        g, gi = w
        return int(inv[g]) == gi and (src[gi] != tgt[g] or tgt[gi] != src[g])
    if v.axiom == "inverse-law":
        g, gi = w
        return int(inv[g]) == gi and (c(g, gi) != ident[tgt[g]] or c(gi, g) != ident[src[g]])
    if v.axiom == "associativity":
        h, g, f = w
        if src[h] != tgt[g] or src[g] != tgt[f]:
            return False
        lhs, rhs = c(c(h, g), f), c(h, c(g, f))
        return lhs != rhs or lhs < 0
    raise ValueError(f"unknown axiom {v.axiom!r}")


def validate_morphism(m: GroupoidMorphism, max_per_axiom: int = 25) -> list[Violation]:
    """Check that ``m`` is a functor; returns violations with witnesses."""
    H, G = m.source, m.target
    f0, f1 = m.f0, m.f1
    viol: list[Violation] = []
    arr = np.arange(H.n_arrows)
    objs = np.arange(H.n_objects)
    _cap(viol, "preserves-source", np.stack([arr, f1], 1)[G.src[f1] != f0[H.src]], max_per_axiom)
    _cap(viol, "preserves-target", np.stack([arr, f1], 1)[G.tgt[f1] != f0[H.tgt]], max_per_axiom)
    if H.n_objects:
        bad = f1[H.identity] != G.identity[f0]
        _cap(viol, "preserves-identity", np.stack([objs, f1[H.identity]], 1)[bad], max_per_axiom)
    _cap(viol, "preserves-inverse", np.stack([arr, f1[H.inv]], 1)[f1[H.inv] != G.inv[f1]], max_per_axiom)
    gs, fs = np.nonzero(H.comp >= 0)
    if gs.size:
        img = f1[H.comp[gs, fs]]
        lhs = G.comp[f1[gs], f1[fs]]
        bad = img != lhs
        _cap(viol, "preserves-composition", np.stack([gs, fs], 1)[bad], max_per_axiom)
    return viol


# -- elementary operations ---------------------------------------------------


def compose(G: FiniteGroupoid, g: int, f: int) -> int:
    """The composite "g after f"; requires ``src(g) == tgt(f)``."""
    if G.src[g] != G.tgt[f]:
        raise CompositionError(
            f"arrows {G.arrows[g]!r} and {G.arrows[f]!r} are not composable: "
            f"src(g)={G.objects[G.src[g]]!r} but tgt(f)={G.objects[G.tgt[f]]!r}"
        )
    return int(G.comp[g, f])


def inverse_of(G: FiniteGroupoid, g: int) -> int:
    return int(G.inv[g])


def isotropy_arrows(G: FiniteGroupoid, x: int) -> np.ndarray:
    """Ids of the loops at ``x`` in ascending order."""
    out = G.arrows_from(x)
    return np.sort(out[G.tgt[out] == x])


def subgroup_on(G: FiniteGroupoid, ids: Sequence[int]) -> FiniteGroup:
    """The group formed by the given loops at a single object, re-indexed."""
    ids = np.asarray(ids, dtype=np.int64)
    pos = np.full(G.n_arrows, UNDEFINED, dtype=np.int64)
    pos[ids] = np.arange(ids.size)
    x = int(G.src[ids[0]])
    sub = G.comp[np.ix_(ids, ids)]
    return FiniteGroup(
        objects=(G.objects[x],),
        arrows=[G.arrows[i] for i in ids],
        src=np.zeros(ids.size, dtype=np.int64),
        tgt=np.zeros(ids.size, dtype=np.int64),
        identity=[pos[G.identity[x]]],
        comp=pos[sub],
        inv=pos[G.inv[ids]],
    )


def isotropy_group(G: FiniteGroupoid, x: int) -> FiniteGroup:
    """The group of arrows from ``x`` to ``x``; keys are the arrows' keys in ``G``."""
    return subgroup_on(G, isotropy_arrows(G, x))


def orbit_of(G: FiniteGroupoid, x: int) -> frozenset:
    """Objects reached from ``x``: the targets of arrows with source ``x``."""
    return frozenset(int(y) for y in G.tgt[G.arrows_from(x)])


def orbit_of_by_sources(G: FiniteGroupoid, x: int) -> frozenset:
    """Same set as :func:`orbit_of`, computed as sources of arrows into ``x``."""
    return frozenset(int(y) for y in G.src[G.arrows_to(x)])


def connected_components(G: FiniteGroupoid) -> list[tuple[int, ...]]:
    """Partition of the objects into components, blocks ordered by least member."""
    n = G.n_objects
    if n == 0:
        return []
    graph = coo_matrix((np.ones(G.n_arrows), (G.src, G.tgt)), shape=(n, n))
    _, labels = _cc(graph, directed=False)
    blocks: dict[int, list[int]] = {}
    for x, lab in enumerate(labels):
        blocks.setdefault(int(lab), []).append(x)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])


def is_transitive(G: FiniteGroupoid) -> Verdict:
    """Whether every ordered pair of objects is joined by an arrow.

    Empty and one-object groupoids are transitive.  On failure the
    counterexample is a pair ``(x, y)`` with no arrow from ``x`` to ``y``.
    """
    n = G.n_objects
    hit = np.zeros((n, n), dtype=bool)
    hit[G.src, G.tgt] = True
    if hit.all():
        return Verdict(True)
    x, y = np.argwhere(~hit)[0]
    return Verdict(False, counterexample=(int(x), int(y)), reason="no arrow joins the pair")


def identity_morphism(G: FiniteGroupoid) -> GroupoidMorphism:
    return GroupoidMorphism(G, G, np.arange(G.n_objects), np.arange(G.n_arrows))


def compose_morphisms(n: GroupoidMorphism, m: GroupoidMorphism) -> GroupoidMorphism:
    """The functor "n after m"."""
    if not m.target.same_tables(n.source):
        raise CompositionError("morphisms are not composable: target of m differs from source of n")
    return GroupoidMorphism(m.source, n.target, n.f0[m.f0], n.f1[m.f1])


def relabel(G: FiniteGroupoid, object_perm: Sequence[int], arrow_perm: Sequence[int]) -> FiniteGroupoid:
    """Copy of ``G`` where object ``x`` gets id ``object_perm[x]`` and arrow ``a`` gets ``arrow_perm[a]``."""
    op = np.asarray(object_perm, dtype=np.int64)
    ap = np.asarray(arrow_perm, dtype=np.int64)
    n, m = G.n_objects, G.n_arrows
    objects = [None] * n
    arrows = [None] * m
    for x in range(n):
        objects[op[x]] = G.objects[x]
    for a in range(m):
        arrows[ap[a]] = G.arrows[a]
    src = np.empty(m, dtype=np.int64)
    tgt = np.empty(m, dtype=np.int64)
    inv = np.empty(m, dtype=np.int64)
    src[ap] = op[G.src]
    tgt[ap] = op[G.tgt]
    inv[ap] = ap[G.inv]
    ident = np.empty(n, dtype=np.int64)
    ident[op] = ap[G.identity]
    comp = np.full((m, m), UNDEFINED, dtype=np.int64)
    defined = G.comp >= 0
    gs, fs = np.nonzero(defined)
    comp[ap[gs], ap[fs]] = ap[G.comp[gs, fs]]
    return type(G)(objects, arrows, src, tgt, ident, comp, inv)

"""Executable forms of the transitivity results.

* :func:`verify_prop_grpd` compares, for every map ``varsigma: X -> G0``
  with ``|X|`` up to a bound, three verdicts: whether the canonical
  morphism ``G^varsigma -> G`` is a weak equivalence, and whether the
  pull-back of the unit biset along it is left and right principal.
* :func:`verify_prop_pb` certifies that both projections out of the
  two-sided translation groupoid of a principal biset are weak
  equivalences, and compares the certificates with closed formulas.
* :func:`conjugation_iso`, :func:`to_induced_form` and the principal
  group-set correspondence (:func:`groupoid_from_principal_gset`,
  :func:`principal_gset_from_groupoid`, :func:`ehresmann_roundtrip`).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bisets import (
    Biset,
    check_left_principal,
    check_orbit_bijection,
    check_principality_witness,
    check_right_principal,
    left_orbits,
    pullback_biset,
    right_division,
    sigma_morphism,
    theta_morphism,
    two_sided_translation_groupoid,
    unit_biset,
)
from .constructions import induced_groupoid
from .core import (
    UNDEFINED,
    FiniteGroup,
    FiniteGroupoid,
    GroupoidMorphism,
    PreconditionError,
    SearchRefused,
    StructuralError,
    Violation,
    _frozen,
    is_transitive,
    isotropy_arrows,
    isotropy_group,
)
from .isomorphism import DEFAULT_MAX_ARROWS, GroupoidIso, iter_group_homomorphisms
from .morphisms import WeCertificate, check_we_certificate, is_weak_equivalence


def _require_transitive(G: FiniteGroupoid):
    v = is_transitive(G)
    if not v:
        raise PreconditionError("groupoid is not transitive", v.counterexample)


# -- conjugation and induced form ----------------------------------------------


def conjugation_iso(G: FiniteGroupoid, g: int) -> GroupoidIso:
    """``h -> g h g^{-1}`` from the isotropy group at ``src(g)`` to the one at ``tgt(g)``."""
    a, b = int(G.src[g]), int(G.tgt[g])
    la, lb = isotropy_arrows(G, a), isotropy_arrows(G, b)
    pos = {int(k): i for i, k in enumerate(lb)}
    gi = G.inv[g]
    f1 = [pos[int(G.comp[G.comp[g, h], gi])] for h in la]
    iso = GroupoidIso(isotropy_group(G, a), isotropy_group(G, b), [0], f1)
    if iso.check():
        raise AssertionError("internal error: conjugation is not an isomorphism")
    return iso


def base_family(G: FiniteGroupoid, x: int) -> np.ndarray:
    """``f[y]``: the least arrow from ``y`` to ``x``, with ``f[x]`` the identity.

    Entries are ``-1`` for objects outside the component of ``x``.
    """
    f = np.full(G.n_objects, UNDEFINED, dtype=np.int64)
    for y in range(G.n_objects):
        hs = G.hom(y, x)
        if hs.size:
            f[y] = hs.min()
    f[x] = G.identity[x]
    return f


def to_induced_form(G: FiniteGroupoid, x: int) -> GroupoidIso:
    """Isomorphism of a transitive ``G`` onto the groupoid induced from its
    isotropy group at ``x`` along the constant map.

    ``g`` goes to ``(tgt(g), f[tgt(g)] g f[src(g)]^{-1}, src(g))`` where ``f``
    is :func:`base_family`.
    """
    _require_transitive(G)
    Gx = isotropy_group(G, x)
    loops = isotropy_arrows(G, x)
    pos = {int(k): i for i, k in enumerate(loops)}
    target, _ = induced_groupoid(Gx, [0] * G.n_objects, G.objects)
    f = base_family(G, x)
    idx = target.arrow_index
    f1 = []
    for g in range(G.n_arrows):
        s, t = int(G.src[g]), int(G.tgt[g])
        k = int(G.comp[G.comp[f[t], g], G.inv[f[s]]])
        f1.append(idx[(t, pos[k], s)])
    iso = GroupoidIso(G, target, np.arange(G.n_objects), f1)
    if iso.check():
        raise AssertionError("internal error: induced form is not an isomorphism")
    return iso


# -- principal group-sets ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class PrincipalGroupSet:
    """A left ``group``-set ``P`` with a projection ``pi: P -> M``.

    ``action[g, p]`` is ``g·p``; ``base`` labels the points of ``M``.
    """

    group: FiniteGroup
    carrier: tuple
    base: tuple
    pi: np.ndarray
    action: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "carrier", tuple(self.carrier))
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "pi", _frozen(np.asarray(self.pi).reshape(-1)))
        object.__setattr__(self, "action", _frozen(np.asarray(self.action).reshape(self.group.order, len(self.carrier))))
        P = len(self.carrier)
        if self.pi.shape != (P,) or (P and (self.pi.min() < 0 or self.pi.max() >= len(self.base))):
            raise StructuralError("projection table out of range")
        if self.action.size and (self.action.min() < 0 or self.action.max() >= P):
            raise StructuralError("action table out of range")

    @property
    def size(self) -> int:
        return len(self.carrier)


def validate_principal_gset(S: PrincipalGroupSet, max_per_axiom: int = 25) -> list[Violation]:
    """Action laws, then (P'1) ``pi`` surjective, (P'2) ``pi`` invariant and
    (P'3) ``(g, p) -> (g·p, p)`` bijective onto pairs in one fibre.

    The equivalent formulation (free action whose orbits are the fibres of
    ``pi``) is evaluated separately; disagreement is reported as
    ``"formulations-disagree"``.
    """
    G, act, pi = S.group, S.action, S.pi
    viol: list[Violation] = []
    pr = np.arange(S.size)
    for p in pr[act[G.neutral] != pr][:max_per_axiom]:
        viol.append(Violation("action-unit", (int(p),)))
    found = []
    for g in range(G.order):
        for h in range(G.order):
            bad = np.flatnonzero(act[g, act[h]] != act[G.comp[g, h]])
            found += [(g, h, int(p)) for p in bad]
            if len(found) >= max_per_axiom:
                break
        if len(found) >= max_per_axiom:
            break
    viol += [Violation("action-associativity", w) for w in found[:max_per_axiom]]
    hit = np.zeros(len(S.base), dtype=bool)
    hit[pi] = True
    for m in np.flatnonzero(~hit)[:max_per_axiom]:
        viol.append(Violation("P'1", (int(m),)))
    gs, ps = np.nonzero(pi[act] != pi[None, :])
    viol += [Violation("P'2", (int(g), int(p))) for g, p in zip(gs[:max_per_axiom], ps[:max_per_axiom])]
    # (P'3) by enumerating the canonical map
    p3 = []
    for p in range(S.size):
        images = act[:, p]
        order = np.argsort(images, kind="stable")
        dup = np.flatnonzero(np.diff(images[order]) == 0)
        if dup.size:
            p3.append(("not-injective", (int(order[dup[0]]), p), (int(order[dup[0] + 1]), p)))
        missing = np.setdiff1d(np.flatnonzero(pi == pi[p]), images)
        if missing.size:
            p3.append(("not-surjective", (int(missing[0]), p)))
        if len(p3) >= max_per_axiom:
            break
    viol += [Violation("P'3", w) for w in p3[:max_per_axiom]]
    if not any(v.axiom.startswith("action") for v in viol):
        # (P'2) and (P'3) together say: free action whose orbits are the fibres
        free = all(np.count_nonzero(act[:, p] == p) == 1 for p in range(S.size))
        orbits_are_fibres = all(
            set(act[:, p].tolist()) == set(np.flatnonzero(pi == pi[p]).tolist()) for p in range(S.size)
        )
        p23 = not p3 and not any(v.axiom == "P'2" for v in viol)
        if p23 != (free and orbits_are_fibres):
            viol.append(Violation("formulations-disagree", (free, orbits_are_fibres)))
    return viol


def _pair_classes(S: PrincipalGroupSet):
    """Orbits of ``P x P`` under the diagonal action; representative = least pair."""
    n = S.size
    cls = np.full((n, n), UNDEFINED, dtype=np.int64)
    reps = []
    for p in range(n):
        for q in range(n):
            if cls[p, q] >= 0:
                continue
            c = len(reps)
            reps.append((p, q))
            cls[S.action[:, p], S.action[:, q]] = c
    return cls, reps


def _division(S: PrincipalGroupSet) -> np.ndarray:
    """``div[a, b]``: the first group element ``g`` with ``g·b = a``."""
    n = S.size
    div = np.full((n, n), UNDEFINED, dtype=np.int64)
    for g in range(S.group.order - 1, -1, -1):
        div[S.action[g], np.arange(n)] = g
    return div


def groupoid_from_principal_gset(S: PrincipalGroupSet) -> FiniteGroupoid:
    """Transitive groupoid on ``M`` whose arrows are the diagonal orbits
    ``[(p, p')]`` of ``P x P``, running from ``pi(p')`` to ``pi(p)``.

    ``[(p, p')]`` after ``[(q, q')]`` is ``[(p, g·q')]`` for the element
    ``g`` carrying ``q`` to ``p'``.
    """
    cls, reps = _pair_classes(S)
    div = _division(S)
    R = np.array(reps, dtype=np.int64).reshape(-1, 2)
    a, b = R[:, 0], R[:, 1]
    ident = []
    for m in range(len(S.base)):
        fibre = np.flatnonzero(S.pi == m)
        if fibre.size == 0:
            raise PreconditionError("projection is not surjective", (m,))
        ident.append(cls[fibre[0], fibre[0]])

    def mul_block(A, B):
        g = div[b[A][:, None], a[B][None, :]]
        if (g < 0).any():
            raise PreconditionError("group-set is not principal: no element aligns representatives")
        return cls[a[A][:, None], S.action[g, b[B][None, :]]]

    keys = [(S.carrier[p], S.carrier[q]) for p, q in reps]
    return FiniteGroupoid.from_blocks(
        S.base, keys,
        src=S.pi[b],
        tgt=S.pi[a],
        identity=ident,
        inv=cls[b, a],
        mul_block=mul_block,
    )


def principal_gset_from_groupoid(G: FiniteGroupoid, x: int) -> PrincipalGroupSet:
    """Arrows into ``x`` under the isotropy group at ``x`` acting by composition,
    projected by ``src``."""
    _require_transitive(G)
    loops = isotropy_arrows(G, x)
    P = G.arrows_to(x)
    pos = {int(p): i for i, p in enumerate(P)}
    action = np.array([[pos[int(G.comp[g, p])] for p in P] for g in loops], dtype=np.int64)
    return PrincipalGroupSet(
        isotropy_group(G, x), [G.arrows[p] for p in P], G.objects, G.src[P], action,
    )


def ehresmann_roundtrip(G: FiniteGroupoid, x: int) -> GroupoidIso:
    """Rebuild ``G`` from its principal group-set at ``x`` and return the
    isomorphism ``[(p, p')] -> p^{-1} p'`` onto ``G``, validated."""
    S = principal_gset_from_groupoid(G, x)
    G2 = groupoid_from_principal_gset(S)
    P = G.arrows_to(x)
    where = {k: int(a) for k, a in zip(S.carrier, P)}
    f1 = [int(G.comp[G.inv[where[pk]], where[qk]]) for pk, qk in G2.arrows]
    iso = GroupoidIso(G2, G, np.arange(G.n_objects), f1)
    problems = iso.check()
    if problems:
        raise AssertionError(f"internal error: roundtrip map is not an isomorphism: {problems[:3]}")
    return iso


@dataclass(frozen=True)
class GsetIso:
    """``(alpha, F, beta)`` with ``F(g·p) = alpha(g)·F(p)`` and ``pi'(F(p)) = beta(pi(p))``."""

    alpha: np.ndarray
    F: np.ndarray
    beta: np.ndarray


def check_gset_iso(S: PrincipalGroupSet, T: PrincipalGroupSet, iso: GsetIso) -> list[str]:
    problems = []
    A, B = S.group, T.group
    alpha, F, beta = (np.asarray(v) for v in (iso.alpha, iso.F, iso.beta))
    if sorted(alpha.tolist()) != list(range(B.order)) or A.order != B.order:
        problems.append("alpha is not a bijection")
    elif not np.array_equal(alpha[A.comp], B.comp[alpha[:, None], alpha[None, :]]):
        problems.append("alpha is not a homomorphism")
    if sorted(F.tolist()) != list(range(T.size)) or S.size != T.size:
        problems.append("F is not a bijection")
        return problems
    if sorted(beta.tolist()) != list(range(len(T.base))):
        problems.append("beta is not a bijection")
    if not np.array_equal(F[S.action], T.action[alpha][:, F]):
        problems.append("F is not equivariant")
    if not np.array_equal(T.pi[F], beta[S.pi]):
        problems.append("F does not cover beta")
    return problems


def find_gset_isomorphism(S: PrincipalGroupSet, T: PrincipalGroupSet) -> GsetIso | None:
    """Search for an equivariant bijection between principal group-sets.

    For each group isomorphism, orbits of ``S`` are matched to orbits of
    ``T`` and a representative image chosen; the action determines the rest.
    """
    if S.size != T.size or len(S.base) != len(T.base):
        return None
    s_orbits = [np.flatnonzero(S.pi == m) for m in range(len(S.base))]
    t_orbits = [np.flatnonzero(T.pi == m) for m in range(len(T.base))]
    for alpha in iter_group_homomorphisms(S.group, T.group, bijective=True):
        F = np.full(S.size, UNDEFINED, dtype=np.int64)
        beta = np.full(len(S.base), UNDEFINED, dtype=np.int64)
        used = set()

        def rec(i):
            if i == len(s_orbits):
                return True
            orb = s_orbits[i]
            if orb.size == 0:
                return False
            r = orb[0]
            for j, torb in enumerate(t_orbits):
                if j in used or torb.size != orb.size:
                    continue
                for y in torb:
                    img = T.action[alpha, y]
                    F[S.action[:, r]] = img
                    if set(F[orb].tolist()) != set(torb.tolist()):
                        continue
                    beta[i] = j
                    used.add(j)
                    if rec(i + 1):
                        return True
                    used.discard(j)
            return False

        if rec(0):
            iso = GsetIso(alpha, F.copy(), beta.copy())
            if not check_gset_iso(S, T, iso):
                return iso
    return None


def reverse_roundtrip(S: PrincipalGroupSet, explicit: bool = False):
    """Groupoid of ``S``, then its principal group-set at ``pi(p0)``; returns
    ``(T, iso)`` with ``iso: S -> T`` found by search (or, with
    ``explicit``, the map ``p -> [(p0, p)]``), or ``(T, None)``."""
    G2 = groupoid_from_principal_gset(S)
    x = int(S.pi[0])
    T = principal_gset_from_groupoid(G2, x)
    if not explicit:
        return T, find_gset_isomorphism(S, T)
    cls, _ = _pair_classes(S)
    P = G2.arrows_to(x)
    pos = {int(p): i for i, p in enumerate(P)}
    F = np.array([pos[int(cls[0, q])] for q in range(S.size)], dtype=np.int64)
    loops = isotropy_arrows(G2, x)
    lpos = {int(k): i for i, k in enumerate(loops)}
    alpha = np.array([lpos[int(cls[0, S.action[g, 0]])] for g in range(S.group.order)], dtype=np.int64)
    iso = GsetIso(alpha, F, np.arange(len(S.base)))
    return T, (iso if not check_gset_iso(S, T, iso) else None)


# -- the transitivity characterization -----------------------------------------


def pullback_unit_right_division(G: FiniteGroupoid, Gv: FiniteGroupoid, P: Biset) -> np.ndarray:
    """Right division on the pull-back of the unit biset along the canonical
    morphism ``Gv -> G``, by the closed formula.

    The carrier consists of pairs ``(f, x)`` with ``src(f) = varsigma(x)``.
    For pairs with ``tgt(f) = tgt(f')`` the unique arrow carrying ``(f, x)``
    to ``(f', x')`` is ``(x, f^{-1} f', x')``.
    """
    idx = Gv.arrow_index
    n = P.size
    d = np.full((n, n), UNDEFINED, dtype=np.int64)
    for i, (f, x) in enumerate(P.carrier):
        for j, (f2, x2) in enumerate(P.carrier):
            if G.tgt[f] == G.tgt[f2]:
                d[i, j] = idx[(x, int(G.comp[G.inv[f], f2]), x2)]
    return d


@dataclass(frozen=True)
class PropGrpdRecord:
    varsigma: tuple
    weak_equivalence: bool
    left_principal: bool
    right_principal: bool
    right_reason: str
    right_canonical_bijective: bool
    closed_form_agrees: bool
    certificate_ok: bool

    def to_dict(self) -> dict:
        return {
            "varsigma": list(self.varsigma),
            "weak_equivalence": self.weak_equivalence,
            "left_principal": self.left_principal,
            "right_principal": self.right_principal,
            "right_failure": self.right_reason,
            "right_canonical_bijective": self.right_canonical_bijective,
            "closed_form_agrees": self.closed_form_agrees,
            "certificate_ok": self.certificate_ok,
        }


@dataclass(frozen=True)
class PropGrpdReport:
    """Per-map records plus the global comparison with transitivity.

    ``consistent`` holds when, for every tested map, the weak-equivalence
    verdict equals the right-principality verdict and the pull-back is
    left principal, and when "every map gives a weak equivalence", "every
    pull-back is principal" and "the groupoid is transitive" all agree.
    """

    transitive: bool
    max_x: int
    records: tuple
    disagreements: tuple
    all_we: bool
    all_principal: bool
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "transitive": self.transitive,
            "max_x": self.max_x,
            "instances": len(self.records),
            "all_weak_equivalences": self.all_we,
            "all_principal": self.all_principal,
            "consistent": self.consistent,
            "disagreements": [list(d) for d in self.disagreements],
            "records": [r.to_dict() for r in self.records],
        }


def _prop_grpd_instance(G: FiniteGroupoid, U: Biset, vs: tuple) -> PropGrpdRecord:
    Gv, phi = induced_groupoid(G, vs)
    cert = is_weak_equivalence(phi)
    cert_ok = cert is None or not check_we_certificate(phi, cert)
    P = pullback_biset(U, phi)
    left = check_left_principal(P)
    right = check_right_principal(P)
    d, _, bad = right_division(P)
    closed = pullback_unit_right_division(G, Gv, P)
    return PropGrpdRecord(
        varsigma=tuple(int(v) for v in vs),
        weak_equivalence=cert is not None,
        left_principal=bool(left),
        right_principal=bool(right),
        right_reason=right.reason,
        right_canonical_bijective=bad is None,
        closed_form_agrees=bad is None and np.array_equal(d, closed),
        certificate_ok=cert_ok,
    )


def iter_maps(n_objects: int, max_x: int):
    """All maps ``{0..k-1} -> {0..n-1}`` for ``k = 1..max_x`` in lexicographic order."""
    for k in range(1, max_x + 1):
        yield from itertools.product(range(n_objects), repeat=k)


def verify_prop_grpd(G: FiniteGroupoid, max_x: int = 3, workers: int = 1,
                     max_arrows: int = DEFAULT_MAX_ARROWS) -> PropGrpdReport:
    """Check the three-way characterization of transitivity on every map
    ``varsigma`` with domain size at most ``max_x``.

    A positive result means "verified up to the bound".  Inputs whose
    induced groupoids would exceed ``max_arrows`` arrows are refused.
    """
    if max_x < 1:
        raise PreconditionError("max_x must be at least 1", (max_x,))
    if max_x * max_x * G.n_arrows > max_arrows:
        raise SearchRefused(f"induced groupoids may reach {max_x * max_x * G.n_arrows} arrows, over {max_arrows}")
    U = unit_biset(G)
    maps = list(iter_maps(G.n_objects, max_x))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            records = tuple(ex.map(lambda vs: _prop_grpd_instance(G, U, vs), maps))
    else:
        records = tuple(_prop_grpd_instance(G, U, vs) for vs in maps)
    transitive = bool(is_transitive(G))
    disagreements = []
    for r in records:
        if r.weak_equivalence != r.right_principal:
            disagreements.append((list(r.varsigma), "weak-equivalence vs right-principal"))
        if not r.left_principal:
            disagreements.append((list(r.varsigma), "pull-back not left principal"))
        if not r.certificate_ok:
            disagreements.append((list(r.varsigma), "certificate failed re-check"))
        if not r.closed_form_agrees:
            disagreements.append((list(r.varsigma), "right division differs from closed form"))
    all_we = all(r.weak_equivalence for r in records)
    all_pr = all(r.left_principal and r.right_principal for r in records)
    if not (all_we == all_pr == transitive):
        disagreements.append(([], "global verdicts differ"))
    return PropGrpdReport(transitive, max_x, records, tuple(disagreements), all_we, all_pr, not disagreements)


# -- principal bisets and weak equivalences ----------------------------------


@dataclass(frozen=True)
class PropPbResult:
    sigma: WeCertificate | None
    theta: WeCertificate | None
    sigma_problems: tuple
    theta_problems: tuple

    @property
    def ok(self) -> bool:
        return (self.sigma is not None and self.theta is not None
                and not self.sigma_problems and not self.theta_problems)

    def to_dict(self) -> dict:
        return {
            "sigma_weak_equivalence": self.sigma is not None,
            "theta_weak_equivalence": self.theta is not None,
            "sigma_problems": list(self.sigma_problems),
            "theta_problems": list(self.theta_problems),
            "ok": self.ok,
        }


def closed_form_sigma(B: Biset, T: FiniteGroupoid, delta_left: np.ndarray):
    """``Gamma(h,x,g) = (x, g, h x g^{-1})`` and
    ``Gamma^{-1}(x,g,y) = (delta(y, x g^{-1}), x, g)``."""
    R = B.right_action
    gamma = []
    for h, x, g in T.arrows:
        gamma.append((x, g, int(B.left_action[h, R[x, B.right.inv[g]]])))
    idx = T.arrow_index
    gamma_inv = {}
    G = B.right
    for x in range(B.size):
        for g in G.arrows_from(int(B.right_anchor[x])):
            xg = int(R[x, G.inv[g]])
            for y in np.flatnonzero(B.right_anchor == G.tgt[g]):
                gamma_inv[(x, int(g), int(y))] = idx[(int(delta_left[y, xg]), x, int(g))]
    return gamma, gamma_inv


def closed_form_theta(B: Biset, T: FiniteGroupoid, delta_right: np.ndarray):
    """``Gamma(h,x,g) = (x, h, h x g^{-1})`` and
    ``Gamma^{-1}(x,h,y) = (h, x, delta'(h x, y)^{-1})``."""
    L, H, G = B.left_action, B.left, B.right
    gamma = []
    for h, x, g in T.arrows:
        gamma.append((x, h, int(L[h, B.right_action[x, G.inv[g]]])))
    idx = T.arrow_index
    gamma_inv = {}
    for x in range(B.size):
        for h in H.arrows_from(int(B.left_anchor[x])):
            hx = int(L[h, x])
            for y in np.flatnonzero(B.left_anchor == H.tgt[h]):
                gamma_inv[(x, int(h), int(y))] = idx[(int(h), x, int(G.inv[delta_right[hx, y]]))]
    return gamma, gamma_inv


def _compare(cert: WeCertificate | None, m: GroupoidMorphism, gamma, gamma_inv) -> tuple:
    if cert is None:
        return ("not a weak equivalence",)
    problems = list(check_we_certificate(m, cert))
    if list(cert.gamma) != gamma:
        bad = next(i for i, (a, b) in enumerate(zip(cert.gamma, gamma)) if tuple(a) != tuple(b))
        problems.append(f"Gamma differs from the closed form at arrow {bad}")
    if cert.gamma_inv != gamma_inv:
        problems.append("Gamma inverse differs from the closed form")
    return tuple(problems)


def verify_prop_pb(B: Biset, T: FiniteGroupoid | None = None) -> PropPbResult:
    """Certify both projections out of the two-sided translation groupoid of
    a left and right principal biset, and compare with the closed forms."""
    left = check_left_principal(B)
    if not left:
        raise PreconditionError(f"biset is not left principal ({left.reason})", left.counterexample)
    right = check_right_principal(B)
    if not right:
        raise PreconditionError(f"biset is not right principal ({right.reason})", right.counterexample)
    for W in (left.evidence, right.evidence):
        problems = check_principality_witness(B, W)
        if problems:
            raise AssertionError(f"internal error: {problems[:3]}")
    T = two_sided_translation_groupoid(B) if T is None else T
    S, Th = sigma_morphism(B, T), theta_morphism(B, T)
    cs, ct = is_weak_equivalence(S), is_weak_equivalence(Th)
    gs = closed_form_sigma(B, T, left.evidence.delta)
    gt = closed_form_theta(B, T, right.evidence.delta)
    return PropPbResult(cs, ct, _compare(cs, S, *gs), _compare(ct, Th, *gt))


def orbit_lemma_holds(B: Biset) -> bool:
    """Left orbits are exactly the fibres of the right anchor, which is onto."""
    return check_orbit_bijection(B, "left") and len(left_orbits(B)) == B.right.n_objects


# -- bounded search for principal bisets ---------------------------------------


def find_principal_biset(H: FiniteGroupoid, G: FiniteGroupoid, limit: int = 2000) -> Biset | None:
    """Look for a left and right principal ``(G, H)``-biset among pull-backs
    of the unit biset of ``G`` along morphisms ``H -> G``.

    At most ``limit`` morphisms are tried.  ``None`` means none was found
    in that family, not that none exists.
    """
    from .morphisms import iter_morphisms

    U = unit_biset(G)
    for i, m in enumerate(iter_morphisms(H, G)):
        if i >= limit:
            break
        P = pullback_biset(U, m)
        if check_left_principal(P) and check_right_principal(P):
            return P
    return None


__all__ = [
    "GsetIso",
    "PrincipalGroupSet",
    "PropGrpdRecord",
    "PropGrpdReport",
    "PropPbResult",
    "base_family",
    "check_gset_iso",
    "closed_form_sigma",
    "closed_form_theta",
    "conjugation_iso",
    "ehresmann_roundtrip",
    "find_gset_isomorphism",
    "find_principal_biset",
    "groupoid_from_principal_gset",
    "iter_maps",
    "orbit_lemma_holds",
    "principal_gset_from_groupoid",
    "pullback_unit_right_division",
    "reverse_roundtrip",
    "to_induced_form",
    "validate_principal_gset",
    "verify_prop_grpd",
    "verify_prop_pb",
]

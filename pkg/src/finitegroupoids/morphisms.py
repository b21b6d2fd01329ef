"""Weak equivalences of groupoids and related constructions on morphisms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .constructions import induced_groupoid
from .core import (
    FiniteGroupoid,
    GroupoidMorphism,
    Verdict,
    compose_morphisms,
    connected_components,
    identity_morphism,
    isotropy_arrows,
    subgroup_on,
)

__all__ = [
    "WeCertificate",
    "check_we_certificate",
    "compose_morphisms",
    "factor_through_induced",
    "hom_kernel",
    "is_bijective",
    "identity_morphism",
    "is_essentially_surjective",
    "is_fully_faithful",
    "is_weak_equivalence",
    "iter_morphisms",
    "isotropy_inclusion",
    "isotropy_restriction",
]


@dataclass(frozen=True)
class WeCertificate:
    """Evidence that a morphism is a weak equivalence.

    ``we1`` maps each target object ``y`` to ``(g, u)`` with
    ``src(g) = f0(u)`` and ``tgt(g) = y``.  ``gamma[h]`` is the triple
    ``(src(h), f1(h), tgt(h))`` and ``gamma_inv`` inverts it on the whole
    fibre product of source objects, target arrows and source objects.
    """

    we1: dict
    gamma: tuple
    gamma_inv: dict


def is_essentially_surjective(m: GroupoidMorphism, formulation: str = "target") -> Verdict:
    """Every target object is reached by an arrow from the image of the object map.

    ``formulation="target"`` looks for arrows leaving the image,
    ``"source"`` for arrows entering it; the two agree for groupoids.
    On success the evidence maps each object ``y`` to ``(g, u)``.
    """
    G = m.target
    in_image = np.zeros(G.n_objects, dtype=bool)
    in_image[m.f0] = True
    first_u = {}
    for u, x in enumerate(m.f0):
        first_u.setdefault(int(x), u)
    evidence = {}
    for y in range(G.n_objects):
        if formulation == "target":
            cands = G.arrows_to(y)
            ends = G.src[cands]
        elif formulation == "source":
            cands = G.arrows_from(y)
            ends = G.tgt[cands]
        else:
            raise ValueError(f"unknown formulation {formulation!r}")
        hit = np.flatnonzero(in_image[ends])
        if hit.size == 0:
            return Verdict(False, counterexample=y, reason=f"object {G.objects[y]!r} is not reached")
        g = int(cands[hit[0]])
        evidence[y] = (g, first_u[int(ends[hit[0]])])
    return Verdict(True, evidence=evidence)


def is_fully_faithful(m: GroupoidMorphism) -> Verdict:
    """The arrow map restricts to a bijection on every hom-set.

    On success the evidence is ``(gamma, gamma_inv)``; on failure the
    counterexample is ``(u, v, kind, detail)`` where ``kind`` is
    ``"not-injective"`` (two arrows with the same image) or
    ``"not-surjective"`` (a missed target arrow).
    """
    H, G = m.source, m.target
    f0, f1 = m.f0, m.f1
    gamma_inv = {}
    for u in range(H.n_objects):
        for v in range(H.n_objects):
            hs = H.hom(u, v)
            gs = G.hom(int(f0[u]), int(f0[v]))
            seen = {}
            for h in hs:
                g = int(f1[h])
                if g in seen:
                    return Verdict(False, counterexample=(u, v, "not-injective", (seen[g], int(h))),
                                   reason=f"hom-set ({u},{v}) is not mapped injectively")
                seen[g] = int(h)
            for g in gs:
                if int(g) not in seen:
                    return Verdict(False, counterexample=(u, v, "not-surjective", int(g)),
                                   reason=f"hom-set ({u},{v}) misses arrow {int(g)}")
                gamma_inv[(u, int(g), v)] = seen[int(g)]
    gamma = tuple((int(H.src[h]), int(f1[h]), int(H.tgt[h])) for h in range(H.n_arrows))
    return Verdict(True, evidence=(gamma, gamma_inv))


def is_weak_equivalence(m: GroupoidMorphism) -> WeCertificate | None:
    es = is_essentially_surjective(m)
    if not es:
        return None
    ff = is_fully_faithful(m)
    if not ff:
        return None
    gamma, gamma_inv = ff.evidence
    return WeCertificate(es.evidence, gamma, gamma_inv)


def check_we_certificate(m: GroupoidMorphism, cert: WeCertificate) -> list[str]:
    """Re-check a certificate against the morphism without trusting its producer.

    Returns a list of problems; empty means the certificate is sound.
    """
    H, G = m.source, m.target
    problems = []
    for y in range(G.n_objects):
        if y not in cert.we1:
            problems.append(f"we1: object {y} has no entry")
            continue
        g, u = cert.we1[y]
        if not (0 <= g < G.n_arrows and 0 <= u < H.n_objects):
            problems.append(f"we1: entry for {y} out of range")
        elif G.src[g] != m.f0[u] or G.tgt[g] != y:
            problems.append(f"we1: entry for {y} fails src(g)=f0(u), tgt(g)=y")
    if len(cert.gamma) != H.n_arrows:
        problems.append("gamma: wrong length")
        return problems
    for h, (a, g, b) in enumerate(cert.gamma):
        if (a, b) != (H.src[h], H.tgt[h]) or g != m.f1[h]:
            problems.append(f"gamma: entry {h} disagrees with (src, f1, tgt)")
    # the fibre product, enumerated independently of the certificate
    fibre = [
        (u, int(g), v)
        for u in range(H.n_objects)
        for g in G.arrows_from(int(m.f0[u]))
        for v in range(H.n_objects)
        if G.tgt[g] == m.f0[v]
    ]
    if set(fibre) != set(cert.gamma_inv):
        problems.append("gamma_inv: domain is not the fibre product")
    for t in fibre:
        h = cert.gamma_inv.get(t)
        if h is None:
            continue
        if tuple(cert.gamma[h]) != t:
            problems.append(f"gamma_inv: gamma(gamma_inv{t}) != {t}")
    for h, t in enumerate(cert.gamma):
        if cert.gamma_inv.get(tuple(t)) != h:
            problems.append(f"gamma_inv: gamma_inv(gamma({h})) != {h}")
    return problems


def factor_through_induced(m: GroupoidMorphism) -> tuple[GroupoidMorphism, GroupoidMorphism]:
    """Split ``m: H -> G`` as ``H -> G^{f0} -> G``.

    The first factor is the identity on objects and sends ``h`` to
    ``(tgt(h), f1(h), src(h))``; the second is the canonical morphism.
    """
    H = m.source
    Gv, canonical = induced_groupoid(m.target, m.f0, H.objects)
    idx = Gv.arrow_index
    f1 = [idx[(int(H.tgt[h]), int(m.f1[h]), int(H.src[h]))] for h in range(H.n_arrows)]
    first = GroupoidMorphism(H, Gv, np.arange(H.n_objects), f1)
    return first, canonical


def isotropy_inclusion(G: FiniteGroupoid, x: int) -> GroupoidMorphism:
    """The inclusion of the isotropy group at ``x`` into ``G``."""
    loops = isotropy_arrows(G, x)
    return GroupoidMorphism(subgroup_on(G, loops), G, [x], loops)


def isotropy_restriction(m: GroupoidMorphism, u: int) -> GroupoidMorphism:
    """The induced homomorphism between isotropy groups at ``u`` and ``f0(u)``."""
    H, G = m.source, m.target
    hl = isotropy_arrows(H, u)
    gl = isotropy_arrows(G, int(m.f0[u]))
    pos = {int(a): i for i, a in enumerate(gl)}
    return GroupoidMorphism(subgroup_on(H, hl), subgroup_on(G, gl), [0], [pos[int(m.f1[h])] for h in hl])


def hom_kernel(m: GroupoidMorphism) -> list[int]:
    """Kernel of a homomorphism between one-object groupoids, as source ids."""
    e = int(m.target.identity[0])
    return [int(a) for a in np.flatnonzero(m.f1 == e)]


def is_bijective(m: GroupoidMorphism) -> bool:
    return (
        m.source.n_objects == m.target.n_objects
        and m.source.n_arrows == m.target.n_arrows
        and np.unique(m.f0).size == m.f0.size
        and np.unique(m.f1).size == m.f1.size
    )


def iter_morphisms(H: FiniteGroupoid, G: FiniteGroupoid):
    """Enumerate every morphism ``H -> G``.

    On each component of ``H`` a morphism is fixed by the image of the base
    object, a homomorphism out of the base isotropy group, and the images
    of the arrows ``f[y]: y -> base`` taken as the least such arrow.
    """
    from .isomorphism import iter_group_homomorphisms

    blocks = connected_components(H)
    data = []
    for block in blocks:
        b = block[0]
        loops = isotropy_arrows(H, b)
        pos = {int(k): i for i, k in enumerate(loops)}
        fam = {y: (int(H.identity[b]) if y == b else int(H.hom(y, b).min())) for y in block}
        data.append((block, b, loops, pos, fam, subgroup_on(H, loops)))
    f0 = np.zeros(H.n_objects, dtype=np.int64)
    f1 = np.zeros(H.n_arrows, dtype=np.int64)

    def component_choices(k):
        block, b, loops, pos, fam, Hb = data[k]
        others = [y for y in block if y != b]
        for c in range(G.n_objects):
            gl = isotropy_arrows(G, c)
            Gc = subgroup_on(G, gl)
            into_c = G.arrows_to(c)
            for alpha in iter_group_homomorphisms(Hb, Gc):
                for imgs in itertools.product(into_c, repeat=len(others)):
                    F = {b: int(G.identity[c])}
                    F.update({y: int(a) for y, a in zip(others, imgs)})
                    yield c, gl, alpha, F

    def rec(k):
        if k == len(data):
            yield GroupoidMorphism(H, G, f0.copy(), f1.copy())
            return
        block, b, loops, pos, fam, _ = data[k]
        for c, gl, alpha, F in component_choices(k):
            for y in block:
                f0[y] = G.src[F[y]]
            for a in block:
                for g in H.arrows_from(a):
                    d = int(H.tgt[g])
                    kk = int(H.comp[H.comp[fam[d], g], H.inv[fam[a]]])
                    img = int(gl[alpha[pos[kk]]])
                    f1[g] = G.comp[G.comp[G.inv[F[d]], img], F[a]]
            yield from rec(k + 1)

    yield from rec(0)

"""Command-line interface.

Exit status: 0 when a property is verified or an object constructed, 1 when
a property is refuted on the given input (the report carries a witness),
2 for unusable input, bad usage, or a refused computation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bisets as bs
from . import serialization as ser
from .constructions import (
    action_groupoid,
    coset_action,
    disjoint_union,
    equivalence_closure,
    equivalence_relation_groupoid,
    induced_groupoid,
    natural_permutation_action,
    pair_groupoid,
    regular_action,
    symmetric_group,
    trivial_action,
)
from .core import (
    FiniteGroupoid,
    GroupoidError,
    connected_components,
    isotropy_arrows,
    isotropy_group,
    is_transitive,
    validate_groupoid,
    validate_morphism,
)
from .generate import SHAPES, RandomSpec, catalogue_group, generate
from .isomorphism import DEFAULT_MAX_ARROWS, element_orders
from .morphisms import check_we_certificate, is_essentially_surjective, is_fully_faithful, is_weak_equivalence
from .theorems import conjugation_iso, ehresmann_roundtrip, verify_prop_grpd, verify_prop_pb

ENV_MAX_ARROWS = "FINITEGROUPOIDS_MAX_ARROWS"

VERIFIED, REFUTED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers ----------------------------------------------------------------


def _label(v):
    return ser._label_out(v)


def _violations(viol) -> list:
    return [{"axiom": v.axiom, "witness": _jsonable(v.witness)} for v in viol]


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _read_inputs(args, count: int | None = None, at_least: int = 1) -> list:
    paths = args.inputs or []
    if count is not None and len(paths) != count:
        raise UsageError(f"expected {count} --in file(s), got {len(paths)}")
    if len(paths) < at_least:
        raise UsageError(f"expected at least {at_least} --in file(s)")
    return [ser.load_path(p) for p in paths]


def _groupoid(doc, check=True) -> FiniteGroupoid:
    if ser.document_kind(doc) != "groupoid":
        raise ser.DocumentError("expected a groupoid document", "/format")
    return ser.deserialize(doc, check)


def _biset(doc) -> bs.Biset:
    kind = ser.document_kind(doc)
    if kind == "groupoid":
        return bs.unit_biset(ser.deserialize(doc))
    if kind != "biset":
        raise ser.DocumentError("expected a biset document", "/format")
    B = ser.deserialize_biset(doc)
    return B


def _object(G: FiniteGroupoid, token: str) -> int:
    for i, o in enumerate(G.objects):
        if str(o) == token or json.dumps(_label(o)) == token:
            return i
    try:
        i = int(token)
    except ValueError:
        raise UsageError(f"no object {token!r}") from None
    if not 0 <= i < G.n_objects:
        raise UsageError(f"object index {i} out of range")
    return i


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _check_biset_valid(B):
    viol = bs.validate_biset(B)
    if viol:
        return {"valid": False, "violations": _violations(viol)}
    return None


# -- commands ---------------------------------------------------------------


def cmd_validate(args):
    doc = _read_inputs(args, 1)[0]
    kind = ser.document_kind(doc)
    if kind == "groupoid":
        G = ser.deserialize(doc, check_axioms=False)
        viol = validate_groupoid(G)
    elif kind == "morphism":
        m = ser.deserialize_morphism(doc, check_axioms=False)
        viol = validate_morphism(m)
    elif kind == "biset":
        viol = bs.validate_biset(ser.deserialize_biset(doc))
    elif kind == "groupoid-set":
        S = ser.deserialize_groupoid_set(doc)
        viol = (bs.validate_right_action if isinstance(S, bs.RightGroupoidSet) else bs.validate_left_action)(S)
    else:
        from .theorems import validate_principal_gset

        viol = validate_principal_gset(ser.deserialize_principal_gset(doc))
    result = {"kind": kind, "valid": not viol, "violations": _violations(viol)}
    summary = f"{kind}: valid" if not viol else f"{kind}: {len(viol)} violation(s), first {viol[0].axiom} at {_jsonable(viol[0].witness)}"
    return (VERIFIED if not viol else REFUTED), result, summary


def cmd_analyze(args):
    G = _groupoid(_read_inputs(args, 1)[0])
    comps = connected_components(G)
    tv = is_transitive(G)
    components = []
    for block in comps:
        grp = isotropy_group(G, block[0])
        components.append({
            "objects": [_label(G.objects[x]) for x in block],
            "isotropy_order": grp.order,
            "element_orders": sorted(int(v) for v in element_orders(grp)),
        })
    result = {
        "objects": G.n_objects,
        "arrows": G.n_arrows,
        "transitive": bool(tv),
        "components": components,
        "isotropy_orders": [int(isotropy_arrows(G, x).size) for x in range(G.n_objects)],
    }
    if not tv:
        result["disconnected_pair"] = _jsonable(tv.counterexample)
    summary = f"{G.n_objects} objects, {G.n_arrows} arrows, {len(comps)} component(s), transitive={str(bool(tv)).lower()}"
    return VERIFIED, result, summary


def _group_arg(args):
    try:
        return catalogue_group(args.group)
    except KeyError:
        raise UsageError(f"unknown group {args.group!r}") from None


def cmd_construct(args):
    what = args.what
    if what == "pair":
        if args.points is None:
            raise UsageError("pair needs --points")
        obj = pair_groupoid(args.points)
    elif what == "action":
        if args.action == "natural":
            if args.n is None:
                raise UsageError("natural action needs --n")
            obj = action_groupoid(symmetric_group(args.n), *natural_permutation_action(args.n))
        else:
            grp = _group_arg(args)
            if args.action == "regular":
                obj = action_groupoid(grp, *regular_action(grp))
            elif args.action == "trivial":
                obj = action_groupoid(grp, *trivial_action(range(args.points or 1)))
            else:
                obj = action_groupoid(grp, *coset_action(grp, _ints(args.subgroup or "")))
    elif what == "equivalence":
        if args.points is None:
            raise UsageError("equivalence needs --points")
        pairs = []
        for tok in (args.pairs or "").split(","):
            if tok.strip():
                a, _, b = tok.partition("-")
                try:
                    pairs.append((int(a), int(b)))
                except ValueError:
                    raise UsageError(f"bad pair {tok!r}; expected a-b") from None
        X = range(args.points)
        obj = equivalence_relation_groupoid(X, equivalence_closure(X, pairs))
    elif what == "induced":
        G = _groupoid(_read_inputs(args, 1)[0])
        if args.map is None:
            raise UsageError("induced needs --map")
        vs = _ints(args.map)
        if any(not 0 <= v < G.n_objects for v in vs):
            raise UsageError("map value out of range")
        Gv, phi = induced_groupoid(G, vs)
        obj = phi if args.morphism else Gv
    elif what == "disjoint-union":
        docs = _read_inputs(args, at_least=1)
        obj = _groupoid(docs[0])
        for d in docs[1:]:
            obj = disjoint_union(obj, _groupoid(d))
    elif what == "unit-biset":
        obj = bs.unit_biset(_groupoid(_read_inputs(args, 1)[0]))
    elif what == "pullback":
        bdoc, mdoc = _read_inputs(args, 2)
        B = _biset(bdoc)
        m = ser.deserialize_morphism(mdoc)
        obj = bs.pullback_biset(B, m)
    elif what == "opposite":
        obj = bs.opposite_biset(_biset(_read_inputs(args, 1)[0]))
    elif what == "tensor":
        d1, d2 = _read_inputs(args, 2)
        obj = bs.tensor_biset(_biset(d1), _biset(d2))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown construction {what!r}")
    return _emit_document(args, obj, f"constructed {what}")


def _emit_document(args, obj, summary):
    doc = ser.dump(obj)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(ser.dumps(doc))
        return VERIFIED, {"written": args.out, "format": doc["format"]}, f"{summary} -> {args.out}"
    return VERIFIED, doc, None


def cmd_morphism(args):
    m = ser.deserialize_morphism(_read_inputs(args, 1)[0], check_axioms=False)
    viol = validate_morphism(m)
    if args.check == "functor" or viol:
        result = {"functor": not viol, "violations": _violations(viol)}
        if args.check == "we":
            result["weak_equivalence"] = False
        summary = "functor" if not viol else f"not a functor: {viol[0].axiom} at {_jsonable(viol[0].witness)}"
        return (VERIFIED if not viol else REFUTED), result, summary
    es = is_essentially_surjective(m)
    es_src = is_essentially_surjective(m, formulation="source")
    ff = is_fully_faithful(m)
    cert = is_weak_equivalence(m)
    result = {
        "functor": True,
        "essentially_surjective": bool(es),
        "essentially_surjective_source_form": bool(es_src),
        "fully_faithful": bool(ff),
        "weak_equivalence": cert is not None,
    }
    if not es:
        result["unreached_object"] = es.counterexample
    if not ff:
        result["hom_set_failure"] = _jsonable(ff.counterexample)
    if cert is not None:
        result["certificate"] = {
            "we1": {str(k): list(v) for k, v in sorted(cert.we1.items())},
            "gamma": [list(t) for t in cert.gamma],
            "certificate_problems": check_we_certificate(m, cert),
        }
        return VERIFIED, result, "weak equivalence"
    return REFUTED, result, "not a weak equivalence: " + (
        f"object {es.counterexample} not reached" if not es else f"hom-set failure {_jsonable(ff.counterexample)}")


def _principal_result(v):
    if v:
        W = v.evidence
        return {"holds": True, "delta": _jsonable(W.delta)}
    return {"holds": False, "failed": v.reason, "witness": _jsonable(v.counterexample)}


def cmd_biset(args):
    B = _biset(_read_inputs(args, 1)[0])
    invalid = _check_biset_valid(B)
    if invalid is not None:
        return REFUTED, invalid, f"not a biset: {invalid['violations'][0]['axiom']}"
    if args.check == "validate":
        return VERIFIED, {"valid": True, "size": B.size}, f"valid biset on {B.size} points"
    result = {"valid": True}
    ok = True
    if args.check in ("left-principal", "principal"):
        v = bs.check_left_principal(B)
        result["left_principal"] = _principal_result(v)
        if v:
            result["left_orbit_bijection"] = bs.check_orbit_bijection(B, "left")
        ok &= bool(v)
    if args.check in ("right-principal", "principal"):
        v = bs.check_right_principal(B)
        result["right_principal"] = _principal_result(v)
        if v:
            result["right_orbit_bijection"] = bs.check_orbit_bijection(B, "right")
        ok &= bool(v)
    parts = [f"{k.replace('_', '-')}={'yes' if v['holds'] else 'no (' + v['failed'] + ')'}"
             for k, v in result.items() if isinstance(v, dict)]
    return (VERIFIED if ok else REFUTED), result, ", ".join(parts)


def cmd_theorem(args):
    which = args.which
    if which == "prop-grpd":
        G = _groupoid(_read_inputs(args, 1)[0])
        R = verify_prop_grpd(G, args.max_x, workers=args.workers, max_arrows=args.max_arrows)
        summary = (f"transitive={str(R.transitive).lower()}, {len(R.records)} maps tested up to |X|={R.max_x}, "
                   f"consistent={str(R.consistent).lower()}")
        return (VERIFIED if R.consistent else REFUTED), R.to_dict(), summary
    if which == "prop-pb":
        B = _biset(_read_inputs(args, 1)[0])
        invalid = _check_biset_valid(B)
        if invalid is not None:
            return USAGE, invalid, "input is not a biset"
        r = verify_prop_pb(B)
        out = r.to_dict()
        return (VERIFIED if r.ok else REFUTED), out, "both projections are weak equivalences matching the closed forms" if r.ok else "refuted"
    if which == "ehresmann":
        G = _groupoid(_read_inputs(args, 1)[0])
        if G.n_arrows > args.max_arrows:
            raise GroupoidError(f"refused: {G.n_arrows} arrows exceed the bound {args.max_arrows}")
        x = _object(G, args.base) if args.base is not None else 0
        iso = ehresmann_roundtrip(G, x)
        result = {
            "base": _label(G.objects[x]),
            "rebuilt_arrows": [_label(a) for a in iso.source.arrows],
            "f0": _jsonable(iso.f0),
            "f1": _jsonable(iso.f1),
            "iso_problems": _jsonable(iso.check()),
        }
        return VERIFIED, result, f"rebuilt groupoid is isomorphic to the input ({G.n_arrows} arrows)"
    if which == "conjugation":
        G = _groupoid(_read_inputs(args, 1)[0])
        arrows = [int(args.arrow)] if args.arrow is not None else list(range(G.n_arrows))
        if any(not 0 <= a < G.n_arrows for a in arrows):
            raise UsageError("arrow index out of range")
        maps = []
        for a in arrows:
            iso = conjugation_iso(G, a)
            maps.append({"arrow": a, "source": int(G.src[a]), "target": int(G.tgt[a]),
                         "map": _jsonable(iso.f1)})
        return VERIFIED, {"conjugations": maps}, f"{len(maps)} conjugation isomorphism(s) verified"
    raise UsageError(f"unknown theorem {which!r}")  # pragma: no cover


def cmd_generate(args):
    spec = RandomSpec(args.seed, args.shape, args.objects, args.max_objects,
                      min(args.max_generated_arrows, args.max_arrows), args.max_group_order)
    G = generate(spec)
    return _emit_document(args, G, f"generated {args.shape} groupoid with {G.n_arrows} arrows")


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="inputs", action="append", metavar="FILE",
                        help="input document (repeat for several)")
    common.add_argument("--out", help="write the produced document here")
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--max-arrows", type=int, default=None,
                        help=f"refusal bound for exhaustive searches (default {DEFAULT_MAX_ARROWS} "
                             f"or ${ENV_MAX_ARROWS})")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="finitegroupoids", description="Finite groupoids, bisets and transitivity checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check the axioms of any document")
    sub.add_parser("analyze", parents=[common], help="components, transitivity and isotropy")

    c = sub.add_parser("construct", parents=[common], help="build a groupoid or biset")
    c.add_argument("what", choices=("pair", "action", "equivalence", "induced", "disjoint-union",
                                    "unit-biset", "pullback", "opposite", "tensor"))
    c.add_argument("--points", type=int)
    c.add_argument("--group", default="C2", help="catalogue group name (C1, C2, C3, C4, C2xC2, C5, C6, S3, C8, D4, Q8)")
    c.add_argument("--action", choices=("regular", "trivial", "cosets", "natural"), default="regular")
    c.add_argument("--subgroup", help="subgroup element ids for the coset action, comma-separated")
    c.add_argument("--n", type=int, help="degree for the natural action of a symmetric group")
    c.add_argument("--pairs", help="related pairs as a-b,c-d")
    c.add_argument("--map", help="object map for induced, comma-separated")
    c.add_argument("--morphism", action="store_true", help="for induced: emit the canonical morphism")

    m = sub.add_parser("morphism", parents=[common], help="check a morphism document")
    m.add_argument("check", choices=("functor", "we"))

    b = sub.add_parser("biset", parents=[common], help="check a biset document")
    b.add_argument("check", choices=("validate", "left-principal", "right-principal", "principal"))

    t = sub.add_parser("theorem", parents=[common], help="verify a theorem on an instance")
    t.add_argument("which", choices=("prop-grpd", "prop-pb", "ehresmann", "conjugation"))
    t.add_argument("--max-x", type=int, default=3)
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--base", help="base object (label or index)")
    t.add_argument("--arrow", help="arrow index")

    g = sub.add_parser("generate", parents=[common], help="generate a random groupoid")
    g.add_argument("--shape", choices=SHAPES, default="arbitrary-valid")
    g.add_argument("--objects", type=int)
    g.add_argument("--max-objects", type=int, default=6)
    g.add_argument("--max-generated-arrows", type=int, default=100, metavar="N",
                   help="arrow bound for the generated groupoid")
    g.add_argument("--max-group-order", type=int, default=8)
    return p


_COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "morphism": cmd_morphism,
    "biset": cmd_biset,
    "theorem": cmd_theorem,
    "generate": cmd_generate,
}


def _default_bound(environ) -> int:
    raw = environ.get(ENV_MAX_ARROWS)
    if raw is None:
        return DEFAULT_MAX_ARROWS
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"${ENV_MAX_ARROWS} must be an integer, got {raw!r}") from None


def run_command(argv: list[str], environ=None) -> tuple[int, str]:
    """Run one command; return the exit status and the text to print."""
    environ = os.environ if environ is None else environ
    fmt = "machine" if "--format=machine" in argv or ("--format" in argv and "machine" in argv) else "human"
    command = None
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        command = args.command
        if args.max_arrows is None:
            args.max_arrows = _default_bound(environ)
        status, result, summary = _COMMANDS[args.command](args)
    except UsageError as e:
        return USAGE, _render(fmt, command, USAGE, {"error": "usage", "message": str(e)}, f"usage error: {e}")
    except ser.DocumentError as e:
        return USAGE, _render(fmt, command, USAGE, {"error": "document", "message": str(e), "locus": e.locus},
                              f"input error: {e}")
    except GroupoidError as e:
        kind = type(e).__name__
        body = {"error": kind, "message": str(e)}
        witness = getattr(e, "witness", None)
        if witness is not None:
            body["witness"] = _jsonable(witness)
        return USAGE, _render(fmt, command, USAGE, body, f"{kind}: {e}")
    if summary is None:  # a bare document
        return status, ser.dumps(result)
    return status, _render(fmt, command, status, result, summary)


def _render(fmt, command, status, result, summary) -> str:
    if fmt == "machine":
        label = {VERIFIED: "verified", REFUTED: "refuted", USAGE: "error"}[status]
        return ser.dumps({"command": command, "status": label, "exit": status, "result": _jsonable(result)})
    return summary + "\n"


def main(argv: list[str] | None = None) -> int:
    status, text = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if status != USAGE else sys.stderr
    stream.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

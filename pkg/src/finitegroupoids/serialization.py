"""Versioned JSON documents for groupoids, morphisms, groupoid-sets and bisets.

Every table is written out explicitly; nothing is inferred on load.  Each
document kind has a JSON schema shipped under ``schemas/``.  Errors carry a
locus: a JSON pointer into the document, or line and column for text that
is not JSON at all.

Labels may be strings, numbers, booleans, ``null`` or nested lists; lists
come back as tuples.  Other label types are written as their ``str``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
import numpy as np

from .bisets import Biset, LeftGroupoidSet, RightGroupoidSet
from .core import (
    UNDEFINED,
    FiniteGroup,
    FiniteGroupoid,
    GroupoidError,
    GroupoidMorphism,
    StructuralError,
    validate_groupoid,
    validate_morphism,
)
from .theorems import PrincipalGroupSet

VERSION = 1
KINDS = ("groupoid", "morphism", "groupoid-set", "biset", "principal-gset")


class DocumentError(GroupoidError, ValueError):
    """A document failed to parse, match its schema, or make sense.

    ``locus`` is a JSON pointer (``"/composition/3/2"``) or ``"line L column C"``.
    """

    def __init__(self, message: str, locus: str = "", details: Any = None):
        super().__init__(f"{locus}: {message}" if locus else message)
        self.message = message
        self.locus = locus
        self.details = details


# -- schemas ----------------------------------------------------------------


def _inline_refs(node, groupoid_schema):
    if isinstance(node, dict):
        if node.get("$ref") == "groupoid.schema.json":
            return groupoid_schema
        return {k: _inline_refs(v, groupoid_schema) for k, v in node.items()}
    if isinstance(node, list):
        return [_inline_refs(v, groupoid_schema) for v in node]
    return node


@lru_cache(maxsize=None)
def schema(kind: str) -> dict:
    """The JSON schema for a document kind, with references inlined."""
    if kind not in KINDS:
        raise ValueError(f"unknown document kind {kind!r}")
    root = resources.files("finitegroupoids") / "schemas"
    raw = json.loads((root / f"{kind}.schema.json").read_text(encoding="utf-8"))
    base = json.loads((root / "groupoid.schema.json").read_text(encoding="utf-8"))
    base = {k: v for k, v in base.items() if k not in ("$schema", "$id")}
    return _inline_refs(raw, base)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def check_schema(doc: Any, kind: str) -> None:
    validator = jsonschema.Draft202012Validator(schema(kind))
    errors = sorted(validator.iter_errors(doc), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        e = errors[0]
        raise DocumentError(f"schema: {e.message}", _pointer(e.absolute_path),
                            [(_pointer(x.absolute_path), x.message) for x in errors[:20]])


# -- labels -----------------------------------------------------------------


def _label_out(v):
    if isinstance(v, (tuple, list)):
        return [_label_out(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if v is None or isinstance(v, (str, int, float, bool)):
        return v
    return str(v)


def _label_in(v):
    if isinstance(v, list):
        return tuple(_label_in(x) for x in v)
    return v


# -- text -------------------------------------------------------------------


def dumps(doc: dict) -> str:
    """Byte-stable text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from None


def load_path(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read file: {e.strerror}", path) from None
    try:
        return loads(text)
    except DocumentError as e:
        raise DocumentError(e.message, f"{path}: {e.locus}") from None


def document_kind(doc: Any) -> str:
    if not isinstance(doc, dict) or not isinstance(doc.get("format"), str):
        raise DocumentError("missing 'format' field", "/format")
    fmt = doc["format"]
    prefix = "finitegroupoids/"
    if not fmt.startswith(prefix) or fmt[len(prefix):] not in KINDS:
        raise DocumentError(f"unknown format {fmt!r}", "/format")
    return fmt[len(prefix):]


# -- groupoids --------------------------------------------------------------


def serialize(G: FiniteGroupoid, name: str | None = None) -> dict:
    gs, fs = np.nonzero(G.comp >= 0)
    doc = {
        "format": "finitegroupoids/groupoid",
        "version": VERSION,
        "objects": [_label_out(o) for o in G.objects],
        "arrows": [
            {"label": _label_out(a), "src": int(G.src[i]), "tgt": int(G.tgt[i])}
            for i, a in enumerate(G.arrows)
        ],
        "identities": [int(v) for v in G.identity],
        "composition": [[int(g), int(f), int(G.comp[g, f])] for g, f in zip(gs, fs)],
        "inverse": [int(v) for v in G.inv],
    }
    if name is not None:
        doc["name"] = name
    return doc


def _range(values, hi, where):
    for i, v in enumerate(values):
        if v >= hi:
            raise DocumentError(f"index {v} out of range (size {hi})", f"{where}/{i}")


def _unique_labels(labels, where):
    seen = {}
    for i, k in enumerate(labels):
        try:
            if k in seen:
                raise DocumentError(f"label repeats entry {seen[k]}", f"{where}/{i}")
            seen[k] = i
        except TypeError:
            raise DocumentError("label is not hashable", f"{where}/{i}") from None


def _triples(rows, shape, his, where):
    """Fill a table from ``[i, j, value]`` rows, locating bad entries."""
    table = np.full(shape, UNDEFINED, dtype=np.int64)
    for r, (i, j, v) in enumerate(rows):
        for pos, (val, hi) in enumerate(zip((i, j, v), his)):
            if val >= hi:
                raise DocumentError(f"index {val} out of range (size {hi})", f"{where}/{r}/{pos}")
        if table[i, j] != UNDEFINED:
            raise DocumentError(f"entry ({i}, {j}) given twice", f"{where}/{r}")
        table[i, j] = v
    return table


def deserialize(doc: Any, check_axioms: bool = True, where: str = "") -> FiniteGroupoid:
    """Build a groupoid from a document.

    Schema, index range and table-shape problems raise :class:`DocumentError`.
    With ``check_axioms`` a groupoid violating the axioms is rejected too,
    with the first violation as locus; without it, the tables are returned
    as given for the validator to inspect.
    """
    if not where:
        check_schema(doc, "groupoid")
    objects = [_label_in(o) for o in doc["objects"]]
    arrows = [_label_in(a["label"]) for a in doc["arrows"]]
    _unique_labels(objects, f"{where}/objects")
    _unique_labels(arrows, f"{where}/arrows")
    n, m = len(objects), len(arrows)
    for i, a in enumerate(doc["arrows"]):
        for key in ("src", "tgt"):
            if a[key] >= n:
                raise DocumentError(f"object {a[key]} out of range (size {n})", f"{where}/arrows/{i}/{key}")
    if len(doc["identities"]) != n:
        raise DocumentError(f"expected {n} identities, got {len(doc['identities'])}", f"{where}/identities")
    _range(doc["identities"], m, f"{where}/identities")
    if len(doc["inverse"]) != m:
        missing = len(doc["inverse"])
        raise DocumentError(f"expected {m} inverse entries, got {missing}",
                            f"{where}/inverse/{missing}" if missing < m else f"{where}/inverse")
    _range(doc["inverse"], m, f"{where}/inverse")
    comp = _triples(doc["composition"], (m, m), (m, m, m), f"{where}/composition")
    try:
        G = FiniteGroupoid(
            objects, arrows,
            [a["src"] for a in doc["arrows"]], [a["tgt"] for a in doc["arrows"]],
            doc["identities"], comp, doc["inverse"],
        )
    except StructuralError as e:
        raise DocumentError(str(e), where or "/") from None
    if check_axioms:
        viol = validate_groupoid(G, max_per_axiom=5)
        if viol:
            v = viol[0]
            raise DocumentError(f"axiom {v.axiom} fails at {v.witness}", f"{where}/composition", viol)
    return G


# -- morphisms --------------------------------------------------------------


def serialize_morphism(m: GroupoidMorphism, name: str | None = None) -> dict:
    doc = {
        "format": "finitegroupoids/morphism",
        "version": VERSION,
        "source": serialize(m.source),
        "target": serialize(m.target),
        "f0": [int(v) for v in m.f0],
        "f1": [int(v) for v in m.f1],
    }
    if name is not None:
        doc["name"] = name
    return doc


def deserialize_morphism(doc: Any, check_axioms: bool = True) -> GroupoidMorphism:
    check_schema(doc, "morphism")
    H = deserialize(doc["source"], True, "/source")
    G = deserialize(doc["target"], True, "/target")
    for key, size, hi in (("f0", H.n_objects, G.n_objects), ("f1", H.n_arrows, G.n_arrows)):
        if len(doc[key]) != size:
            raise DocumentError(f"expected {size} entries, got {len(doc[key])}", f"/{key}")
        _range(doc[key], hi, f"/{key}")
    m = GroupoidMorphism(H, G, doc["f0"], doc["f1"])
    if check_axioms:
        viol = validate_morphism(m, max_per_axiom=5)
        if viol:
            raise DocumentError(f"morphism law {viol[0].axiom} fails at {viol[0].witness}", "/f1", viol)
    return m


# -- groupoid-sets and bisets -----------------------------------------------


def serialize_groupoid_set(S, name: str | None = None) -> dict:
    right = isinstance(S, RightGroupoidSet)
    if right:
        xs, gs = np.nonzero(S.action >= 0)
        rows = [[int(x), int(g), int(S.action[x, g])] for x, g in zip(xs, gs)]
    else:
        hs, xs = np.nonzero(S.action >= 0)
        rows = [[int(h), int(x), int(S.action[h, x])] for h, x in zip(hs, xs)]
    doc = {
        "format": "finitegroupoids/groupoid-set",
        "version": VERSION,
        "side": "right" if right else "left",
        "groupoid": serialize(S.groupoid),
        "carrier": [_label_out(c) for c in S.carrier],
        "anchor": [int(v) for v in S.anchor],
        "action": rows,
    }
    if name is not None:
        doc["name"] = name
    return doc


def deserialize_groupoid_set(doc: Any):
    check_schema(doc, "groupoid-set")
    G = deserialize(doc["groupoid"], True, "/groupoid")
    carrier = [_label_in(c) for c in doc["carrier"]]
    _unique_labels(carrier, "/carrier")
    X = len(carrier)
    if len(doc["anchor"]) != X:
        raise DocumentError(f"expected {X} anchors", "/anchor")
    _range(doc["anchor"], G.n_objects, "/anchor")
    if doc["side"] == "right":
        act = _triples(doc["action"], (X, G.n_arrows), (X, G.n_arrows, X), "/action")
        return RightGroupoidSet(G, carrier, doc["anchor"], act)
    act = _triples(doc["action"], (G.n_arrows, X), (G.n_arrows, X, X), "/action")
    return LeftGroupoidSet(G, carrier, doc["anchor"], act)


def serialize_biset(B: Biset, name: str | None = None) -> dict:
    hs, xs = np.nonzero(B.left_action >= 0)
    ys, gs = np.nonzero(B.right_action >= 0)
    doc = {
        "format": "finitegroupoids/biset",
        "version": VERSION,
        "left": serialize(B.left),
        "right": serialize(B.right),
        "carrier": [_label_out(c) for c in B.carrier],
        "left_anchor": [int(v) for v in B.left_anchor],
        "right_anchor": [int(v) for v in B.right_anchor],
        "left_action": [[int(h), int(x), int(B.left_action[h, x])] for h, x in zip(hs, xs)],
        "right_action": [[int(y), int(g), int(B.right_action[y, g])] for y, g in zip(ys, gs)],
    }
    if name is not None:
        doc["name"] = name
    return doc


def deserialize_biset(doc: Any) -> Biset:
    check_schema(doc, "biset")
    H = deserialize(doc["left"], True, "/left")
    G = deserialize(doc["right"], True, "/right")
    carrier = [_label_in(c) for c in doc["carrier"]]
    _unique_labels(carrier, "/carrier")
    X = len(carrier)
    for key, hi in (("left_anchor", H.n_objects), ("right_anchor", G.n_objects)):
        if len(doc[key]) != X:
            raise DocumentError(f"expected {X} anchors", f"/{key}")
        _range(doc[key], hi, f"/{key}")
    L = _triples(doc["left_action"], (H.n_arrows, X), (H.n_arrows, X, X), "/left_action")
    R = _triples(doc["right_action"], (X, G.n_arrows), (X, G.n_arrows, X), "/right_action")
    return Biset(H, G, carrier, doc["left_anchor"], doc["right_anchor"], L, R)


def serialize_principal_gset(S: PrincipalGroupSet, name: str | None = None) -> dict:
    doc = {
        "format": "finitegroupoids/principal-gset",
        "version": VERSION,
        "group": serialize(S.group),
        "carrier": [_label_out(c) for c in S.carrier],
        "base": [_label_out(b) for b in S.base],
        "pi": [int(v) for v in S.pi],
        "action": [[g, p, int(S.action[g, p])] for g in range(S.group.order) for p in range(S.size)],
    }
    if name is not None:
        doc["name"] = name
    return doc


def deserialize_principal_gset(doc: Any) -> PrincipalGroupSet:
    check_schema(doc, "principal-gset")
    G = deserialize(doc["group"], True, "/group")
    if G.n_objects != 1:
        raise DocumentError("group must have exactly one object", "/group/objects")
    G = FiniteGroup.from_groupoid(G)
    carrier = [_label_in(c) for c in doc["carrier"]]
    base = [_label_in(b) for b in doc["base"]]
    _unique_labels(carrier, "/carrier")
    _unique_labels(base, "/base")
    P = len(carrier)
    if len(doc["pi"]) != P:
        raise DocumentError(f"expected {P} projection entries", "/pi")
    _range(doc["pi"], len(base), "/pi")
    act = _triples(doc["action"], (G.order, P), (G.order, P, P), "/action")
    holes = np.argwhere(act < 0)
    if holes.size:
        g, p = holes[0]
        raise DocumentError(f"action undefined at ({g}, {p})", "/action")
    return PrincipalGroupSet(G, carrier, base, doc["pi"], act)


def load(doc: Any, check_axioms: bool = True):
    """Deserialize any supported document according to its ``format``."""
    kind = document_kind(doc)
    if kind == "groupoid":
        return deserialize(doc, check_axioms)
    if kind == "morphism":
        return deserialize_morphism(doc, check_axioms)
    if kind == "groupoid-set":
        return deserialize_groupoid_set(doc)
    if kind == "biset":
        return deserialize_biset(doc)
    return deserialize_principal_gset(doc)


def dump(obj, name: str | None = None) -> dict:
    """Serialize any supported object."""
    if isinstance(obj, FiniteGroupoid):
        return serialize(obj, name)
    if isinstance(obj, GroupoidMorphism):
        return serialize_morphism(obj, name)
    if isinstance(obj, (RightGroupoidSet, LeftGroupoidSet)):
        return serialize_groupoid_set(obj, name)
    if isinstance(obj, Biset):
        return serialize_biset(obj, name)
    if isinstance(obj, PrincipalGroupSet):
        return serialize_principal_gset(obj, name)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
